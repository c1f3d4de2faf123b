#include "spinet/linalg.hpp"

#include <Eigen/SVD>

namespace spinet {

EighResult eigh(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

void fix_phase(Eigen::Ref<Vector> v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > tol) {
      v *= std::conj(v(i)) / mag;
      return;
    }
  }
}

EighResult eigh_canonical(const Matrix& a, double degeneracy_tol) {
  EighResult res = eigh(a);
  const Eigen::Index n = res.values.size();
  const double scale = std::max(1.0, res.values.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && res.values(end) - res.values(start) <= degeneracy_tol * scale) ++end;
    const Eigen::Index k = end - start;
    if (k > 1) {
      // Re-derive a basis of the eigenspace from projected basis vectors so
      // the output does not depend on how the solver resolved the degeneracy.
      const Matrix q = res.vectors.middleCols(start, k);
      Matrix basis(n, k);
      Eigen::Index got = 0;
      for (Eigen::Index j = 0; j < n && got < k; ++j) {
        Vector cand = q * (q.adjoint() * Vector::Unit(n, j));
        for (Eigen::Index m = 0; m < got; ++m)
          cand -= basis.col(m).dot(cand) * basis.col(m);
        const double nrm = cand.norm();
        if (nrm > 1e-6) {
          basis.col(got++) = cand / nrm;
        }
      }
      if (got != k) throw std::runtime_error("degenerate eigenspace canonicalization failed");
      res.vectors.middleCols(start, k) = basis;
    }
    for (Eigen::Index j = start; j < end; ++j) fix_phase(res.vectors.col(j));
    start = end;
  }
  return res;
}

Matrix null_space_basis(const Matrix& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? sv(0) * rel_tol : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

}  // namespace spinet
