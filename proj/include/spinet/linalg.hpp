// Dense complex linear algebra helpers shared across the library.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Raised when a stochastic integration step leaves the physical state space
// beyond repair (see project()).
class InstabilityError : public std::runtime_error {
 public:
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double tol = 1e-12) {
  return hermiticity_defect(a) <= tol;
}

inline Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline double commutator_defect(const Matrix& a, const Matrix& b) {
  return (a * b - b * a).cwiseAbs().maxCoeff();
}

struct EighResult {
  RealVector values;   // ascending
  Matrix vectors;      // columns match values
};

// Hermitian eigendecomposition, ascending eigenvalues.
EighResult eigh(const Matrix& a);

// As eigh(), but with a deterministic convention: within each (near-)degenerate
// eigenvalue group the eigenvectors are re-derived by Gram-Schmidt on the
// projections of the computational basis vectors in index order, and every
// vector's first significant component is made real positive. Output depends
// only on the eigenspaces, not on solver internals.
EighResult eigh_canonical(const Matrix& a, double degeneracy_tol = 1e-9);

// Orthonormal basis of the null space of `a`, with singular values below
// rel_tol * sigma_max treated as zero.
Matrix null_space_basis(const Matrix& a, double rel_tol = 1e-9);

// Phase convention used by eigh_canonical: first component with magnitude
// above `tol` is rotated to the positive real axis.
void fix_phase(Eigen::Ref<Vector> v, double tol = 1e-9);

}  // namespace spinet
