#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace lops {

using Complex = std::complex<double>;
// Dense complex matrix; m(i, j) is row i, column j.
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Thrown by cholesky() when a pivot is not positive. `index` is the row at
// which the factorization failed.
class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(int index_, double pivot_);
  int index;
  double pivot;
};

bool is_hermitian(const CMatrix& m, double tol = 1e-12);

// Permanent via the Balasubramanian-Bax-Franklin-Glynn formula, iterating the
// 2^(n-1) sign vectors in gray-code order so each step updates one running
// column sum: O(n 2^n). The 0x0 permanent is 1. Throws std::invalid_argument
// for non-square input and std::length_error above max_dim.
Complex permanent_glynn(const CMatrix& m, int max_dim = 20);

// Reference permanent, O(n n!), summing over all column permutations.
// Guarded to n <= 9; intended as an oracle for permanent_glynn.
Complex permanent_naive(const CMatrix& m);

// Lower-triangular L with positive diagonal such that L L^dagger = s.
// s must be Hermitian; a pivot <= pivot_tol raises NotPositiveDefinite.
CMatrix cholesky(const CMatrix& s, double pivot_tol = 1e-14);

struct Eigensystem {
  RVector values;   // ascending
  CMatrix vectors;  // unitary; column k pairs with values[k]
};

Eigensystem hermitian_eig(const CMatrix& m);

struct ModifiedCholeskyResult {
  CMatrix l;
  // max_i | sum_k |l(i,k)|^2 - 1 |, a diagnostic of how far the factor rows
  // drift from the unit normalization an overlap matrix implies. Returned,
  // never asserted here; callers decide what is acceptable.
  double max_row_norm_error = 0.0;
  bool clipped = false;  // true when the eigenvalue-clipping path ran
};

// Cholesky factorization for overlap matrices (Hermitian, unit diagonal) that
// tolerates inputs rendered numerically non-positive-definite by rounding.
// If direct factorization fails, the matrix is eigendecomposed, non-positive
// eigenvalues D_i are replaced by min(|D_i|, epsilon), and the reconstruction
// is factorized instead. No pivoting: row i of the factor always describes
// packet i, which is what the emitter construction requires.
ModifiedCholeskyResult modified_cholesky(const CMatrix& s, double epsilon = 1e-10);

}  // namespace lops
