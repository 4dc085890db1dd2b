#include "lops/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace lops {

NotPositiveDefinite::NotPositiveDefinite(int index_, double pivot_)
    : std::runtime_error("cholesky: pivot " + std::to_string(pivot_) +
                         " at row " + std::to_string(index_) +
                         " is not positive"),
      index(index_),
      pivot(pivot_) {}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    }
  }
  return true;
}

static void require_square(const CMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Complex permanent_glynn(const CMatrix& m, int max_dim) {
  require_square(m, "permanent_glynn");
  const int n = static_cast<int>(m.rows());
  if (n > max_dim) {
    throw std::length_error("permanent_glynn: dimension " + std::to_string(n) +
                            " exceeds limit " + std::to_string(max_dim));
  }
  if (n == 0) return Complex(1.0, 0.0);

  // Running sums_j = sum_i delta_i m(i, j) with delta_0 fixed at +1. Walking
  // delta in gray-code order flips a single row sign per step.
  std::vector<Complex> sums(n);
  for (int j = 0; j < n; ++j) sums[j] = m.col(j).sum();
  std::vector<double> delta(n, 1.0);

  Complex result(0.0, 0.0);
  double sign = 1.0;
  const std::uint64_t terms = std::uint64_t(1) << (n - 1);
  for (std::uint64_t k = 0; k < terms; ++k) {
    if (k > 0) {
      const int row = std::countr_zero(k) + 1;  // delta_0 never flips
      delta[row] = -delta[row];
      for (int j = 0; j < n; ++j) sums[j] += 2.0 * delta[row] * m(row, j);
      sign = -sign;
    }
    Complex term(1.0, 0.0);
    for (int j = 0; j < n; ++j) term *= sums[j];
    result += sign * term;
  }
  return result / static_cast<double>(terms);
}

Complex permanent_naive(const CMatrix& m) {
  require_square(m, "permanent_naive");
  const int n = static_cast<int>(m.rows());
  if (n > 9) {
    throw std::length_error("permanent_naive: dimension " + std::to_string(n) +
                            " exceeds the n <= 9 oracle guard");
  }
  if (n == 0) return Complex(1.0, 0.0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Complex result(0.0, 0.0);
  do {
    Complex term(1.0, 0.0);
    for (int i = 0; i < n; ++i) term *= m(i, perm[i]);
    result += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

CMatrix cholesky(const CMatrix& s, double pivot_tol) {
  require_square(s, "cholesky");
  if (!is_hermitian(s)) throw std::invalid_argument("cholesky: matrix is not Hermitian");
  const int n = static_cast<int>(s.rows());
  CMatrix l = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      Complex acc = s(i, j);
      for (int k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
      if (j < i) {
        l(i, j) = acc / l(j, j);
      } else {
        const double pivot = acc.real();
        if (pivot <= pivot_tol) throw NotPositiveDefinite(i, pivot);
        l(i, i) = std::sqrt(pivot);
      }
    }
  }
  return l;
}

Eigensystem hermitian_eig(const CMatrix& m) {
  require_square(m, "hermitian_eig");
  if (!is_hermitian(m)) throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  }
  return Eigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

static double max_row_norm_error_of(const CMatrix& l) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    worst = std::max(worst, std::abs(l.row(i).squaredNorm() - 1.0));
  }
  return worst;
}

ModifiedCholeskyResult modified_cholesky(const CMatrix& s, double epsilon) {
  require_square(s, "modified_cholesky");
  if (!is_hermitian(s)) {
    throw std::invalid_argument("modified_cholesky: matrix is not Hermitian");
  }
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    if (std::abs(s(i, i) - Complex(1.0, 0.0)) > 1e-8) {
      throw std::invalid_argument("modified_cholesky: diagonal entry " +
                                  std::to_string(i) + " is not 1 (not an overlap matrix)");
    }
  }
  if (epsilon <= 0.0) throw std::invalid_argument("modified_cholesky: epsilon must be positive");

  ModifiedCholeskyResult out;
  try {
    out.l = cholesky(s);
    out.max_row_norm_error = max_row_norm_error_of(out.l);
    return out;
  } catch (const NotPositiveDefinite&) {
    // fall through to the eigenvalue-clipping path below
  }

  Eigensystem eig = hermitian_eig(s);
  const int n = static_cast<int>(s.rows());
  // Eigenvalues indistinguishable from zero at machine precision are clamped
  // to the eigensolver's own noise floor; otherwise the reconstruction would
  // still fail to factorize.
  const double scale = std::max(std::abs(eig.values(0)), std::abs(eig.values(n - 1)));
  const double noise_floor =
      8.0 * n * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
  RVector clipped = eig.values;
  for (int i = 0; i < n; ++i) {
    if (clipped(i) <= noise_floor) {
      clipped(i) = std::max(std::min(std::abs(eig.values(i)), epsilon), noise_floor);
    }
  }
  CMatrix rebuilt = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
  rebuilt = (rebuilt + rebuilt.adjoint()).eval() / 2.0;

  try {
    out.l = cholesky(rebuilt, 0.0);
  } catch (const NotPositiveDefinite& err) {
    throw std::runtime_error(
        "modified_cholesky: matrix is not positive definite even after "
        "eigenvalue clipping (pivot " + std::to_string(err.pivot) + " at row " +
        std::to_string(err.index) + ")");
  }
  out.max_row_norm_error = max_row_norm_error_of(out.l);
  out.clipped = true;
  return out;
}

}  // namespace lops
