// Independent reference implementations used only by the tests: a numerical
// quadrature for wavepacket overlaps and random-matrix generators with fixed
// seeds. Everything here is deliberately written differently from the library
// code so agreement is meaningful.
#pragma once

#include <cmath>
#include <random>

#include "lops/linalg.hpp"
#include "lops/packet.hpp"

namespace oracles {

// Complex wavefunction of a unit-normalized packet at time t: real envelope
// times carrier exp(-i f0 (t - t0)).
inline lops::Complex wavefunction(lops::PacketShape shape,
                                  const lops::PacketDescriptor& p, double t) {
  const double dt = t - p.t0;
  double envelope = 0.0;
  if (shape == lops::PacketShape::Gaussian) {
    envelope = std::sqrt(p.width) / std::pow(M_PI, 0.25) *
               std::exp(-0.5 * dt * dt * p.width * p.width);
  } else {
    if (dt < 0.0) return {0.0, 0.0};
    envelope = std::sqrt(2.0 / p.width) * std::exp(-dt / p.width);
  }
  return envelope * std::exp(lops::Complex(0.0, -p.f0 * dt));
}

// integral conj(psi_a) psi_b dt by composite Simpson. For exponentials the
// integrand vanishes identically below max(t0_a, t0_b), so integration starts
// exactly at that point — the envelope kink never sits inside the grid.
inline lops::Complex quad_overlap(lops::PacketShape shape,
                                  const lops::PacketDescriptor& a,
                                  const lops::PacketDescriptor& b,
                                  int intervals = 100000) {
  double lo = 0.0, hi = 0.0;
  if (shape == lops::PacketShape::Gaussian) {
    const double sa = 1.0 / a.width, sb = 1.0 / b.width;
    lo = std::min(a.t0 - 14.0 * sa, b.t0 - 14.0 * sb);
    hi = std::max(a.t0 + 14.0 * sa, b.t0 + 14.0 * sb);
  } else {
    lo = std::max(a.t0, b.t0);
    hi = lo + 50.0 * std::max(a.width, b.width);
  }
  const auto f = [&](double t) {
    return std::conj(wavefunction(shape, a, t)) * wavefunction(shape, b, t);
  };
  const int n = intervals % 2 == 0 ? intervals : intervals + 1;
  const double h = (hi - lo) / n;
  lops::Complex sum = f(lo) + f(hi);
  for (int k = 1; k < n; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(lo + k * h);
  return sum * (h / 3.0);
}

inline lops::CMatrix random_complex(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  lops::CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = lops::Complex(g(rng), g(rng));
  return m;
}

// Haar-ish random unitary: QR of a complex Gaussian matrix.
inline lops::CMatrix random_unitary(int n, std::mt19937& rng) {
  Eigen::HouseholderQR<lops::CMatrix> qr(random_complex(n, n, rng));
  return qr.householderQ() * lops::CMatrix::Identity(n, n);
}

// Random Hermitian positive-definite matrix with an exactly unit diagonal,
// shaped like a physical overlap matrix.
inline lops::CMatrix random_overlap_matrix(int n, std::mt19937& rng) {
  lops::CMatrix a = random_complex(n, n, rng);
  lops::CMatrix s = a * a.adjoint() + static_cast<double>(n) * lops::CMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    const double d = 1.0 / std::sqrt(s(i, i).real());
    s.row(i) *= d;
    s.col(i) *= d;
  }
  for (int i = 0; i < n; ++i) s(i, i) = 1.0;
  // Hermitize away the last rounding asymmetry.
  return 0.5 * (s + lops::CMatrix(s.adjoint()));
}

// Random occupation vector of `photons` photons over `dim` levels.
inline std::vector<int> random_occupation(int dim, int photons, std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, dim - 1);
  std::vector<int> occ(dim, 0);
  for (int k = 0; k < photons; ++k) ++occ[pick(rng)];
  return occ;
}

}  // namespace oracles
