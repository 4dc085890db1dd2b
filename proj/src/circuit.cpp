#include "lops/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lops {

namespace {
double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }
}  // namespace

CircuitBuilder::CircuitBuilder(LevelIndex levels, int periods)
    : levels_(levels), periods_(periods) {
  if (levels.channels < 1 || levels.polarizations < 1 || levels.polarizations > 2 ||
      levels.packets < 1) {
    throw std::invalid_argument("CircuitBuilder: invalid level dimensions");
  }
  if (periods < 1 || levels.packets % periods != 0) {
    throw std::invalid_argument(
        "CircuitBuilder: packet count must split evenly into periods");
  }
  total_ = CMatrix::Identity(levels.dim(), levels.dim());
  channel_has_detector_.assign(levels.channels, false);
}

void CircuitBuilder::check_channel(int ch, const char* who) const {
  if (ch < 0 || ch >= levels_.channels) {
    throw std::out_of_range(std::string(who) + ": channel " + std::to_string(ch) +
                            " outside 0.." + std::to_string(levels_.channels - 1));
  }
}

void CircuitBuilder::beamsplitter(int ch1, int ch2, double theta_deg, double phi_deg) {
  check_channel(ch1, "beamsplitter");
  check_channel(ch2, "beamsplitter");
  if (ch1 == ch2) throw std::invalid_argument("beamsplitter: channels must differ");
  const double theta = radians(theta_deg);
  const double phi = radians(phi_deg);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CMatrix m = CMatrix::Identity(levels_.dim(), levels_.dim());
  for (int pol = 0; pol < levels_.polarizations; ++pol) {
    for (int pk = 0; pk < levels_.packets; ++pk) {
      const int l1 = levels_.level_of(ch1, pol, pk);
      const int l2 = levels_.level_of(ch2, pol, pk);
      m(l1, l1) = c;
      m(l1, l2) = -s * std::exp(Complex(0.0, phi));
      m(l2, l1) = s * std::exp(Complex(0.0, -phi));
      m(l2, l2) = c;
    }
  }
  total_ = m * total_;
}

void CircuitBuilder::phase_shifter(int ch, double phi_deg) {
  check_channel(ch, "phase_shifter");
  const Complex factor = std::exp(Complex(0.0, radians(phi_deg)));
  CMatrix m = CMatrix::Identity(levels_.dim(), levels_.dim());
  for (int pol = 0; pol < levels_.polarizations; ++pol) {
    for (int pk = 0; pk < levels_.packets; ++pk) {
      const int l = levels_.level_of(ch, pol, pk);
      m(l, l) = factor;
    }
  }
  total_ = m * total_;
}

void CircuitBuilder::emitter_from_coeffs(const CMatrix& coeffs) {
  if (emitter_applied_) {
    throw std::logic_error("emitter_from_coeffs: emitter already applied");
  }
  const int n_t = packets_per_period();
  if (coeffs.rows() != n_t || coeffs.cols() != n_t) {
    throw std::invalid_argument("emitter_from_coeffs: expected a " + std::to_string(n_t) +
                                "x" + std::to_string(n_t) + " coefficient matrix");
  }
  for (int i = 0; i < n_t; ++i) {
    for (int j = i + 1; j < n_t; ++j) {
      if (std::abs(coeffs(i, j)) > 1e-12) {
        throw std::invalid_argument("emitter_from_coeffs: matrix is not lower triangular");
      }
    }
  }
  CMatrix m = CMatrix::Identity(levels_.dim(), levels_.dim());
  for (int ch = 0; ch < levels_.channels; ++ch) {
    for (int pol = 0; pol < levels_.polarizations; ++pol) {
      for (int period = 0; period < periods_; ++period) {
        for (int i = 0; i < n_t; ++i) {
          for (int j = 0; j <= i; ++j) {
            const int in = levels_.level_of(ch, pol, period * n_t + i);
            const int out = levels_.level_of(ch, pol, period * n_t + j);
            m(out, in) = coeffs(i, j);
          }
        }
      }
    }
  }
  total_ = m * total_;
  emitter_applied_ = true;
}

double CircuitBuilder::emitter_from_overlap(const CMatrix& s, double epsilon) {
  const ModifiedCholeskyResult mc = modified_cholesky(s, epsilon);
  if (mc.max_row_norm_error > row_norm_bound) {
    throw std::runtime_error(
        "emitter_from_overlap: coefficient row norms drift " +
        std::to_string(mc.max_row_norm_error) + " from 1 (bound " +
        std::to_string(row_norm_bound) +
        "); the overlap matrix is too degenerate — consider reordering the "
        "packets so a different wavepacket leads");
  }
  // The Gram-Schmidt expansion coefficients are the conjugate of the Cholesky
  // factor: <P_i|P_j> = sum_k conj(c_ik) c_jk, i.e. S = conj(C) C^T.
  emitter_from_coeffs(mc.l.conjugate());
  max_row_norm_error_ = mc.max_row_norm_error;
  return mc.max_row_norm_error;
}

double CircuitBuilder::emitter_from_table(const PacketTable& table, double epsilon) {
  if (table.packet_count() != levels_.packets || table.periods() != periods_) {
    throw std::invalid_argument("emitter_from_table: table does not match circuit levels");
  }
  return emitter_from_overlap(single_period_overlap(table), epsilon);
}

void CircuitBuilder::delay(int ch) {
  check_channel(ch, "delay");
  if (periods_ < 2) {
    throw std::logic_error("delay: the circuit was built without time periods");
  }
  if (!emitter_applied_) {
    throw std::logic_error("delay: the emitter must be applied before any delay");
  }
  const int n_t = packets_per_period();
  CMatrix m = CMatrix::Identity(levels_.dim(), levels_.dim());
  for (int pol = 0; pol < levels_.polarizations; ++pol) {
    for (int base = 0; base < n_t; ++base) {
      for (int period = 0; period < periods_; ++period) {
        const int in = levels_.level_of(ch, pol, period * n_t + base);
        m(in, in) = 0.0;
        if (period + 1 < periods_) {
          const int out = levels_.level_of(ch, pol, (period + 1) * n_t + base);
          m(out, in) = 1.0;
        }
      }
    }
  }
  total_ = m * total_;
}

void CircuitBuilder::detector(int ch, std::optional<int> condition) {
  check_channel(ch, "detector");
  if (channel_has_detector_[ch]) {
    throw std::invalid_argument("detector: channel " + std::to_string(ch) +
                                " already has a detector");
  }
  if (condition && *condition < 0) {
    throw std::invalid_argument("detector: condition must be non-negative");
  }
  detectors_.push_back(DetectorSpec{ch, condition});
  channel_has_detector_[ch] = true;
}

bool CircuitBuilder::sealed() const {
  for (bool has : channel_has_detector_) {
    if (!has) return false;
  }
  return true;
}

}  // namespace lops
