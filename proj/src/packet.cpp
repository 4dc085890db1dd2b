#include "lops/packet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lops {

PacketTable::PacketTable(PacketShape shape, int periods, double period_length)
    : shape_(shape), periods_(periods), period_length_(period_length) {
  if (periods < 1) throw std::invalid_argument("PacketTable: periods must be >= 1");
  if (periods > 1 && period_length <= 0.0) {
    throw std::invalid_argument("PacketTable: multiple periods need a positive period length");
  }
}

int PacketTable::period_of(double t) const {
  if (periods_ == 1) return 0;
  if (t < 0.0) throw std::out_of_range("PacketTable: negative time in a periodic table");
  const int p = static_cast<int>(std::floor(t / period_length_));
  if (p >= periods_) {
    throw std::out_of_range("PacketTable: time " + std::to_string(t) + " lies beyond period " +
                            std::to_string(periods_ - 1));
  }
  return p;
}

int PacketTable::flat_of(int base, int period) const {
  if (base < 0 || base >= packets_per_period() || period < 0 || period >= periods_) {
    throw std::out_of_range("PacketTable: flat_of(" + std::to_string(base) + ", " +
                            std::to_string(period) + ") out of range");
  }
  return period * packets_per_period() + base;
}

int PacketTable::def_packet(int /*suggested*/, double t, double f, double w) {
  if (w <= 0.0) throw std::invalid_argument("def_packet: width must be positive");
  const int period = period_of(t);
  const double base_t = periods_ == 1 ? t : t - period * period_length_;
  for (const auto& d : base_) {
    if (std::abs(d.t0 - base_t) <= kDedupTolerance && std::abs(d.f0 - f) <= kDedupTolerance &&
        std::abs(d.width - w) <= kDedupTolerance) {
      return d.index;
    }
  }
  const int index = static_cast<int>(base_.size());
  if ((index + 1) * periods_ > max_packets) {
    throw std::length_error("def_packet: packet count would exceed the maximum of " +
                            std::to_string(max_packets));
  }
  base_.push_back(PacketDescriptor{index, base_t, f, w});
  return index;
}

int PacketTable::find_packet(double t, double f, double w) const {
  const int period = period_of(t);
  const double base_t = periods_ == 1 ? t : t - period * period_length_;
  for (const auto& d : base_) {
    if (std::abs(d.t0 - base_t) <= kDedupTolerance && std::abs(d.f0 - f) <= kDedupTolerance &&
        std::abs(d.width - w) <= kDedupTolerance) {
      return flat_of(d.index, period);
    }
  }
  throw std::out_of_range("find_packet: no packet registered at (t=" + std::to_string(t) +
                          ", f=" + std::to_string(f) + ", w=" + std::to_string(w) + ")");
}

PacketDescriptor PacketTable::descriptor(int flat_index) const {
  if (flat_index < 0 || flat_index >= packet_count()) {
    throw std::out_of_range("PacketTable: descriptor index " + std::to_string(flat_index) +
                            " out of range");
  }
  const int n_t = packets_per_period();
  PacketDescriptor d = base_[flat_index % n_t];
  d.index = flat_index;
  d.t0 += (flat_index / n_t) * period_length_;
  return d;
}

Complex overlap_gaussian(const PacketDescriptor& a, const PacketDescriptor& b) {
  const double wa2 = a.width * a.width;
  const double wb2 = b.width * b.width;
  const double sum = wa2 + wb2;
  const double dt = a.t0 - b.t0;
  const double df = a.f0 - b.f0;
  const double time_decay = 0.5 * wa2 * wb2 / sum;
  const double freq_decay = 0.5 / sum;
  const double phase = (wa2 * b.f0 + wb2 * a.f0) / sum;
  const double norm = std::sqrt(2.0) * std::sqrt(a.width * b.width) / std::sqrt(sum);
  return norm * std::exp(Complex(-time_decay * dt * dt - freq_decay * df * df, -phase * dt));
}

Complex overlap_exponential(const PacketDescriptor& a, const PacketDescriptor& b) {
  const double t_front = std::max(a.t0, b.t0);
  const double df = a.f0 - b.f0;
  const double gamma = 1.0 / a.width + 1.0 / b.width;
  // Envelope product integrated from the later start; the decayed prefactors
  // are folded into one exponent so nothing overflows for far-apart packets.
  const Complex expo((a.t0 - t_front) / a.width + (b.t0 - t_front) / b.width,
                     df * t_front - (a.f0 * a.t0 - b.f0 * b.t0));
  return 2.0 / std::sqrt(a.width * b.width) * std::exp(expo) / Complex(gamma, -df);
}

Complex packet_overlap(PacketShape shape, const PacketDescriptor& a,
                       const PacketDescriptor& b) {
  return shape == PacketShape::Gaussian ? overlap_gaussian(a, b) : overlap_exponential(a, b);
}

CMatrix single_period_overlap(const PacketTable& table) {
  const int n_t = table.packets_per_period();
  if (n_t == 0)
    throw std::invalid_argument("single_period_overlap: empty packet table");
  CMatrix s = CMatrix::Identity(n_t, n_t);
  for (int i = 0; i < n_t; ++i) {
    for (int j = i + 1; j < n_t; ++j) {
      const Complex v = packet_overlap(table.shape(), table.descriptor(i), table.descriptor(j));
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  return s;
}

CMatrix build_overlap_matrix(const PacketTable& table) {
  const int n_t = table.packets_per_period();
  const CMatrix block = single_period_overlap(table);
  CMatrix s = CMatrix::Zero(table.packet_count(), table.packet_count());
  for (int p = 0; p < table.periods(); ++p) {
    s.block(p * n_t, p * n_t, n_t, n_t) = block;
  }
  return s;
}

}  // namespace lops
