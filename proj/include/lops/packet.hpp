#pragma once

#include <vector>

#include "lops/linalg.hpp"

namespace lops {

enum class PacketShape { Gaussian, Exponential };

struct PacketDescriptor {
  int index = 0;       // flat packet index
  double t0 = 0.0;     // Gaussian: central time; exponential: start time
  double f0 = 0.0;     // central frequency
  double width = 1.0;  // Gaussian: frequency width; exponential: decay time
};

// Registry of the distinct wavepackets a simulation uses. When the time axis
// is split into periods of fixed length, every registered packet exists once
// per period at the same in-period time: flat index = period * n_t + base,
// where n_t counts the distinct period-0 ("base") packets.
class PacketTable {
 public:
  static constexpr int kDefaultMaxPackets = 40;
  static constexpr double kDedupTolerance = 1e-9;

  explicit PacketTable(PacketShape shape, int periods = 1, double period_length = 0.0);

  // Registers the packet (t, f, w), deduplicating against existing entries:
  // a match within kDedupTolerance on every parameter returns the existing
  // base index. Times in later periods resolve to the period replica of
  // their reduced base time. `suggested` is accepted for signature
  // compatibility; indices are assigned in insertion order.
  int def_packet(int suggested, double t, double f, double w);

  // Base/period/flat resolution for an already-registered packet; throws
  // std::out_of_range when no packet matches.
  int find_packet(double t, double f, double w) const;

  int period_of(double t) const;
  int flat_of(int base, int period) const;

  PacketShape shape() const { return shape_; }
  int periods() const { return periods_; }
  double period_length() const { return period_length_; }
  int packets_per_period() const { return static_cast<int>(base_.size()); }
  int packet_count() const { return packets_per_period() * periods_; }
  // Descriptor for a flat index; t0 carries the period offset.
  PacketDescriptor descriptor(int flat_index) const;

  int max_packets = kDefaultMaxPackets;

 private:
  PacketShape shape_;
  int periods_;
  double period_length_;
  std::vector<PacketDescriptor> base_;  // in-period descriptors, insertion order
};

// <P_a|P_b> for unit-normalized Gaussian packets
//   K(t) = sqrt(w) / pi^(1/4) * exp(-(t - t0)^2 w^2 / 2),
// carrier exp(-i f0 (t - t0)):
//   N exp(-T dt^2) exp(-W df^2) exp(-i phi dt)
// with dt = t_a - t_b, df = f_a - f_b, T = w_a^2 w_b^2 / (2 (w_a^2 + w_b^2)),
// W = 1 / (2 (w_a^2 + w_b^2)), phi = (w_a^2 f_b + w_b^2 f_a) / (w_a^2 + w_b^2),
// N = sqrt(2) sqrt(w_a w_b) / sqrt(w_a^2 + w_b^2).
Complex overlap_gaussian(const PacketDescriptor& a, const PacketDescriptor& b);

// <P_a|P_b> for unit-normalized one-sided exponential packets
//   K(t) = sqrt(2 / tau) * exp(-(t - t0) / tau) for t >= t0, else 0,
// carrier exp(-i f0 (t - t0)). Closed form of the envelope integral from
// T0 = max(t_a, t_b):
//   exp(-i (f_a t_a - f_b t_b)) * 2 / sqrt(tau_a tau_b)
//     * exp((t_a - T0)/tau_a + (t_b - T0)/tau_b + i (f_a - f_b) T0)
//     / (1/tau_a + 1/tau_b - i (f_a - f_b)).
Complex overlap_exponential(const PacketDescriptor& a, const PacketDescriptor& b);

Complex packet_overlap(PacketShape shape, const PacketDescriptor& a,
                       const PacketDescriptor& b);

// n_t x n_t overlap matrix of the period-0 packets: Hermitian, exact unit
// diagonal.
CMatrix single_period_overlap(const PacketTable& table);

// Full packet_count x packet_count overlap matrix: the single-period block
// repeats identically along the diagonal and packets in different periods
// have exactly zero overlap.
CMatrix build_overlap_matrix(const PacketTable& table);

}  // namespace lops
