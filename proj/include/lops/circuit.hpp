#pragma once

#include <optional>
#include <vector>

#include "lops/fock.hpp"
#include "lops/packet.hpp"

namespace lops {

struct DetectorSpec {
  int channel = 0;
  // Required photon count in the channel; empty means unconditioned.
  std::optional<int> condition;
};

// Accumulates the circuit transformation matrix. Column j of total() is the
// image of input creation operator j: a_j^dag -> sum_k total(k, j) a_k^dag.
// Every added element left-multiplies, so elements apply in declaration
// order. Channel elements act identically on each (polarization, packet)
// sublevel; the emitter and delay act identically on each (channel,
// polarization) sublevel, so the two families commute and the emitter may be
// installed before or after channel elements — but always before any delay,
// because the delay's index shift is only meaningful on orthonormalized
// packet indices.
class CircuitBuilder {
 public:
  CircuitBuilder(LevelIndex levels, int periods = 1);

  // theta = 0 is the identity, theta = 45 degrees the balanced splitter:
  // block [[cos t, -e^{i phi} sin t], [e^{-i phi} sin t, cos t]].
  void beamsplitter(int ch1, int ch2, double theta_deg, double phi_deg);
  void phase_shifter(int ch, double phi_deg);

  // Installs the wavepacket orthonormalization stage from Gram-Schmidt
  // coefficients: coeffs(i, j) is the component of input packet i on
  // orthonormal packet j, lower triangular, one row per period-0 packet.
  // The block repeats identically across periods.
  void emitter_from_coeffs(const CMatrix& coeffs);
  // Derives the coefficients from a single-period overlap matrix via
  // modified_cholesky and returns the factorization's max_row_norm_error.
  // An error above row_norm_bound throws.
  double emitter_from_overlap(const CMatrix& s, double epsilon = 1e-10);
  double emitter_from_table(const PacketTable& table, double epsilon = 1e-10);

  // Shifts every packet of the channel one period later. Amplitude in the
  // last period has nowhere to go and is annihilated (zero column), so the
  // matrix is deliberately not unitary.
  void delay(int ch);

  void detector(int ch, std::optional<int> condition = std::nullopt);
  bool sealed() const;  // every channel carries a detector

  const CMatrix& total() const { return total_; }
  const LevelIndex& levels() const { return levels_; }
  int periods() const { return periods_; }
  int packets_per_period() const { return levels_.packets / periods_; }
  bool emitter_applied() const { return emitter_applied_; }
  const std::vector<DetectorSpec>& detectors() const { return detectors_; }
  double max_row_norm_error() const { return max_row_norm_error_; }

  // Acceptable drift of emitter coefficient rows away from unit norm.
  double row_norm_bound = 1e-6;

 private:
  LevelIndex levels_;
  int periods_;
  CMatrix total_;
  bool emitter_applied_ = false;
  double max_row_norm_error_ = 0.0;
  std::vector<DetectorSpec> detectors_;
  std::vector<bool> channel_has_detector_;

  void check_channel(int ch, const char* who) const;
};

}  // namespace lops
