#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lops/circuit.hpp"
#include "lops/fock.hpp"
#include "lops/packet.hpp"

namespace lops {

inline constexpr int kPolH = 0;
inline constexpr int kPolV = 1;

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// 'p' -> PhiPlus, 'm' -> PhiMinus, 's' -> PsiPlus, 'b' -> PsiMinus.
BellKind bell_kind_from_char(char c);

// User-facing assembly of one simulation: declare photons and entangled
// pairs, then circuit elements, then detectors. Circuit elements are queued
// so the packet table can keep growing until everything is known;
// send_to_circuit() freezes the table, installs the emitter, replays the
// elements in declaration order and expands the input state. Declaring a
// detector on the last uncovered channel triggers send_to_circuit()
// automatically.
class QODevice {
 public:
  QODevice(int channels, int polarizations, PacketShape shape, int periods = 1,
           double period_length = 0.0);

  // Adds n photons (n = 0 registers the packet only) in the given channel and
  // polarization, riding the wavepacket (t, f, w). Returns the base packet
  // index.
  int add_photons(int n, int channel, int polarization, double t, double f, double w);

  // Adds a polarization-entangled pair; the photon in ch1 rides (t1, f1, w1),
  // the one in ch2 rides (t2, f2, w2). `phase_deg` applies exp(i phase) to
  // the second branch of the superposition.
  void add_bell_pair(int ch1, int ch2, BellKind kind, double phase_deg, double t1,
                     double f1, double w1, double t2, double f2, double w2);

  void beamsplitter(int ch1, int ch2, double theta_deg, double phi_deg);
  void phase_shifter(int ch, double phi_deg);
  void delay(int ch);
  void detector(int ch, std::optional<int> condition = std::nullopt);

  const FockState& send_to_circuit();
  bool sent() const { return circuit_.has_value(); }

  PacketTable& table() { return table_; }
  const PacketTable& table() const { return table_; }
  // Only valid after send_to_circuit().
  const CircuitBuilder& circuit() const;
  const FockState& input_state() const;

  // When set, send_to_circuit() renumbers packets by ascending time so the
  // earliest wavepacket leads the orthonormalization.
  bool order_packets_by_time = false;
  double emitter_epsilon = 1e-10;

 private:
  struct ModeKey {
    int channel;
    int polarization;
    int base;
    int period;
    auto operator<=>(const ModeKey&) const = default;
  };
  struct PendingElement {
    enum Kind { Beamsplitter, PhaseShifter, Delay, Detector };
    Kind kind;
    int a = 0;
    int b = 0;
    double x = 0.0;
    double y = 0.0;
    std::optional<int> condition;
  };

  int channels_;
  int polarizations_;
  PacketTable table_;
  std::vector<PendingElement> elements_;
  std::vector<bool> channel_has_detector_;
  // Input superposition under construction: amplitude and per-mode photon
  // counts for each branch.
  std::vector<std::pair<Complex, std::map<ModeKey, int>>> branches_;
  std::optional<CircuitBuilder> circuit_;
  std::optional<FockState> input_;

  void require_not_sent(const char* who) const;
  void check_channel(int ch, const char* who) const;
  int register_packet(double t, double f, double w, int* period_out);
};

}  // namespace lops
