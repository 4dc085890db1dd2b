#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lops/linalg.hpp"

namespace lops {

// Addressing of circuit levels. A level is one bosonic mode: a (channel,
// polarization, packet) triple, flattened channel-major with the packet index
// innermost: level = (channel * n_pol + polarization) * n_packets + packet.
struct LevelIndex {
  int channels = 1;
  int polarizations = 1;
  int packets = 1;

  int dim() const { return channels * polarizations * packets; }
  int level_of(int channel, int polarization, int packet) const;

  struct Mode {
    int channel;
    int polarization;
    int packet;
  };
  Mode tuple_of(int level) const;

  bool operator==(const LevelIndex&) const = default;
};

// Occupation numbers per level, always levels.dim() entries.
using Occupation = std::vector<int>;

struct Ket {
  Complex amplitude;
  Occupation occupations;
};

// Canonical ket ordering: occupation vectors compare so that states filling
// lower levels first come first: |2,0> before |1,1> before |0,2>.
bool occupation_before(const Occupation& a, const Occupation& b);

int photon_count(const Occupation& occ);

// Immutable superposition of occupation-number kets over a fixed level set.
// Construction merges duplicate occupation vectors, drops kets with
// |amplitude| below the prune threshold, and sorts canonically.
class FockState {
 public:
  static constexpr double kPruneThreshold = 1e-14;

  explicit FockState(LevelIndex levels) : levels_(levels) {}
  FockState(LevelIndex levels, std::vector<Ket> entries,
            double prune = kPruneThreshold);

  const LevelIndex& levels() const { return levels_; }
  const std::vector<Ket>& kets() const { return kets_; }
  double norm2() const;
  // 0 when the occupation vector is not present.
  Complex amplitude_of(const Occupation& occ) const;

 private:
  LevelIndex levels_;
  std::vector<Ket> kets_;
};

// Number of occupation vectors of `photons` photons over `dim` levels,
// C(photons + dim - 1, photons), saturating at UINT64_MAX on overflow.
std::uint64_t output_space_size(int dim, int photons);

// All occupation vectors with the given total photon number, in canonical
// order. The optional filter receives per-channel photon totals and drops
// vectors it rejects.
std::vector<Occupation> enumerate_kets(
    const LevelIndex& levels, int photons,
    const std::function<bool(const std::vector<int>&)>& channel_filter = {});

// Human-readable ket text: "| H(0)0, V(0)3 >" lists one polarization(packet)
// channel entry per photon, lowest level first; zero-occupation levels are
// omitted and the vacuum renders as "| >".
std::string render_ket(const LevelIndex& levels, const Occupation& occ);

// "| 2, 0 >"-style rendering of per-channel photon counts.
std::string render_channel_pattern(const std::vector<int>& counts);

}  // namespace lops
