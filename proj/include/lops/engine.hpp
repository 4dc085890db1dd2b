#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lops/circuit.hpp"
#include "lops/fock.hpp"

namespace lops {

// Two interchangeable evaluation strategies. Permanent: one matrix permanent
// per (input ket, output ket) pair. Direct: symbolic expansion of the
// transformed creation-operator polynomial, cheaper when few photons spread
// over many levels.
enum class Core { Direct, Permanent };

struct SimConfig {
  Core core = Core::Permanent;
  // Output amplitudes at or below this magnitude are dropped.
  double prune = 1e-14;
  // Permanent core refuses to enumerate an output basis larger than this.
  std::uint64_t max_output_kets = 10'000'000;
  int max_photons = 12;         // permanent core photon ceiling
  int max_photons_direct = 8;   // direct core photon ceiling
  // When set, only these occupation vectors are evaluated (permanent core)
  // or kept (direct core); the basis-size guard is skipped.
  std::optional<std::vector<Occupation>> restricted;
};

// <out| U |in> for a circuit matrix `total` (column j = image of input
// operator j): permanent of the matrix whose columns repeat level j in[j]
// times and whose rows repeat level k out[k] times, divided by
// sqrt(prod in_j! prod out_k!). Zero when photon counts differ; 1 for
// vacuum -> vacuum.
Complex run_permanent(const CMatrix& total, const Occupation& in,
                      const Occupation& out);

// Expands prod_j (sum_k total(k, j) a_k^dag)^{n_j} |0> term by term for every
// input ket and collects the resulting superposition.
FockState run_direct(const CMatrix& total, const FockState& input,
                     double prune = FockState::kPruneThreshold,
                     int max_photons = 8);

// Full simulation of a sealed circuit. Output kets are enumerated per
// distinct input photon number (circuit matrices never raise the photon
// count; delays only annihilate whole terms).
FockState run(const CircuitBuilder& circuit, const FockState& input,
              const SimConfig& cfg = {});

}  // namespace lops
