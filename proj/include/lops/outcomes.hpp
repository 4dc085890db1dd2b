#pragma once

#include <map>
#include <string>
#include <vector>

#include "lops/circuit.hpp"
#include "lops/fock.hpp"

namespace lops {

// One incoherent measurement branch: all output kets sharing the same photon
// content (polarization and packet) in the conditioned channels.
struct Branch {
  std::string signature;  // rendered conditioned-channel content
  FockState state;        // renormalized, over the full level set
  double weight;          // norm^2 of the branch before renormalization
};

// Keeps kets whose per-channel photon totals meet every conditioned detector
// and groups them into incoherent branches. Branch weights sum to the total
// post-selection probability. No conditions -> one branch holding the whole
// output. No surviving kets -> empty list.
std::vector<Branch> postselect(const FockState& output,
                               const std::vector<DetectorSpec>& detectors);

// Probability of each measured per-channel photon pattern, keyed by its
// rendering ("| 2, 0 >"). Conditioned detectors filter kets first; entries
// below 1e-12 are suppressed.
struct Distribution {
  std::map<std::string, double> entries;
};
Distribution distribution(const FockState& output,
                          const std::vector<DetectorSpec>& detectors);

struct DensityMatrix {
  std::vector<Occupation> basis;    // conditioned channels zeroed, canonical order
  std::vector<std::string> labels;  // rendered kets over surviving channels
  CMatrix rho;                      // Hermitian, trace 1
};

// rho = sum_b weight_b |psi_b><psi_b| restricted to the surviving channels,
// normalized to unit trace. Throws when no branch carries weight.
DensityMatrix density_matrix(const std::vector<Branch>& branches,
                             const std::vector<int>& surviving_channels);

double purity(const DensityMatrix& dm);

}  // namespace lops
