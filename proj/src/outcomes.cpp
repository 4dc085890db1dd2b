#include "lops/outcomes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lops {

namespace {

constexpr double kProbabilityFloor = 1e-12;

std::vector<int> channel_counts(const LevelIndex& levels, const Occupation& occ) {
  std::vector<int> counts(static_cast<size_t>(levels.channels), 0);
  for (int level = 0; level < levels.dim(); ++level)
    counts[static_cast<size_t>(levels.tuple_of(level).channel)] +=
        occ[static_cast<size_t>(level)];
  return counts;
}

void check_detectors(const LevelIndex& levels,
                     const std::vector<DetectorSpec>& detectors, const char* who) {
  std::vector<bool> seen(static_cast<size_t>(levels.channels), false);
  for (const DetectorSpec& d : detectors) {
    if (d.channel < 0 || d.channel >= levels.channels)
      throw std::invalid_argument(std::string(who) + ": detector channel out of range");
    if (seen[static_cast<size_t>(d.channel)])
      throw std::invalid_argument(std::string(who) + ": duplicate detector channel");
    seen[static_cast<size_t>(d.channel)] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw std::invalid_argument(std::string(who) + ": every channel needs a detector");
}

bool meets_conditions(const std::vector<int>& counts,
                      const std::vector<DetectorSpec>& detectors) {
  for (const DetectorSpec& d : detectors)
    if (d.condition.has_value() &&
        counts[static_cast<size_t>(d.channel)] != *d.condition)
      return false;
  return true;
}

}  // namespace

std::vector<Branch> postselect(const FockState& output,
                               const std::vector<DetectorSpec>& detectors) {
  const LevelIndex& levels = output.levels();
  check_detectors(levels, detectors, "postselect");

  std::vector<bool> conditioned(static_cast<size_t>(levels.channels), false);
  for (const DetectorSpec& d : detectors)
    if (d.condition.has_value()) conditioned[static_cast<size_t>(d.channel)] = true;

  // Group surviving kets by the full content of the conditioned channels.
  std::map<Occupation, std::vector<Ket>, bool (*)(const Occupation&, const Occupation&)>
      groups(&occupation_before);
  for (const Ket& ket : output.kets()) {
    const std::vector<int> counts = channel_counts(levels, ket.occupations);
    if (!meets_conditions(counts, detectors)) continue;
    Occupation key = ket.occupations;
    for (int level = 0; level < levels.dim(); ++level)
      if (!conditioned[static_cast<size_t>(levels.tuple_of(level).channel)])
        key[static_cast<size_t>(level)] = 0;
    groups[std::move(key)].push_back(ket);
  }

  std::vector<Branch> branches;
  branches.reserve(groups.size());
  for (auto& [key, kets] : groups) {
    double weight = 0.0;
    for (const Ket& ket : kets) weight += std::norm(ket.amplitude);
    const double scale = 1.0 / std::sqrt(weight);
    for (Ket& ket : kets) ket.amplitude *= scale;
    branches.push_back(Branch{render_ket(levels, key),
                              FockState(levels, std::move(kets)), weight});
  }
  return branches;
}

Distribution distribution(const FockState& output,
                          const std::vector<DetectorSpec>& detectors) {
  const LevelIndex& levels = output.levels();
  check_detectors(levels, detectors, "distribution");

  std::map<std::vector<int>, double> patterns;
  for (const Ket& ket : output.kets()) {
    const std::vector<int> counts = channel_counts(levels, ket.occupations);
    if (!meets_conditions(counts, detectors)) continue;
    patterns[counts] += std::norm(ket.amplitude);
  }

  Distribution dist;
  for (const auto& [counts, prob] : patterns)
    if (prob > kProbabilityFloor) dist.entries[render_channel_pattern(counts)] = prob;
  return dist;
}

DensityMatrix density_matrix(const std::vector<Branch>& branches,
                             const std::vector<int>& surviving_channels) {
  if (branches.empty())
    throw std::invalid_argument("density_matrix: no branches to mix");
  const LevelIndex& levels = branches.front().state.levels();

  std::vector<bool> survives(static_cast<size_t>(levels.channels), false);
  for (int ch : surviving_channels) {
    if (ch < 0 || ch >= levels.channels)
      throw std::out_of_range("density_matrix: surviving channel out of range");
    survives[static_cast<size_t>(ch)] = true;
  }

  double total_weight = 0.0;
  for (const Branch& b : branches) total_weight += b.weight;
  if (!(total_weight > 0.0))
    throw std::runtime_error("density_matrix: conditioning on an impossible event");

  const auto restrict_occ = [&](const Occupation& occ) {
    Occupation r = occ;
    for (int level = 0; level < levels.dim(); ++level)
      if (!survives[static_cast<size_t>(levels.tuple_of(level).channel)])
        r[static_cast<size_t>(level)] = 0;
    return r;
  };

  std::map<Occupation, int, bool (*)(const Occupation&, const Occupation&)> index(
      &occupation_before);
  for (const Branch& b : branches)
    for (const Ket& ket : b.state.kets()) index.emplace(restrict_occ(ket.occupations), 0);

  DensityMatrix dm;
  dm.basis.reserve(index.size());
  for (auto& [occ, idx] : index) {
    idx = static_cast<int>(dm.basis.size());
    dm.basis.push_back(occ);
    dm.labels.push_back(render_ket(levels, occ));
  }

  const int n = static_cast<int>(dm.basis.size());
  dm.rho = CMatrix::Zero(n, n);
  for (const Branch& b : branches) {
    for (const Ket& ki : b.state.kets()) {
      const int i = index.at(restrict_occ(ki.occupations));
      for (const Ket& kj : b.state.kets()) {
        const int j = index.at(restrict_occ(kj.occupations));
        dm.rho(i, j) += b.weight * ki.amplitude * std::conj(kj.amplitude);
      }
    }
  }
  dm.rho /= dm.rho.trace().real();
  return dm;
}

double purity(const DensityMatrix& dm) { return (dm.rho * dm.rho).trace().real(); }

}  // namespace lops
