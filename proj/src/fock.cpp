#include "lops/fock.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace lops {

int LevelIndex::level_of(int channel, int polarization, int packet) const {
  if (channel < 0 || channel >= channels || polarization < 0 ||
      polarization >= polarizations || packet < 0 || packet >= packets) {
    throw std::out_of_range("level_of: mode (" + std::to_string(channel) + ", " +
                            std::to_string(polarization) + ", " + std::to_string(packet) +
                            ") outside " + std::to_string(channels) + "x" +
                            std::to_string(polarizations) + "x" + std::to_string(packets));
  }
  return (channel * polarizations + polarization) * packets + packet;
}

LevelIndex::Mode LevelIndex::tuple_of(int level) const {
  if (level < 0 || level >= dim()) {
    throw std::out_of_range("tuple_of: level " + std::to_string(level) +
                            " outside dimension " + std::to_string(dim()));
  }
  return Mode{level / (polarizations * packets), (level / packets) % polarizations,
              level % packets};
}

bool occupation_before(const Occupation& a, const Occupation& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](int x, int y) { return x > y; });
}

int photon_count(const Occupation& occ) {
  int total = 0;
  for (int n : occ) total += n;
  return total;
}

FockState::FockState(LevelIndex levels, std::vector<Ket> entries, double prune)
    : levels_(levels) {
  const std::size_t dim = static_cast<std::size_t>(levels_.dim());
  std::map<Occupation, Complex, bool (*)(const Occupation&, const Occupation&)> merged(
      occupation_before);
  for (auto& ket : entries) {
    if (ket.occupations.size() != dim) {
      throw std::invalid_argument("FockState: occupation vector has " +
                                  std::to_string(ket.occupations.size()) +
                                  " entries, expected " + std::to_string(dim));
    }
    for (int n : ket.occupations) {
      if (n < 0) throw std::invalid_argument("FockState: negative occupation number");
    }
    merged[std::move(ket.occupations)] += ket.amplitude;
  }
  kets_.reserve(merged.size());
  for (auto& [occ, amp] : merged) {
    if (std::abs(amp) < prune) continue;
    kets_.push_back(Ket{amp, occ});
  }
}

double FockState::norm2() const {
  double total = 0.0;
  for (const auto& ket : kets_) total += std::norm(ket.amplitude);
  return total;
}

Complex FockState::amplitude_of(const Occupation& occ) const {
  auto it = std::lower_bound(kets_.begin(), kets_.end(), occ,
                             [](const Ket& ket, const Occupation& target) {
                               return occupation_before(ket.occupations, target);
                             });
  if (it == kets_.end() || it->occupations != occ) return Complex(0.0, 0.0);
  return it->amplitude;
}

std::uint64_t output_space_size(int dim, int photons) {
  if (dim <= 0 || photons < 0) {
    throw std::invalid_argument("output_space_size: need dim > 0 and photons >= 0");
  }
  // C(photons + dim - 1, photons) multiplied out stepwise; each prefix is an
  // exact binomial, so dividing early keeps the arithmetic in range.
  std::uint64_t result = 1;
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  for (int k = 1; k <= photons; ++k) {
    const std::uint64_t factor = static_cast<std::uint64_t>(dim - 1 + k);
    if (result > cap / factor) return cap;
    result = result * factor / k;
  }
  return result;
}

static void enumerate_rec(int level, int remaining, Occupation& occ,
                          const LevelIndex& levels,
                          const std::function<bool(const std::vector<int>&)>& filter,
                          std::vector<Occupation>& out) {
  const int dim = levels.dim();
  if (level == dim - 1) {
    occ[level] = remaining;
    if (filter) {
      std::vector<int> per_channel(levels.channels, 0);
      for (int l = 0; l < dim; ++l) {
        per_channel[l / (levels.polarizations * levels.packets)] += occ[l];
      }
      if (!filter(per_channel)) return;
    }
    out.push_back(occ);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    occ[level] = k;
    enumerate_rec(level + 1, remaining - k, occ, levels, filter, out);
  }
}

std::vector<Occupation> enumerate_kets(
    const LevelIndex& levels, int photons,
    const std::function<bool(const std::vector<int>&)>& channel_filter) {
  if (photons < 0) throw std::invalid_argument("enumerate_kets: negative photon count");
  std::vector<Occupation> out;
  Occupation occ(levels.dim(), 0);
  enumerate_rec(0, photons, occ, levels, channel_filter, out);
  return out;
}

std::string render_ket(const LevelIndex& levels, const Occupation& occ) {
  if (occ.size() != static_cast<std::size_t>(levels.dim())) {
    throw std::invalid_argument("render_ket: occupation size does not match levels");
  }
  static const char kPolarizationLetters[] = {'H', 'V'};
  std::string out = "|";
  bool first = true;
  for (int level = 0; level < levels.dim(); ++level) {
    if (occ[level] == 0) continue;
    const auto mode = levels.tuple_of(level);
    if (mode.polarization > 1) {
      throw std::invalid_argument("render_ket: no letter for polarization index " +
                                  std::to_string(mode.polarization));
    }
    for (int rep = 0; rep < occ[level]; ++rep) {
      out += first ? " " : ", ";
      out += kPolarizationLetters[mode.polarization];
      out += "(" + std::to_string(mode.packet) + ")" + std::to_string(mode.channel);
      first = false;
    }
  }
  out += " >";
  return out;
}

std::string render_channel_pattern(const std::vector<int>& counts) {
  std::string out = "|";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out += (i == 0 ? " " : ", ") + std::to_string(counts[i]);
  }
  out += " >";
  return out;
}

}  // namespace lops
