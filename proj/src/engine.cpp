#include "lops/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace lops {

namespace {

double occupation_factorial(const Occupation& occ) {
  double prod = 1.0;
  for (int n : occ)
    for (int k = 2; k <= n; ++k) prod *= k;
  return prod;
}

void check_occupation(const Occupation& occ, int dim, const char* who) {
  if (static_cast<int>(occ.size()) != dim)
    throw std::invalid_argument(std::string(who) +
                                ": occupation size does not match level count");
  for (int n : occ)
    if (n < 0)
      throw std::invalid_argument(std::string(who) + ": negative occupation");
}

}  // namespace

Complex run_permanent(const CMatrix& total, const Occupation& in,
                      const Occupation& out) {
  const int dim = static_cast<int>(total.rows());
  check_occupation(in, dim, "run_permanent");
  check_occupation(out, dim, "run_permanent");
  const int n = photon_count(in);
  if (n != photon_count(out)) return Complex(0.0, 0.0);
  if (n == 0) return Complex(1.0, 0.0);

  CMatrix m(n, n);
  int col = 0;
  for (int j = 0; j < dim; ++j) {
    for (int rep = 0; rep < in[static_cast<size_t>(j)]; ++rep, ++col) {
      int row = 0;
      for (int k = 0; k < dim; ++k)
        for (int rep2 = 0; rep2 < out[static_cast<size_t>(k)]; ++rep2, ++row)
          m(row, col) = total(k, j);
    }
  }
  const double norm =
      std::sqrt(occupation_factorial(in) * occupation_factorial(out));
  return permanent_glynn(m) / norm;
}

FockState run_direct(const CMatrix& total, const FockState& input, double prune,
                     int max_photons) {
  const LevelIndex& levels = input.levels();
  const int dim = levels.dim();
  if (total.rows() != dim || total.cols() != dim)
    throw std::invalid_argument("run_direct: matrix does not match level count");

  using Poly = std::map<Occupation, Complex>;
  Poly accumulated;
  for (const Ket& ket : input.kets()) {
    const int n = photon_count(ket.occupations);
    if (n > max_photons)
      throw std::length_error("run_direct: input ket exceeds the photon ceiling");

    // Monomials in the output creation operators and their coefficients.
    Poly poly;
    poly.emplace(Occupation(static_cast<size_t>(dim), 0), Complex(1.0, 0.0));
    for (int j = 0; j < dim; ++j) {
      for (int rep = 0; rep < ket.occupations[static_cast<size_t>(j)]; ++rep) {
        Poly next;
        for (const auto& [occ, coeff] : poly) {
          for (int k = 0; k < dim; ++k) {
            const Complex t = total(k, j);
            if (t == Complex(0.0, 0.0)) continue;
            Occupation grown = occ;
            grown[static_cast<size_t>(k)] += 1;
            next[grown] += coeff * t;
          }
        }
        poly = std::move(next);
      }
    }

    const double in_norm = std::sqrt(occupation_factorial(ket.occupations));
    for (const auto& [occ, coeff] : poly)
      accumulated[occ] +=
          ket.amplitude * coeff * std::sqrt(occupation_factorial(occ)) / in_norm;
  }

  std::vector<Ket> kets;
  kets.reserve(accumulated.size());
  for (auto& [occ, amp] : accumulated) kets.push_back(Ket{amp, occ});
  return FockState(levels, std::move(kets), prune);
}

FockState run(const CircuitBuilder& circuit, const FockState& input,
              const SimConfig& cfg) {
  if (!circuit.sealed())
    throw std::logic_error("run: every channel needs a detector before running");
  if (!(input.levels() == circuit.levels()))
    throw std::invalid_argument("run: input state levels do not match the circuit");
  const LevelIndex& levels = circuit.levels();
  const int dim = levels.dim();
  const CMatrix& total = circuit.total();

  const int photon_ceiling =
      cfg.core == Core::Direct ? cfg.max_photons_direct : cfg.max_photons;
  for (const Ket& ket : input.kets())
    if (photon_count(ket.occupations) > photon_ceiling)
      throw std::length_error("run: input ket exceeds the photon ceiling");

  std::optional<std::vector<Occupation>> restricted = cfg.restricted;
  if (restricted.has_value()) {
    for (const Occupation& occ : *restricted) check_occupation(occ, dim, "run");
    // Duplicate requests would otherwise be merged into a doubled amplitude.
    std::sort(restricted->begin(), restricted->end(), occupation_before);
    restricted->erase(std::unique(restricted->begin(), restricted->end()),
                      restricted->end());
  }

  if (cfg.core == Core::Direct) {
    FockState out = run_direct(total, input, cfg.prune, cfg.max_photons_direct);
    if (!restricted.has_value()) return out;
    std::vector<Ket> kept;
    for (const Occupation& occ : *restricted) {
      const Complex amp = out.amplitude_of(occ);
      if (std::abs(amp) > cfg.prune) kept.push_back(Ket{amp, occ});
    }
    return FockState(levels, std::move(kept), cfg.prune);
  }

  std::vector<Occupation> outputs;
  if (restricted.has_value()) {
    outputs = std::move(*restricted);
  } else {
    std::set<int> counts;
    for (const Ket& ket : input.kets()) counts.insert(photon_count(ket.occupations));
    for (int n : counts) {
      if (output_space_size(dim, n) > cfg.max_output_kets)
        throw std::length_error(
            "run: output basis too large; restrict the kets or use the direct "
            "core");
      std::vector<Occupation> block = enumerate_kets(levels, n);
      outputs.insert(outputs.end(), std::make_move_iterator(block.begin()),
                     std::make_move_iterator(block.end()));
    }
  }

  std::vector<Ket> kets;
  for (const Occupation& occ : outputs) {
    Complex amp(0.0, 0.0);
    for (const Ket& ket : input.kets())
      amp += ket.amplitude * run_permanent(total, ket.occupations, occ);
    if (std::abs(amp) > cfg.prune) kets.push_back(Ket{amp, occ});
  }
  return FockState(levels, std::move(kets), cfg.prune);
}

}  // namespace lops
