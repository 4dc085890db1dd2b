#include <cmath>

#include "doctest.h"
#include "lops/device.hpp"
#include "lops/engine.hpp"
#include "lops/linalg.hpp"
#include "lops/outcomes.hpp"

using lops::Branch;
using lops::CircuitBuilder;
using lops::Complex;
using lops::DetectorSpec;
using lops::FockState;
using lops::Ket;
using lops::LevelIndex;
using lops::Occupation;

namespace {

// Balanced-splitter output of two photons in one packet: bunched state.
FockState bunched_output() {
  CircuitBuilder b(LevelIndex{2, 1, 1});
  b.beamsplitter(0, 1, 45.0, 0.0);
  b.detector(0);
  b.detector(1);
  return lops::run(b, FockState(b.levels(), {Ket{Complex(1, 0), {1, 1}}}));
}

// Same interference with fully distinguishable packets.
FockState distinguishable_output(CircuitBuilder& b) {
  b.beamsplitter(0, 1, 45.0, 0.0);
  b.detector(0);
  b.detector(1);
  const LevelIndex lv = b.levels();
  Occupation occ(lv.dim(), 0);
  occ[lv.level_of(0, 0, 0)] = 1;
  occ[lv.level_of(1, 0, 1)] = 1;
  return lops::run(b, FockState(lv, {Ket{Complex(1, 0), occ}}));
}

}  // namespace

TEST_CASE("postselect without conditions returns one branch") {
  const FockState out = bunched_output();
  const auto branches = lops::postselect(out, {{0, std::nullopt}, {1, std::nullopt}});
  REQUIRE(branches.size() == 1);
  CHECK(branches[0].weight == doctest::Approx(1.0));
  CHECK(branches[0].state.norm2() == doctest::Approx(1.0));
  CHECK(branches[0].state.kets().size() == out.kets().size());
}

TEST_CASE("postselect filters by conditioned channel counts") {
  const FockState out = bunched_output();
  // Coincidences are suppressed by interference: nothing survives.
  const auto none = lops::postselect(out, {{0, 1}, {1, 1}});
  CHECK(none.empty());

  // Both photons in channel 0 happens with probability 1/2.
  const auto both = lops::postselect(out, {{0, 2}, {1, 0}});
  REQUIRE(both.size() == 1);
  CHECK(both[0].weight == doctest::Approx(0.5));
  CHECK(both[0].state.norm2() == doctest::Approx(1.0));
}

TEST_CASE("postselect groups by the conditioned channels' full content") {
  // Two packets in the conditioned channel keep their identity: amplitudes on
  // different packets land in different (incoherent) branches.
  CircuitBuilder b(LevelIndex{2, 1, 2});
  FockState out = distinguishable_output(b);
  const auto branches = lops::postselect(out, {{0, 1}, {1, 1}});
  REQUIRE(branches.size() == 2);
  // Each coincidence branch carries probability 1/4.
  CHECK(branches[0].weight == doctest::Approx(0.25));
  CHECK(branches[1].weight == doctest::Approx(0.25));
  CHECK(branches[0].state.norm2() == doctest::Approx(1.0));
  CHECK(branches[1].state.norm2() == doctest::Approx(1.0));
  CHECK(branches[0].signature != branches[1].signature);

  // Weights of every exclusive outcome sum to the postselection probability;
  // here the unconditioned total recovers the full norm.
  const auto all = lops::postselect(out, {{0, std::nullopt}, {1, std::nullopt}});
  double total = 0.0;
  for (const auto& br : all) total += br.weight;
  CHECK(total == doctest::Approx(out.norm2()));
}

TEST_CASE("postselect validates detector coverage") {
  const FockState out = bunched_output();
  CHECK_THROWS_AS(lops::postselect(out, {{0, std::nullopt}}), std::invalid_argument);
  CHECK_THROWS_AS(lops::postselect(out, {{0, std::nullopt},
                                         {0, std::nullopt}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lops::postselect(out, {{0, std::nullopt},
                                         {1, std::nullopt},
                                         {2, std::nullopt}}),
                  std::invalid_argument);
}

TEST_CASE("distribution of indistinguishable interference") {
  const FockState out = bunched_output();
  const auto dist = lops::distribution(out, {{0, std::nullopt}, {1, std::nullopt}});
  REQUIRE(dist.entries.size() == 2);
  CHECK(dist.entries.at("| 2, 0 >") == doctest::Approx(0.5));
  CHECK(dist.entries.at("| 0, 2 >") == doctest::Approx(0.5));
  CHECK(dist.entries.count("| 1, 1 >") == 0);
}

TEST_CASE("distribution of distinguishable photons") {
  CircuitBuilder b(LevelIndex{2, 1, 2});
  const FockState out = distinguishable_output(b);
  const auto dist = lops::distribution(out, {{0, std::nullopt}, {1, std::nullopt}});
  CHECK(dist.entries.at("| 2, 0 >") == doctest::Approx(0.25));
  CHECK(dist.entries.at("| 0, 2 >") == doctest::Approx(0.25));
  CHECK(dist.entries.at("| 1, 1 >") == doctest::Approx(0.5));
}

TEST_CASE("distribution respects detector conditions") {
  CircuitBuilder b(LevelIndex{2, 1, 2});
  const FockState out = distinguishable_output(b);
  const auto dist = lops::distribution(out, {{0, 1}, {1, std::nullopt}});
  REQUIRE(dist.entries.size() == 1);
  CHECK(dist.entries.at("| 1, 1 >") == doctest::Approx(0.5));
}

TEST_CASE("distribution marginals match direct per-ket sums") {
  CircuitBuilder b(LevelIndex{2, 1, 2});
  const FockState out = distinguishable_output(b);
  const auto dist = lops::distribution(out, {{0, std::nullopt}, {1, std::nullopt}});
  // Reconstruct P(n photons in channel 0) from the state itself.
  const LevelIndex lv = out.levels();
  std::map<int, double> marginal;
  for (const Ket& ket : out.kets()) {
    int n0 = 0;
    for (int pk = 0; pk < lv.packets; ++pk) n0 += ket.occupations[lv.level_of(0, 0, pk)];
    marginal[n0] += std::norm(ket.amplitude);
  }
  CHECK(dist.entries.at("| 2, 0 >") == doctest::Approx(marginal[2]));
  CHECK(dist.entries.at("| 1, 1 >") == doctest::Approx(marginal[1]));
  CHECK(dist.entries.at("| 0, 2 >") == doctest::Approx(marginal[0]));
}

TEST_CASE("distribution of an empty state is empty") {
  const FockState out = bunched_output();
  CHECK(lops::distribution(FockState(out.levels()), {{0, std::nullopt}, {1, std::nullopt}})
            .entries.empty());
  // An impossible condition also empties it.
  CHECK(lops::distribution(out, {{0, 3}, {1, 0}}).entries.empty());
}

TEST_CASE("density matrix of a pure branch") {
  const FockState out = bunched_output();
  const auto branches = lops::postselect(out, {{0, std::nullopt}, {1, std::nullopt}});
  const auto dm = lops::density_matrix(branches, {0, 1});
  REQUIRE(dm.basis.size() == 2);
  REQUIRE(dm.labels.size() == 2);
  CHECK(std::abs(dm.rho.trace() - Complex(1, 0)) < 1e-12);
  CHECK(lops::purity(dm) == doctest::Approx(1.0));
  // Hermitian and positive semidefinite.
  CHECK((dm.rho - dm.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  const auto eig = lops::hermitian_eig(dm.rho);
  CHECK(eig.values.minCoeff() >= -1e-12);
}

TEST_CASE("incoherent branches mix the density matrix") {
  // Distinguishable coincidences: after conditioning both channels on one
  // photon, the surviving channel-0 photon is an even mixture of the two
  // packets.
  CircuitBuilder b(LevelIndex{2, 1, 2});
  const FockState out = distinguishable_output(b);
  const auto branches = lops::postselect(out, {{0, 1}, {1, 1}});
  REQUIRE(branches.size() == 2);
  const auto dm = lops::density_matrix(branches, {0});
  REQUIRE(dm.basis.size() == 2);
  CHECK(std::abs(dm.rho(0, 0) - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(dm.rho(1, 1) - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(dm.rho(0, 1)) < 1e-12);
  CHECK(lops::purity(dm) == doctest::Approx(0.5));
  CHECK(std::abs(dm.rho.trace() - Complex(1, 0)) < 1e-12);
}

TEST_CASE("density matrix basis restricts to surviving channels") {
  CircuitBuilder b(LevelIndex{2, 1, 2});
  const FockState out = distinguishable_output(b);
  const auto branches = lops::postselect(out, {{0, 1}, {1, 1}});
  const auto dm = lops::density_matrix(branches, {0});
  const LevelIndex lv = out.levels();
  for (const Occupation& occ : dm.basis) {
    // Nothing outside channel 0 appears in the basis.
    CHECK(occ[lv.level_of(1, 0, 0)] == 0);
    CHECK(occ[lv.level_of(1, 0, 1)] == 0);
    CHECK(lops::photon_count(occ) == 1);
  }
  for (const auto& label : dm.labels) CHECK(label.find('0') != std::string::npos);
}

TEST_CASE("density matrix error paths") {
  CHECK_THROWS_AS(lops::density_matrix({}, {0}), std::invalid_argument);

  const FockState out = bunched_output();
  auto branches = lops::postselect(out, {{0, std::nullopt}, {1, std::nullopt}});
  CHECK_THROWS_AS(lops::density_matrix(branches, {5}), std::out_of_range);

  for (auto& br : branches) br.weight = 0.0;
  CHECK_THROWS_AS(lops::density_matrix(branches, {0}), std::runtime_error);
}

TEST_CASE("purity of hand-built matrices") {
  lops::DensityMatrix dm;
  dm.rho = lops::CMatrix::Identity(4, 4) / 4.0;
  CHECK(lops::purity(dm) == doctest::Approx(0.25));
  dm.rho = lops::CMatrix::Zero(2, 2);
  dm.rho(0, 0) = 1.0;
  CHECK(lops::purity(dm) == doctest::Approx(1.0));
}
