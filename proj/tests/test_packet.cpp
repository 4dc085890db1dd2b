#include <cmath>
#include <random>

#include "doctest.h"
#include "lops/packet.hpp"
#include "oracles.hpp"

using lops::Complex;
using lops::PacketDescriptor;
using lops::PacketShape;
using lops::PacketTable;

TEST_CASE("def_packet deduplicates and assigns indices in insertion order") {
  PacketTable table(PacketShape::Gaussian);
  CHECK(table.def_packet(7, 0.0, 1.0, 1.0) == 0);  // suggested index is ignored
  CHECK(table.def_packet(0, 2.0, 1.0, 1.0) == 1);
  CHECK(table.def_packet(5, 0.0, 1.0, 1.0) == 0);  // exact duplicate
  CHECK(table.def_packet(5, 0.0 + 1e-12, 1.0, 1.0) == 0);  // within tolerance
  CHECK(table.packet_count() == 2);
  CHECK(table.packets_per_period() == 2);

  auto d0 = table.descriptor(0);
  CHECK(d0.index == 0);
  CHECK(d0.t0 == 0.0);
  auto d1 = table.descriptor(1);
  CHECK(d1.t0 == 2.0);
}

TEST_CASE("periodic tables replicate every packet per period") {
  PacketTable table(PacketShape::Exponential, 2, 3.0);
  CHECK(table.def_packet(0, 0.5, 1.0, 1.0) == 0);
  CHECK(table.periods() == 2);
  CHECK(table.packets_per_period() == 1);
  CHECK(table.packet_count() == 2);
  CHECK(table.descriptor(0).t0 == 0.5);
  CHECK(table.descriptor(1).t0 == 3.5);

  // A time in period 1 reduces to its base packet.
  CHECK(table.def_packet(0, 3.5, 1.0, 1.0) == 0);
  CHECK(table.packet_count() == 2);

  CHECK(table.period_of(0.5) == 0);
  CHECK(table.period_of(3.4) == 1);
  CHECK(table.flat_of(0, 1) == 1);
  CHECK(table.find_packet(0.5, 1.0, 1.0) == 0);
  CHECK(table.find_packet(3.5, 1.0, 1.0) == 1);
}

TEST_CASE("packet table range and capacity errors") {
  PacketTable table(PacketShape::Gaussian, 2, 3.0);
  CHECK_THROWS_AS(table.period_of(-0.1), std::out_of_range);
  CHECK_THROWS_AS(table.period_of(6.0), std::out_of_range);
  CHECK_THROWS_AS(table.def_packet(0, 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(table.def_packet(0, 0.0, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(table.flat_of(0, 0), std::out_of_range);  // nothing registered yet
  CHECK_THROWS_AS(table.descriptor(0), std::out_of_range);
  CHECK_THROWS_AS(table.find_packet(0.0, 1.0, 1.0), std::out_of_range);

  PacketTable tiny(PacketShape::Gaussian);
  tiny.max_packets = 2;
  tiny.def_packet(0, 0.0, 1.0, 1.0);
  tiny.def_packet(0, 1.0, 1.0, 1.0);
  CHECK_THROWS_AS(tiny.def_packet(0, 2.0, 1.0, 1.0), std::length_error);

  CHECK_THROWS_AS(PacketTable(PacketShape::Gaussian, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PacketTable(PacketShape::Gaussian, 2, 0.0), std::invalid_argument);
}

TEST_CASE("gaussian overlap fixed values") {
  PacketDescriptor a{0, 0.0, 1.0, 1.0};
  CHECK(std::abs(lops::overlap_gaussian(a, a) - Complex(1.0, 0.0)) < 1e-15);

  // Two unit-width packets two time units apart, same unit frequency:
  // magnitude e^{-1}, phase e^{2i}.
  PacketDescriptor b{1, 2.0, 1.0, 1.0};
  const Complex s = lops::overlap_gaussian(a, b);
  CHECK(std::abs(s) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const Complex expected = std::exp(-1.0) * std::exp(Complex(0.0, 2.0));
  CHECK(std::abs(s - expected) < 1e-12);
}

TEST_CASE("gaussian overlap reduces to the equal-width closed form") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> time(-3.0, 3.0);
  std::uniform_real_distribution<double> freq(0.5, 3.0);
  std::uniform_real_distribution<double> width(0.3, 2.5);
  for (int trial = 0; trial < 1000; ++trial) {
    const double w = width(rng);
    const double f = freq(rng);
    PacketDescriptor a{0, time(rng), f, w};
    PacketDescriptor b{1, time(rng), f, w};
    const double dt = a.t0 - b.t0;
    const Complex expected =
        std::exp(Complex(0.0, -f * dt)) * std::exp(-dt * dt * w * w / 4.0);
    CHECK(std::abs(lops::overlap_gaussian(a, b) - expected) < 1e-12);
  }
}

TEST_CASE("exponential overlap fixed values") {
  PacketDescriptor a{0, 0.0, 1.0, 1.0};
  CHECK(std::abs(lops::overlap_exponential(a, a) - Complex(1.0, 0.0)) < 1e-15);

  // Equal decay time and frequency: magnitude e^{-dt/tau}.
  for (double dt : {0.25, 1.0, 2.5}) {
    PacketDescriptor b{1, dt, 1.0, 1.0};
    CHECK(std::abs(lops::overlap_exponential(a, b)) ==
          doctest::Approx(std::exp(-dt)).epsilon(1e-12));
    CHECK(std::abs(lops::overlap_exponential(b, a)) ==
          doctest::Approx(std::exp(-dt)).epsilon(1e-12));
  }

  // Widely separated packets are effectively orthogonal.
  PacketDescriptor far{1, 20.0, 1.0, 1.0};
  CHECK(std::abs(lops::overlap_exponential(a, far)) < 1e-6);
  PacketDescriptor gfar{1, 12.0, 1.0, 1.0};
  CHECK(std::abs(lops::overlap_gaussian(a, gfar)) < 1e-6);
}

TEST_CASE("overlaps agree with numerical quadrature") {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> time(0.0, 2.0);
  std::uniform_real_distribution<double> freq(0.5, 3.0);
  std::uniform_real_distribution<double> width(0.4, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    PacketDescriptor a{0, time(rng), freq(rng), width(rng)};
    PacketDescriptor b{1, time(rng), freq(rng), width(rng)};
    for (auto shape : {PacketShape::Gaussian, PacketShape::Exponential}) {
      const Complex closed = lops::packet_overlap(shape, a, b);
      const Complex quad = oracles::quad_overlap(shape, a, b);
      CHECK(std::abs(closed - quad) < 1e-8);
    }
  }
}

TEST_CASE("overlap swap symmetry") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    PacketDescriptor a{0, u(rng), u(rng), u(rng)};
    PacketDescriptor b{1, u(rng), u(rng), u(rng)};
    for (auto shape : {PacketShape::Gaussian, PacketShape::Exponential}) {
      const Complex sab = lops::packet_overlap(shape, a, b);
      const Complex sba = lops::packet_overlap(shape, b, a);
      CHECK(std::abs(sab - std::conj(sba)) < 1e-12);
      CHECK(std::abs(sab) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("single-period overlap matrix is Hermitian with unit diagonal") {
  PacketTable table(PacketShape::Gaussian);
  table.def_packet(0, 0.0, 1.0, 1.0);
  table.def_packet(0, 0.7, 1.3, 0.9);
  table.def_packet(0, 1.5, 2.0, 1.4);
  const lops::CMatrix s = lops::single_period_overlap(table);
  REQUIRE(s.rows() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(s(i, i) == Complex(1.0, 0.0));
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(s(i, j) - std::conj(s(j, i))) < 1e-15);
      CHECK(std::abs(s(i, j)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("full overlap matrix repeats per period with zero cross terms") {
  PacketTable table(PacketShape::Exponential, 3, 5.0);
  table.def_packet(0, 0.0, 1.0, 0.5);
  table.def_packet(0, 0.8, 1.0, 0.5);
  const lops::CMatrix block = lops::single_period_overlap(table);
  const lops::CMatrix full = lops::build_overlap_matrix(table);
  REQUIRE(full.rows() == 6);
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const Complex got = full(p * 2 + i, q * 2 + j);
          if (p == q)
            CHECK(got == block(i, j));
          else
            CHECK(got == Complex(0.0, 0.0));
        }
}

TEST_CASE("overlap matrices of an empty table are rejected") {
  PacketTable table(PacketShape::Gaussian);
  CHECK_THROWS_AS(lops::single_period_overlap(table), std::invalid_argument);
  CHECK_THROWS_AS(lops::build_overlap_matrix(table), std::invalid_argument);
}
