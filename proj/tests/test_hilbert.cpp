#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "support/dense_reference.hpp"
#include "symket/hilbert.hpp"

using namespace symket;
using namespace symket::testsupport;

namespace {

const BasisLabel kPhiH{"phi", "h"};
const BasisLabel kPhiT{"phi", "t"};
const BasisLabel kPsiH{"psi", "h"};
const BasisLabel kBlankT{"0", "t"};

constexpr double kInvSqrt2 = 0.70710678118654752;

}  // namespace

TEST_CASE("tensor of unit kets concatenates tuples", "[hilbert]") {
  const auto product = tensor(NParticleState::ket(kPhiH),
                              NParticleState::ket(kBlankT));
  REQUIRE(product.particle_count() == 2);
  REQUIRE(product.amplitudes().size() == 1);
  REQUIRE(product.amplitude({kPhiH, kBlankT}) == Complex{1.0, 0.0});
}

TEST_CASE("tensor is bilinear in its arguments", "[hilbert]") {
  const Complex alpha{0.3, -0.4};
  const auto scaled = tensor(alpha * NParticleState::ket(kPhiH),
                             NParticleState::ket(kPsiH));
  REQUIRE(std::abs(scaled.amplitude({kPhiH, kPsiH}) - alpha) < 1e-15);

  const auto left = NParticleState::ket(kPhiH) + NParticleState::ket(kPsiH);
  const auto expanded = tensor(left, NParticleState::ket(kBlankT));
  const auto summed = tensor(NParticleState::ket(kPhiH), NParticleState::ket(kBlankT)) +
                      tensor(NParticleState::ket(kPsiH), NParticleState::ket(kBlankT));
  REQUIRE(approx_equal(expanded, summed));
}

TEST_CASE("tensor builds the first photon-pair term", "[hilbert]") {
  const auto term = tensor(NParticleState::ket(BasisLabel{"H", "1"}),
                           NParticleState::ket(BasisLabel{"H", "2"}));
  REQUIRE(term.amplitude({{"H", "1"}, {"H", "2"}}) == Complex{1.0, 0.0});
}

TEST_CASE("states here are orthogonal to states there", "[hilbert]") {
  REQUIRE(inner(NParticleState::ket(kPhiH), NParticleState::ket(kPhiT)) ==
          Complex{0.0, 0.0});
  REQUIRE(inner(NParticleState::ket(kPhiH), NParticleState::ket(kPhiH)) ==
          Complex{1.0, 0.0});
}

TEST_CASE("inner product expands orthogonal superpositions", "[hilbert]") {
  const auto a = NParticleState::ket(kPhiH);
  const auto b = NParticleState::ket(kPsiH);
  const Complex inv{kInvSqrt2, 0.0};
  const auto plus = inv * (a + b);
  const auto minus = inv * (a - b);
  REQUIRE(std::abs(inner(plus, minus)) < 1e-15);
  REQUIRE(std::abs(inner(plus, plus) - Complex{1.0, 0.0}) < 1e-15);
}

TEST_CASE("inner product is conjugate-linear in the first slot", "[hilbert]") {
  const Complex alpha{0.0, 1.0};
  const auto a = NParticleState::ket(kPhiH);
  REQUIRE(std::abs(inner(alpha * a, a) - std::conj(alpha)) < 1e-15);
  REQUIRE(std::abs(inner(a, alpha * a) - alpha) < 1e-15);
  REQUIRE_THROWS_AS(inner(a, tensor(a, a)), std::invalid_argument);
}

TEST_CASE("exchange swaps tuple slots and is an involution", "[hilbert]") {
  const auto product = tensor(NParticleState::ket(kPhiH),
                              NParticleState::ket(kPsiH));
  const auto swapped = exchange(product, 0, 1);
  REQUIRE(swapped.amplitude({kPsiH, kPhiH}) == Complex{1.0, 0.0});
  REQUIRE(swapped.amplitude({kPhiH, kPsiH}) == Complex{0.0, 0.0});
  REQUIRE(approx_equal(exchange(swapped, 0, 1), product));
}

TEST_CASE("exchange rejects bad particle indices", "[hilbert]") {
  const auto product = tensor(NParticleState::ket(kPhiH),
                              NParticleState::ket(kPsiH));
  REQUIRE_THROWS_AS(exchange(product, 0, 2), std::out_of_range);
  REQUIRE_THROWS_AS(exchange(product, 1, 1), std::invalid_argument);
}

TEST_CASE("symmetrized states are exchange eigenstates", "[hilbert]") {
  const auto boson = symmetrize(NParticleState::ket(kPhiH),
                                NParticleState::ket(kBlankT),
                                ParticleStatistics::Boson);
  REQUIRE(distance(exchange(boson, 0, 1), boson) < 1e-12);

  const auto fermion = symmetrize(NParticleState::ket(kPhiH),
                                  NParticleState::ket(kBlankT),
                                  ParticleStatistics::Fermion);
  const auto flipped = Complex{-1.0, 0.0} * fermion;
  const auto swapped = exchange(fermion, 0, 1);
  for (const auto& [tuple, amp] : swapped.amplitudes()) {
    REQUIRE(std::abs(amp - flipped.amplitude(tuple)) < 1e-12);
  }
}

TEST_CASE("symmetrize places 1/sqrt(2) on both orderings", "[hilbert]") {
  const auto state = symmetrize(NParticleState::ket(kPhiH),
                                NParticleState::ket(kBlankT),
                                ParticleStatistics::Boson);
  REQUIRE(std::abs(state.amplitude({kPhiH, kBlankT}).real() - 0.7071067812) <
          1e-9);
  REQUIRE(std::abs(state.amplitude({kBlankT, kPhiH}).real() - 0.7071067812) <
          1e-9);
  REQUIRE(state.is_normalized());
}

TEST_CASE("identical fermions are excluded, identical bosons merge", "[hilbert]") {
  const auto chi = NParticleState::ket(BasisLabel{"chi", "h"});
  REQUIRE_THROWS_AS(symmetrize(chi, chi, ParticleStatistics::Fermion),
                    ZeroNormState);
  const auto pair = symmetrize(chi, chi, ParticleStatistics::Boson);
  REQUIRE(pair.amplitudes().size() == 1);
  REQUIRE(std::abs(pair.amplitude({{"chi", "h"}, {"chi", "h"}}) -
                   Complex{1.0, 0.0}) < 1e-12);
}

TEST_CASE("symmetrize requires normalized one-particle inputs", "[hilbert]") {
  const auto chi = NParticleState::ket(BasisLabel{"chi", "h"});
  REQUIRE_THROWS_AS(symmetrize(Complex{2.0, 0.0} * chi, chi,
                               ParticleStatistics::Boson),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(symmetrize_unnormalized(tensor(chi, chi), chi,
                                            ParticleStatistics::Boson),
                    std::invalid_argument);
}

TEST_CASE("unnormalized symmetrizer is exactly bilinear", "[hilbert]") {
  std::mt19937_64 rng(11);
  const auto basis = make_basis(3, 2);
  for (int round = 0; round < 10; ++round) {
    const auto a = random_state(basis, 1, rng);
    const auto a2 = random_state(basis, 1, rng);
    const auto b = random_state(basis, 1, rng);
    const Complex alpha = random_amplitude(rng);
    const Complex beta = random_amplitude(rng);
    for (auto stats : {ParticleStatistics::Boson, ParticleStatistics::Fermion}) {
      const auto lhs =
          symmetrize_unnormalized(alpha * a + beta * a2, b, stats);
      const auto rhs = alpha * symmetrize_unnormalized(a, b, stats) +
                       beta * symmetrize_unnormalized(a2, b, stats);
      REQUIRE(distance(lhs, rhs) < 1e-12);
    }
  }
}

// Symmetrizing a superposed first argument against the blank equals the
// same superposition of the individually symmetrized states, with no extra
// renormalization factor, whenever a^2+b^2 = 1 and psi, phi, 0 are
// mutually orthogonal.
TEST_CASE("superposition commutes with symmetrization for orthogonal labels",
          "[hilbert]") {
  const double a = 0.6, b = 0.8;
  const auto psi = NParticleState::ket(kPsiH);
  const auto phi = NParticleState::ket(kPhiH);
  const auto blank = NParticleState::ket(kBlankT);
  for (auto stats : {ParticleStatistics::Boson, ParticleStatistics::Fermion}) {
    const auto direct = symmetrize(Complex{a, 0.0} * psi + Complex{b, 0.0} * phi,
                                   blank, stats);
    const auto combo = Complex{a, 0.0} * symmetrize(psi, blank, stats) +
                       Complex{b, 0.0} * symmetrize(phi, blank, stats);
    REQUIRE(distance(direct, combo) < 1e-12);
    REQUIRE(std::abs(combo.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("canonical form fixes the global phase", "[hilbert]") {
  const Complex phase = std::polar(1.0, 1.234);
  const auto state = symmetrize(NParticleState::ket(kPhiH),
                                NParticleState::ket(kBlankT),
                                ParticleStatistics::Boson);
  const auto rotated = phase * state;
  REQUIRE(distance(rotated, state) < 1e-12);
  const auto lead = rotated.canonical().amplitudes().begin()->second;
  REQUIRE(lead.imag() < 1e-15);
  REQUIRE(lead.real() > 0.0);
}

TEST_CASE("construction validates tuples and prunes zeros", "[hilbert]") {
  REQUIRE_THROWS_AS(NParticleState(0), std::invalid_argument);
  REQUIRE_THROWS_AS(NParticleState::ket(BasisLabel{"", "h"}),
                    std::invalid_argument);
  NParticleState::AmplitudeMap map;
  map[{kPhiH, kPsiH}] = Complex{1e-15, 0.0};
  map[{kPhiH, kBlankT}] = Complex{1.0, 0.0};
  const auto state = NParticleState::from_amplitudes(2, map);
  REQUIRE(state.amplitudes().size() == 1);
  NParticleState::AmplitudeMap bad;
  bad[{kPhiH}] = Complex{1.0, 0.0};
  REQUIRE_THROWS_AS(NParticleState::from_amplitudes(2, bad),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(NParticleState(2).normalized(), ZeroNormState);
}

TEST_CASE("factorize_location splits symmetrized same-internal states",
          "[hilbert]") {
  for (auto stats : {ParticleStatistics::Boson, ParticleStatistics::Fermion}) {
    const auto state = symmetrize(NParticleState::ket(kPhiT),
                                  NParticleState::ket(kPhiH), stats);
    const auto split = factorize_location(state);
    REQUIRE(split.has_value());
    REQUIRE(split->internal_part.amplitude({{"phi", ""}, {"phi", ""}}) !=
            Complex{0.0, 0.0});
    const double loc_ht = std::abs(split->location_part.amplitude({{"h", ""}, {"t", ""}}));
    const double loc_th = std::abs(split->location_part.amplitude({{"t", ""}, {"h", ""}}));
    REQUIRE(std::abs(loc_ht - kInvSqrt2) < 1e-12);
    REQUIRE(std::abs(loc_th - kInvSqrt2) < 1e-12);
    REQUIRE(approx_equal(
        recombine_location(split->internal_part, split->location_part),
        state));
  }
}

TEST_CASE("factorize_location reports non-separable states", "[hilbert]") {
  const auto state = symmetrize(NParticleState::ket(kPhiH),
                                NParticleState::ket(kBlankT),
                                ParticleStatistics::Boson);
  REQUIRE_FALSE(factorize_location(state).has_value());
}

TEST_CASE("factorize_location splits plain products directly", "[hilbert]") {
  const auto product = tensor(NParticleState::ket(kPhiH),
                              NParticleState::ket(kPhiT));
  const auto split = factorize_location(product);
  REQUIRE(split.has_value());
  REQUIRE(std::abs(split->internal_part.amplitude({{"phi", ""}, {"phi", ""}}) -
                   Complex{1.0, 0.0}) < 1e-12);
  REQUIRE(std::abs(split->location_part.amplitude({{"h", ""}, {"t", ""}}) -
                   Complex{1.0, 0.0}) < 1e-12);
}

TEST_CASE("factorize_location needs location tags everywhere", "[hilbert]") {
  const auto bare = tensor(NParticleState::ket(BasisLabel{"phi", ""}),
                           NParticleState::ket(kPhiT));
  REQUIRE_THROWS_AS(factorize_location(bare), std::invalid_argument);
  REQUIRE_THROWS_AS(factorize_location(NParticleState::ket(kPhiH)),
                    std::invalid_argument);
}

TEST_CASE("sparse operations match the dense reference", "[hilbert][oracle]") {
  std::mt19937_64 rng(2026);
  const auto basis = make_basis(3, 2);
  for (int round = 0; round < 5; ++round) {
    const auto a = random_state(basis, 1, rng);
    const auto b = random_state(basis, 1, rng);
    const auto two = random_state(basis, 2, rng);
    const auto da = to_dense(basis, a);
    const auto db = to_dense(basis, b);
    const auto dtwo = to_dense(basis, two);

    REQUIRE(max_entry_difference(basis, tensor(a, b), dense_tensor(basis, da, db)) <
            1e-12);
    REQUIRE(std::abs(inner(a, b) - dense_inner(da, db)) < 1e-12);
    REQUIRE(max_entry_difference(basis, exchange(two, 0, 1),
                                 dense_exchange(basis, dtwo, 0, 1)) < 1e-12);
    for (auto stats : {ParticleStatistics::Boson, ParticleStatistics::Fermion}) {
      REQUIRE(max_entry_difference(
                  basis, symmetrize_unnormalized(a, b, stats),
                  dense_symmetrize_unnormalized(basis, da, db, stats)) < 1e-12);
    }
  }
}
