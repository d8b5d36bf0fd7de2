// entanglement.hpp
// Bipartite analysis of two-particle states: Schmidt decomposition across a
// chosen split, the naive and exchange-correct photon-pair states, and
// projective polarization measurements with Born-rule collapse.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "symket/hilbert.hpp"

namespace symket {

// Which factorization of the two-particle basis defines subsystems A and B:
// either the two tuple slots, or the internal labels vs the location labels.
enum class BipartiteSplit { ParticleSlots, InternalVsLocation };

struct SchmidtResult {
  std::vector<double> coefficients;          // descending, nonnegative
  std::vector<NParticleState> left_vectors;  // orthonormal subsystem-A states
  std::vector<NParticleState> right_vectors; // orthonormal subsystem-B states
  std::size_t rank = 0;                      // coefficients above 1e-10
};

namespace detail {

struct SplitMatrix {
  std::vector<LabelTuple> row_keys;
  std::vector<LabelTuple> col_keys;
  Eigen::MatrixXcd entries;
  std::size_t subsystem_particles = 1;  // particle count of each factor state
};

inline SplitMatrix particle_slot_matrix(const NParticleState& state) {
  std::map<LabelTuple, std::size_t> rows, cols;
  for (const auto& [tuple, amp] : state.amplitudes()) {
    rows.emplace(LabelTuple{tuple[0]}, 0);
    cols.emplace(LabelTuple{tuple[1]}, 0);
  }
  SplitMatrix split;
  split.subsystem_particles = 1;
  for (auto& [key, index] : rows) {
    index = split.row_keys.size();
    split.row_keys.push_back(key);
  }
  for (auto& [key, index] : cols) {
    index = split.col_keys.size();
    split.col_keys.push_back(key);
  }
  split.entries = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(split.row_keys.size()),
      static_cast<Eigen::Index>(split.col_keys.size()));
  for (const auto& [tuple, amp] : state.amplitudes()) {
    split.entries(static_cast<Eigen::Index>(rows[LabelTuple{tuple[0]}]),
                  static_cast<Eigen::Index>(cols[LabelTuple{tuple[1]}])) = amp;
  }
  return split;
}

inline SplitMatrix internal_location_split_matrix(const NParticleState& state) {
  const auto matrix = internal_location_matrix(state);
  SplitMatrix split;
  split.subsystem_particles = 2;
  split.row_keys = matrix.row_keys;
  split.col_keys = matrix.col_keys;
  split.entries = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(matrix.row_keys.size()),
      static_cast<Eigen::Index>(matrix.col_keys.size()));
  for (std::size_t r = 0; r < matrix.row_keys.size(); ++r) {
    for (std::size_t c = 0; c < matrix.col_keys.size(); ++c) {
      split.entries(static_cast<Eigen::Index>(r),
                    static_cast<Eigen::Index>(c)) = matrix.entries[r][c];
    }
  }
  return split;
}

}  // namespace detail

// Singular-value decomposition of the coefficient matrix induced by the
// split. Coefficients are the singular values in descending order; the
// reconstruction sum_i c_i |l_i> (x) |r_i> reproduces the input. Each left
// vector is phase-fixed so its first sizable component is real positive,
// with the compensating phase absorbed into the right vector.
inline SchmidtResult schmidt(const NParticleState& state, BipartiteSplit split) {
  if (state.particle_count() != 2) {
    throw std::invalid_argument("schmidt decomposition needs a two-particle state");
  }
  if (state.norm() < kZeroTolerance) {
    throw ZeroNormState("schmidt decomposition of a zero-norm state");
  }
  const auto matrix = split == BipartiteSplit::ParticleSlots
                          ? detail::particle_slot_matrix(state)
                          : detail::internal_location_split_matrix(state);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      matrix.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXcd u = svd.matrixU();
  Eigen::MatrixXcd v = svd.matrixV();
  const auto& sigma = svd.singularValues();

  SchmidtResult result;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double coefficient = sigma(i);
    if (coefficient < 1e-14) break;  // numerically zero tail

    // Rotate column phases without changing the product U S V^dagger.
    Eigen::Index anchor = 0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      if (std::abs(u(r, i)) > 1e-12) {
        anchor = r;
        break;
      }
    }
    const Complex phase = u(anchor, i) / std::abs(u(anchor, i));
    u.col(i) *= std::conj(phase);
    v.col(i) *= std::conj(phase);

    NParticleState::AmplitudeMap left_amps, right_amps;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      left_amps.emplace(matrix.row_keys[static_cast<std::size_t>(r)], u(r, i));
    }
    for (Eigen::Index c = 0; c < v.rows(); ++c) {
      right_amps.emplace(matrix.col_keys[static_cast<std::size_t>(c)],
                         std::conj(v(c, i)));
    }
    result.coefficients.push_back(coefficient);
    result.left_vectors.push_back(NParticleState::from_amplitudes(
        matrix.subsystem_particles, std::move(left_amps)));
    result.right_vectors.push_back(NParticleState::from_amplitudes(
        matrix.subsystem_particles, std::move(right_amps)));
    if (coefficient > 1e-10) ++result.rank;
  }
  return result;
}

// The two-photon polarization state as commonly written: a plain direct
// product over momentum slots, (|H>_1 |H>_2 + |V>_1 |V>_2) / sqrt(2).
// Not an exchange eigenstate once the momentum labels swap along.
inline NParticleState photon_pair_naive() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return Complex{inv_sqrt2, 0.0} *
         (NParticleState::ket(LabelTuple{{"H", "1"}, {"H", "2"}}) +
          NParticleState::ket(LabelTuple{{"V", "1"}, {"V", "2"}}));
}

// The same photon pair with the exchange symmetry made explicit:
// (|H_1,H_2> + |V_1,V_2>) / sqrt(2) with each term boson-symmetrized,
// a +1 eigenstate of particle exchange.
inline NParticleState photon_pair_symmetrized() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto hh =
      symmetrize(NParticleState::ket(BasisLabel{"H", "1"}),
                 NParticleState::ket(BasisLabel{"H", "2"}),
                 ParticleStatistics::Boson);
  const auto vv =
      symmetrize(NParticleState::ket(BasisLabel{"V", "1"}),
                 NParticleState::ket(BasisLabel{"V", "2"}),
                 ParticleStatistics::Boson);
  return Complex{inv_sqrt2, 0.0} * (hh + vv);
}

struct MeasurementRecord {
  std::pair<std::string, std::string> projector_label;  // (location, outcome)
  double probability = 0.0;
  NParticleState post_state;  // canonical, normalized when probability > 0

  MeasurementRecord() : post_state(1) {}
};

struct OutcomeProbability {
  std::string outcome;
  double probability = 0.0;
  NParticleState post_state;  // canonical, normalized when probability > 0

  OutcomeProbability() : post_state(1) {}
};

// Full Born-rule table for measuring the internal state of the particle
// carrying a given location tag. Outcomes not listed leave their weight in
// `deficit`, reported explicitly rather than renormalized away.
struct MeasurementDistribution {
  std::string location_tag;
  std::vector<OutcomeProbability> outcomes;
  double deficit = 0.0;
};

// The projection is keyed on the location/momentum label, not on the tuple
// slot: in a symmetrized state the particle with momentum "1" appears in
// both slots. Every support tuple must carry the tag on exactly one slot.
inline MeasurementDistribution measurement_probabilities(
    const NParticleState& state, const std::string& location_tag,
    const std::vector<std::string>& observable_outcomes) {
  if (!state.is_normalized(1e-9)) {
    throw std::invalid_argument("measurement needs a normalized state");
  }
  // internal outcome at the tagged slot -> projected amplitudes
  std::map<std::string, NParticleState::AmplitudeMap> projections;
  for (const auto& [tuple, amp] : state.amplitudes()) {
    std::size_t hits = 0, slot = 0;
    for (std::size_t k = 0; k < tuple.size(); ++k) {
      if (tuple[k].location == location_tag) {
        ++hits;
        slot = k;
      }
    }
    if (hits == 0) {
      throw std::invalid_argument("location tag \"" + location_tag +
                                  "\" absent from part of the state");
    }
    if (hits > 1) {
      throw std::invalid_argument("location tag \"" + location_tag +
                                  "\" is carried by more than one particle");
    }
    projections[tuple[slot].internal].emplace(tuple, amp);
  }
  if (projections.empty()) {
    throw std::invalid_argument("location tag \"" + location_tag +
                                "\" absent from the state");
  }

  MeasurementDistribution distribution;
  distribution.location_tag = location_tag;
  double covered = 0.0;
  for (const auto& outcome : observable_outcomes) {
    OutcomeProbability entry;
    entry.outcome = outcome;
    entry.post_state = NParticleState(state.particle_count());
    auto it = projections.find(outcome);
    if (it != projections.end()) {
      auto projected = NParticleState::from_amplitudes(state.particle_count(),
                                                       it->second);
      entry.probability = projected.norm_squared();
      if (entry.probability > kZeroTolerance) {
        entry.post_state = projected.normalized().canonical();
      }
    }
    covered += entry.probability;
    distribution.outcomes.push_back(std::move(entry));
  }
  double total = 0.0;
  for (const auto& [outcome, amps] : projections) {
    for (const auto& [tuple, amp] : amps) total += std::norm(amp);
  }
  distribution.deficit = std::max(0.0, total - covered);
  return distribution;
}

// Uniform double in [0, 1) from the top 53 bits of the generator, so the
// sampled sequence is identical on every platform for a fixed seed.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Samples one outcome with the Born probabilities and collapses the state.
// The generator is owned by the caller; a fixed seed yields an identical
// measurement sequence.
inline MeasurementRecord measure(const NParticleState& state,
                                 const std::string& location_tag,
                                 const std::vector<std::string>& observable_outcomes,
                                 std::mt19937_64& rng) {
  const auto distribution =
      measurement_probabilities(state, location_tag, observable_outcomes);
  if (distribution.deficit > 1e-9) {
    throw std::invalid_argument(
        "observable outcomes do not span the internal space at \"" +
        location_tag + "\"");
  }
  const double draw = uniform_unit(rng);
  double cumulative = 0.0;
  const OutcomeProbability* chosen = nullptr;
  for (const auto& entry : distribution.outcomes) {
    cumulative += entry.probability;
    if (draw < cumulative) {
      chosen = &entry;
      break;
    }
  }
  if (chosen == nullptr) {
    // Rounding pushed the draw past the last boundary; take the last
    // outcome with nonzero probability.
    for (auto it = distribution.outcomes.rbegin();
         it != distribution.outcomes.rend(); ++it) {
      if (it->probability > kZeroTolerance) {
        chosen = &*it;
        break;
      }
    }
  }
  if (chosen == nullptr) {
    throw std::invalid_argument("all requested outcomes have zero probability");
  }
  MeasurementRecord record;
  record.projector_label = {location_tag, chosen->outcome};
  record.probability = chosen->probability;
  record.post_state = chosen->post_state;
  return record;
}

inline MeasurementRecord measure(const NParticleState& state,
                                 const std::string& location_tag,
                                 const std::vector<std::string>& observable_outcomes,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return measure(state, location_tag, observable_outcomes, rng);
}

}  // namespace symket
