// hilbert.hpp
// Core ket algebra over a finite labeled orthonormal basis: tensor products,
// inner products, exchange operators, boson/fermion symmetrization and the
// internal-vs-location factorization of two-particle states.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symket {

using Complex = std::complex<double>;

// Amplitudes below this modulus are treated as zero and pruned from the
// sparse representation.
inline constexpr double kZeroTolerance = 1e-12;

enum class ParticleStatistics { Boson, Fermion };

// Sign picked up under pairwise particle exchange.
inline double exchange_sign(ParticleStatistics stats) {
  return stats == ParticleStatistics::Boson ? 1.0 : -1.0;
}

inline const char* to_string(ParticleStatistics stats) {
  return stats == ParticleStatistics::Boson ? "boson" : "fermion";
}

// Tag of one orthonormal basis vector: an internal label ("phi", "0", "H")
// plus an optional location/momentum label ("h", "t", "1", "2"). Distinct
// tags denote orthonormal kets; orthogonality of "here" vs "there" states
// is structural, by label inequality.
struct BasisLabel {
  std::string internal;
  std::string location;  // empty means no location tag

  auto operator<=>(const BasisLabel&) const = default;

  // Rendered as "phi_h", or just "phi" when there is no location.
  std::string str() const {
    return location.empty() ? internal : internal + "_" + location;
  }
};

using LabelTuple = std::vector<BasisLabel>;

// Raised when an operation produces (or would have to normalize) a state of
// vanishing norm, e.g. fermionic symmetrization of two identical states.
class ZeroNormState : public std::runtime_error {
 public:
  explicit ZeroNormState(const std::string& what) : std::runtime_error(what) {}
};

// Finite sparse ket of a fixed particle count: a map from ordered tuples of
// basis labels to complex amplitudes. Tuple slot k is Particle #(k+1).
// Values are immutable after construction; all operations are pure.
class NParticleState {
 public:
  using AmplitudeMap = std::map<LabelTuple, Complex>;

  // Zero vector with the given particle count.
  explicit NParticleState(std::size_t particle_count)
      : particle_count_(particle_count) {
    if (particle_count == 0) {
      throw std::invalid_argument("particle count must be positive");
    }
  }

  // Unit basis ket |label>.
  static NParticleState ket(const BasisLabel& label) {
    return ket(LabelTuple{label});
  }

  // Unit product-basis ket |l1, l2, ...> (tuple, not symmetrized).
  static NParticleState ket(LabelTuple tuple) {
    NParticleState state(tuple.size());
    validate_tuple(tuple, tuple.size());
    state.amplitudes_.emplace(std::move(tuple), Complex{1.0, 0.0});
    return state;
  }

  // General constructor; validates tuple lengths and labels, prunes zeros.
  static NParticleState from_amplitudes(std::size_t particle_count,
                                        AmplitudeMap amplitudes) {
    NParticleState state(particle_count);
    for (const auto& [tuple, amp] : amplitudes) {
      validate_tuple(tuple, particle_count);
      if (std::abs(amp) >= kZeroTolerance) {
        state.amplitudes_.emplace(tuple, amp);
      }
    }
    return state;
  }

  std::size_t particle_count() const { return particle_count_; }
  const AmplitudeMap& amplitudes() const { return amplitudes_; }
  bool is_zero() const { return amplitudes_.empty(); }

  Complex amplitude(const LabelTuple& tuple) const {
    auto it = amplitudes_.find(tuple);
    return it == amplitudes_.end() ? Complex{0.0, 0.0} : it->second;
  }

  double norm_squared() const {
    double sum = 0.0;
    for (const auto& [tuple, amp] : amplitudes_) sum += std::norm(amp);
    return sum;
  }

  double norm() const { return std::sqrt(norm_squared()); }

  bool is_normalized(double tol = 1e-12) const {
    return std::abs(norm() - 1.0) <= tol;
  }

  NParticleState normalized() const {
    const double n = norm();
    if (n < kZeroTolerance) {
      throw ZeroNormState("cannot normalize a state of vanishing norm");
    }
    return (1.0 / n) * (*this);
  }

  // Canonical form: zeros pruned (guaranteed at construction) and the global
  // phase fixed so the first nonzero amplitude, in lexicographic tuple
  // order, is real positive. State equality is compared on canonical forms.
  NParticleState canonical() const {
    if (amplitudes_.empty()) return *this;
    const Complex lead = amplitudes_.begin()->second;
    const Complex phase = lead / std::abs(lead);
    return std::conj(phase) * (*this);
  }

  friend NParticleState operator*(const Complex& scale,
                                  const NParticleState& state) {
    AmplitudeMap scaled;
    for (const auto& [tuple, amp] : state.amplitudes_) {
      scaled.emplace(tuple, scale * amp);
    }
    return from_amplitudes(state.particle_count_, std::move(scaled));
  }

  friend NParticleState operator+(const NParticleState& a,
                                  const NParticleState& b) {
    require_same_count(a, b);
    AmplitudeMap sum = a.amplitudes_;
    for (const auto& [tuple, amp] : b.amplitudes_) sum[tuple] += amp;
    return from_amplitudes(a.particle_count_, std::move(sum));
  }

  friend NParticleState operator-(const NParticleState& a,
                                  const NParticleState& b) {
    return a + Complex{-1.0, 0.0} * b;
  }

 private:
  static void validate_tuple(const LabelTuple& tuple, std::size_t count) {
    if (tuple.size() != count) {
      throw std::invalid_argument("label tuple length differs from particle count");
    }
    for (const auto& label : tuple) {
      if (label.internal.empty()) {
        throw std::invalid_argument("basis label with empty internal field");
      }
    }
  }

  static void require_same_count(const NParticleState& a,
                                 const NParticleState& b) {
    if (a.particle_count_ != b.particle_count_) {
      throw std::invalid_argument("particle count mismatch");
    }
  }

  std::size_t particle_count_;
  AmplitudeMap amplitudes_;

  friend NParticleState tensor(const NParticleState&, const NParticleState&);
  friend Complex inner(const NParticleState&, const NParticleState&);
  friend NParticleState exchange(const NParticleState&, std::size_t, std::size_t);
};

// Direct product a (x) b; bilinear in both arguments.
inline NParticleState tensor(const NParticleState& a, const NParticleState& b) {
  NParticleState result(a.particle_count() + b.particle_count());
  for (const auto& [ta, za] : a.amplitudes()) {
    for (const auto& [tb, zb] : b.amplitudes()) {
      const Complex amp = za * zb;
      if (std::abs(amp) < kZeroTolerance) continue;
      LabelTuple joined = ta;
      joined.insert(joined.end(), tb.begin(), tb.end());
      result.amplitudes_.emplace(std::move(joined), amp);
    }
  }
  return result;
}

// <a|b>, conjugate-linear in a and linear in b.
inline Complex inner(const NParticleState& a, const NParticleState& b) {
  if (a.particle_count() != b.particle_count()) {
    throw std::invalid_argument("inner product needs equal particle counts");
  }
  Complex sum{0.0, 0.0};
  const auto& small = a.amplitudes().size() <= b.amplitudes().size()
                          ? a.amplitudes()
                          : b.amplitudes();
  const bool small_is_a = &small == &a.amplitudes();
  const auto& other = small_is_a ? b.amplitudes() : a.amplitudes();
  for (const auto& [tuple, amp] : small) {
    auto it = other.find(tuple);
    if (it == other.end()) continue;
    sum += small_is_a ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return sum;
}

// Swaps particles i and j in every tuple; an involution.
inline NParticleState exchange(const NParticleState& state, std::size_t i,
                               std::size_t j) {
  if (i >= state.particle_count() || j >= state.particle_count()) {
    throw std::out_of_range("exchange index out of range");
  }
  if (i == j) {
    throw std::invalid_argument("exchange needs two distinct particle indices");
  }
  NParticleState result(state.particle_count());
  for (const auto& [tuple, amp] : state.amplitudes()) {
    LabelTuple swapped = tuple;
    std::swap(swapped[i], swapped[j]);
    result.amplitudes_.emplace(std::move(swapped), amp);
  }
  return result;
}

// L2 distance between canonical forms. Since canonicalization fixes the
// global phase, two equal rays have distance ~0.
inline double distance(const NParticleState& a, const NParticleState& b) {
  const NParticleState diff = a.canonical() - b.canonical();
  return diff.norm();
}

inline bool approx_equal(const NParticleState& a, const NParticleState& b,
                         double tol = 1e-12) {
  return a.particle_count() == b.particle_count() && distance(a, b) <= tol;
}

// The raw symmetrizer (a (x) b +/- b (x) a) / sqrt(2), with no
// renormalization. Exactly bilinear in both arguments.
inline NParticleState symmetrize_unnormalized(const NParticleState& a,
                                              const NParticleState& b,
                                              ParticleStatistics stats) {
  if (a.particle_count() != 1 || b.particle_count() != 1) {
    throw std::invalid_argument("symmetrize takes one-particle states");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return Complex{inv_sqrt2, 0.0} *
         (tensor(a, b) + Complex{exchange_sign(stats), 0.0} * tensor(b, a));
}

// Exchange-correct two-particle state |a,b> = (|a>|b> +/- |b>|a>)/sqrt(2),
// renormalized so the output is a unit vector even for non-orthogonal
// inputs. For identical boson inputs this reduces to |a>|a> with amplitude
// one; for identical fermion inputs the result vanishes and ZeroNormState
// is raised (Pauli exclusion).
inline NParticleState symmetrize(const NParticleState& a,
                                 const NParticleState& b,
                                 ParticleStatistics stats) {
  if (!a.is_normalized(1e-9) || !b.is_normalized(1e-9)) {
    throw std::invalid_argument("symmetrize needs normalized inputs");
  }
  const NParticleState raw = symmetrize_unnormalized(a, b, stats);
  const double n = raw.norm();
  if (n < kZeroTolerance) {
    throw ZeroNormState(
        "antisymmetrized state vanishes: two fermions cannot occupy the same state");
  }
  return (1.0 / n) * raw;
}

// Result of splitting a two-particle state into an internal product factor
// and a location factor. The location factor reuses BasisLabel with the
// location tag stored in the internal field, making it a plain state over
// location kets |h>, |t>.
struct LocationFactorization {
  NParticleState internal_part;  // two-particle state of location-free labels
  NParticleState location_part;  // two-particle state of location kets
};

namespace detail {

// Coefficient matrix of a two-particle state across the internal/location
// index split: rows are internal label pairs, columns location label pairs.
struct InternalLocationMatrix {
  std::vector<LabelTuple> row_keys;  // internal-only tuples
  std::vector<LabelTuple> col_keys;  // location-as-internal tuples
  std::vector<std::vector<Complex>> entries;
};

inline InternalLocationMatrix internal_location_matrix(
    const NParticleState& state) {
  if (state.particle_count() != 2) {
    throw std::invalid_argument("internal/location split needs a two-particle state");
  }
  std::map<LabelTuple, std::size_t> rows, cols;
  for (const auto& [tuple, amp] : state.amplitudes()) {
    LabelTuple internal_key, location_key;
    for (const auto& label : tuple) {
      if (label.location.empty()) {
        throw std::invalid_argument("basis label is missing a location tag");
      }
      internal_key.push_back(BasisLabel{label.internal, ""});
      location_key.push_back(BasisLabel{label.location, ""});
    }
    rows.emplace(std::move(internal_key), 0);
    cols.emplace(std::move(location_key), 0);
  }
  InternalLocationMatrix result;
  for (auto& [key, index] : rows) {
    index = result.row_keys.size();
    result.row_keys.push_back(key);
  }
  for (auto& [key, index] : cols) {
    index = result.col_keys.size();
    result.col_keys.push_back(key);
  }
  result.entries.assign(result.row_keys.size(),
                        std::vector<Complex>(result.col_keys.size()));
  for (const auto& [tuple, amp] : state.amplitudes()) {
    LabelTuple internal_key, location_key;
    for (const auto& label : tuple) {
      internal_key.push_back(BasisLabel{label.internal, ""});
      location_key.push_back(BasisLabel{label.location, ""});
    }
    result.entries[rows[internal_key]][cols[location_key]] = amp;
  }
  return result;
}

}  // namespace detail

// Merges an internal factor and a location factor back into one state:
// slot k of the result carries the internal label of the first factor and,
// as location, the internal label of the second factor.
inline NParticleState recombine_location(const NParticleState& internal_part,
                                         const NParticleState& location_part) {
  if (internal_part.particle_count() != location_part.particle_count()) {
    throw std::invalid_argument("factor particle counts differ");
  }
  NParticleState::AmplitudeMap merged;
  for (const auto& [int_tuple, za] : internal_part.amplitudes()) {
    for (const auto& [loc_tuple, zb] : location_part.amplitudes()) {
      LabelTuple tuple;
      tuple.reserve(int_tuple.size());
      for (std::size_t k = 0; k < int_tuple.size(); ++k) {
        if (!int_tuple[k].location.empty() || !loc_tuple[k].location.empty()) {
          throw std::invalid_argument("recombine expects location-free factors");
        }
        tuple.push_back(BasisLabel{int_tuple[k].internal, loc_tuple[k].internal});
      }
      merged[std::move(tuple)] += za * zb;
    }
  }
  return NParticleState::from_amplitudes(internal_part.particle_count(),
                                         std::move(merged));
}

// Splits a two-particle state into (internal product) x (location factor)
// when the coefficient matrix across the internal/location index split has
// Schmidt rank one; returns nullopt otherwise. Both factors come back
// normalized with canonical phase, so their recombination reproduces the
// canonicalized input.
inline std::optional<LocationFactorization> factorize_location(
    const NParticleState& state) {
  const auto matrix = detail::internal_location_matrix(state);
  if (matrix.row_keys.empty()) return std::nullopt;  // zero state

  // Pivot-based rank-one factorization: M = u v / M[p][q] exactly when the
  // Schmidt rank is one.
  std::size_t pivot_row = 0, pivot_col = 0;
  double best = 0.0;
  double frob_sq = 0.0;
  for (std::size_t r = 0; r < matrix.row_keys.size(); ++r) {
    for (std::size_t c = 0; c < matrix.col_keys.size(); ++c) {
      const double mag = std::abs(matrix.entries[r][c]);
      frob_sq += mag * mag;
      if (mag > best) {
        best = mag;
        pivot_row = r;
        pivot_col = c;
      }
    }
  }
  const Complex pivot = matrix.entries[pivot_row][pivot_col];
  double residual_sq = 0.0;
  for (std::size_t r = 0; r < matrix.row_keys.size(); ++r) {
    for (std::size_t c = 0; c < matrix.col_keys.size(); ++c) {
      const Complex predicted =
          matrix.entries[r][pivot_col] * matrix.entries[pivot_row][c] / pivot;
      residual_sq += std::norm(matrix.entries[r][c] - predicted);
    }
  }
  if (std::sqrt(residual_sq) > 1e-10 * std::sqrt(frob_sq)) {
    return std::nullopt;
  }

  NParticleState::AmplitudeMap internal_amps, location_amps;
  for (std::size_t r = 0; r < matrix.row_keys.size(); ++r) {
    internal_amps.emplace(matrix.row_keys[r], matrix.entries[r][pivot_col]);
  }
  for (std::size_t c = 0; c < matrix.col_keys.size(); ++c) {
    location_amps.emplace(matrix.col_keys[c],
                          matrix.entries[pivot_row][c] / pivot);
  }
  auto internal_part =
      NParticleState::from_amplitudes(2, std::move(internal_amps));
  auto location_part =
      NParticleState::from_amplitudes(2, std::move(location_amps));
  return LocationFactorization{
      internal_part.normalized().canonical(),
      location_part.normalized().canonical(),
  };
}

}  // namespace symket
