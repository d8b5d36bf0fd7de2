// density.hpp
// One-particle probability densities on uniform 1-D grids: symmetrized vs
// product two-particle states, infinite-well eigenfunctions, disjoint
// support detection and single-well renormalization.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symket/hilbert.hpp"

namespace symket {

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t points = 1001;
};

// Complex samples of a one-particle wavefunction at x0 + k*dx. Immutable;
// all integrals use the trapezoidal rule.
class WaveFunctionGrid {
 public:
  WaveFunctionGrid(double x0, double dx, std::vector<Complex> samples)
      : x0_(x0), dx_(dx), samples_(std::move(samples)) {
    if (!(dx_ > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (samples_.size() < 2) throw std::invalid_argument("grid needs at least two samples");
  }

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t size() const { return samples_.size(); }
  double x(std::size_t k) const { return x0_ + static_cast<double>(k) * dx_; }
  const std::vector<Complex>& samples() const { return samples_; }

  double norm_squared() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      const double weight = (k == 0 || k + 1 == samples_.size()) ? 0.5 : 1.0;
      sum += weight * std::norm(samples_[k]);
    }
    return sum * dx_;
  }

  bool is_normalized(double tol = 1e-8) const {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

  WaveFunctionGrid normalized() const {
    const double n = std::sqrt(norm_squared());
    if (n < kZeroTolerance) {
      throw ZeroNormState("cannot normalize a zero wavefunction");
    }
    std::vector<Complex> scaled = samples_;
    for (auto& value : scaled) value /= n;
    return WaveFunctionGrid(x0_, dx_, std::move(scaled));
  }

 private:
  double x0_;
  double dx_;
  std::vector<Complex> samples_;
};

// Trapezoidal <a|b> on shared geometry.
inline Complex grid_inner(const WaveFunctionGrid& a, const WaveFunctionGrid& b);

inline bool same_geometry(const WaveFunctionGrid& a, const WaveFunctionGrid& b) {
  const double scale = std::max({1.0, std::abs(a.x0()), std::abs(b.x0())});
  return a.size() == b.size() && std::abs(a.x0() - b.x0()) <= 1e-12 * scale &&
         std::abs(a.dx() - b.dx()) <= 1e-12 * a.dx();
}

namespace detail {

inline void require_same_geometry(const WaveFunctionGrid& a,
                                  const WaveFunctionGrid& b) {
  if (!same_geometry(a, b)) {
    throw std::invalid_argument("wavefunction grids have mismatched geometry");
  }
}

inline void require_normalized(const WaveFunctionGrid& grid, const char* name) {
  if (!grid.is_normalized()) {
    throw std::invalid_argument(std::string(name) +
                                " is not normalized on the grid");
  }
}

inline void require_which(int which) {
  if (which != 1 && which != 2) {
    throw std::invalid_argument("particle index must be 1 or 2");
  }
}

}  // namespace detail

inline Complex grid_inner(const WaveFunctionGrid& a, const WaveFunctionGrid& b) {
  detail::require_same_geometry(a, b);
  Complex sum{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double weight = (k == 0 || k + 1 == a.size()) ? 0.5 : 1.0;
    sum += weight * std::conj(a.samples()[k]) * b.samples()[k];
  }
  return sum * a.dx();
}

// Nonnegative density samples on the same grid geometry.
struct DensityProfile {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<double> values;

  double x(std::size_t k) const { return x0 + static_cast<double>(k) * dx; }

  double integral() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double weight = (k == 0 || k + 1 == values.size()) ? 0.5 : 1.0;
      sum += weight * values[k];
    }
    return sum * dx;
  }
};

// Normalized eigenfunction sqrt(2/L) sin(n pi (x-left)/L) of the infinite
// well [left, right], sampled on the grid and zero outside the well.
inline WaveFunctionGrid make_box_eigenstate(unsigned n, double left,
                                            double right,
                                            const GridSpec& geometry) {
  if (n == 0) throw std::invalid_argument("quantum number n must be positive");
  if (geometry.points < 2) throw std::invalid_argument("grid needs at least two points");
  const double length = right - left;
  if (!(length > 0.0) || length < 1e-12) {
    throw std::invalid_argument("degenerate well interval");
  }
  if (left < geometry.x_min - 1e-12 || right > geometry.x_max + 1e-12) {
    throw std::invalid_argument("well extends outside the grid range");
  }
  const double dx =
      (geometry.x_max - geometry.x_min) / static_cast<double>(geometry.points - 1);
  const double amplitude = std::sqrt(2.0 / length);
  std::vector<Complex> samples(geometry.points);
  for (std::size_t k = 0; k < geometry.points; ++k) {
    const double x = geometry.x_min + static_cast<double>(k) * dx;
    if (x >= left && x <= right) {
      samples[k] = amplitude *
                   std::sin(static_cast<double>(n) * std::numbers::pi *
                            (x - left) / length);
    }
  }
  return WaveFunctionGrid(geometry.x_min, dx, std::move(samples));
}

// rho(x) = (|phi(x)|^2 + |psi(x)|^2) / 2, the one-particle density of the
// symmetrized state |phi,psi>. Valid for orthogonal inputs only, where the
// exchange cross terms vanish identically, so the result is the same for
// both particles and both statistics.
inline DensityProfile density_symmetrized(const WaveFunctionGrid& phi,
                                          const WaveFunctionGrid& psi,
                                          ParticleStatistics /*stats*/,
                                          int which) {
  detail::require_same_geometry(phi, psi);
  detail::require_normalized(phi, "phi");
  detail::require_normalized(psi, "psi");
  detail::require_which(which);
  if (std::abs(grid_inner(phi, psi)) >= 1e-6) {
    throw std::invalid_argument(
        "symmetrized density needs orthogonal wavefunctions");
  }
  DensityProfile profile{phi.x0(), phi.dx(), {}};
  profile.values.reserve(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    profile.values.push_back(
        0.5 * (std::norm(phi.samples()[k]) + std::norm(psi.samples()[k])));
  }
  return profile;
}

// Density of the unsymmetrized product |phi>|psi>: particle #1 sees
// |phi|^2, particle #2 sees |psi|^2.
inline DensityProfile density_product(const WaveFunctionGrid& phi,
                                      const WaveFunctionGrid& psi, int which) {
  detail::require_same_geometry(phi, psi);
  detail::require_normalized(phi, "phi");
  detail::require_normalized(psi, "psi");
  detail::require_which(which);
  const auto& source = which == 1 ? phi : psi;
  DensityProfile profile{phi.x0(), phi.dx(), {}};
  profile.values.reserve(phi.size());
  for (std::size_t k = 0; k < source.size(); ++k) {
    profile.values.push_back(std::norm(source.samples()[k]));
  }
  return profile;
}

// True when the supports do not overlap: sum_k min(|phi_k|^2, |psi_k|^2) dx
// stays below the threshold.
inline bool disjoint_support(const WaveFunctionGrid& phi,
                             const WaveFunctionGrid& psi,
                             double threshold = 1e-10) {
  detail::require_same_geometry(phi, psi);
  double overlap = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    overlap += std::min(std::norm(phi.samples()[k]), std::norm(psi.samples()[k]));
  }
  return overlap * phi.dx() < threshold;
}

// Half-open sample index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Restricts the symmetrized density to one well and renormalizes within it.
// With disjoint supports this recovers the product-state density of the
// wavefunction living there; values outside the region are zero.
inline DensityProfile restricted_density(const WaveFunctionGrid& phi,
                                         const WaveFunctionGrid& psi,
                                         ParticleStatistics stats,
                                         IndexRange region) {
  detail::require_same_geometry(phi, psi);
  if (region.begin >= region.end || region.end > phi.size()) {
    throw std::invalid_argument("invalid grid index range");
  }
  if (!disjoint_support(phi, psi)) {
    throw std::invalid_argument(
        "restricted density needs disjoint wavefunction supports");
  }
  const auto region_mass = [&](const WaveFunctionGrid& f) {
    double inside = 0.0, outside = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double w = std::norm(f.samples()[k]) * f.dx();
      if (k >= region.begin && k < region.end) {
        inside += w;
      } else {
        outside += w;
      }
    }
    return std::pair<double, double>{inside, outside};
  };
  const auto [phi_in, phi_out] = region_mass(phi);
  const auto [psi_in, psi_out] = region_mass(psi);
  const bool phi_contained = phi_out < 1e-10 && phi_in > 1e-10;
  const bool psi_contained = psi_out < 1e-10 && psi_in > 1e-10;
  const bool phi_absent = phi_in < 1e-10;
  const bool psi_absent = psi_in < 1e-10;
  if (!((phi_contained && psi_absent) || (psi_contained && phi_absent))) {
    throw std::invalid_argument(
        "region must contain the support of exactly one wavefunction");
  }

  DensityProfile profile = density_symmetrized(phi, psi, stats, 1);
  for (std::size_t k = 0; k < profile.values.size(); ++k) {
    if (k < region.begin || k >= region.end) profile.values[k] = 0.0;
  }
  double region_integral = 0.0;
  for (std::size_t k = region.begin; k < region.end; ++k) {
    const double weight = (k == region.begin || k + 1 == region.end) ? 0.5 : 1.0;
    region_integral += weight * profile.values[k];
  }
  region_integral *= profile.dx;
  if (region_integral < kZeroTolerance) {
    throw ZeroNormState("restricted density has vanishing weight in the region");
  }
  for (std::size_t k = region.begin; k < region.end; ++k) {
    profile.values[k] /= region_integral;
  }
  return profile;
}

// Fixed 15-significant-digit decimal rendering, used everywhere numbers
// reach an output file so reruns are byte-identical.
inline std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.15g", value);
  return buffer;
}

// CSV with a geometry comment header:
//   # x0=<...> dx=<...> points=<...>
//   x,rho
inline void write_csv(std::ostream& out, const DensityProfile& profile) {
  out << "# x0=" << format_double(profile.x0) << " dx="
      << format_double(profile.dx) << " points=" << profile.values.size()
      << "\n";
  out << "x,rho\n";
  for (std::size_t k = 0; k < profile.values.size(); ++k) {
    out << format_double(profile.x(k)) << "," << format_double(profile.values[k])
        << "\n";
  }
}

}  // namespace symket
