// cloning.hpp
// The cloning map T on symmetrized two-particle states, its linear
// extension, the ideal clone of a superposition, and the fidelity gap
// between the two that rules out cloning of superpositions.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symket/hilbert.hpp"

namespace symket {

// Raised when apply_clone_map receives a state outside the span of the
// declared inputs.
class OutsideDeclaredSpan : public std::invalid_argument {
 public:
  explicit OutsideDeclaredSpan(const std::string& what)
      : std::invalid_argument(what) {}
};

struct CloneAction {
  std::string internal_label;
  NParticleState input;   // |x_h, 0_t>, symmetrized
  NParticleState output;  // |x_h, x_t>, symmetrized
};

// The linear operator T, represented extensionally by its action on a
// family of mutually orthogonal symmetrized inputs: T|x_h, 0_t> = |x_h, x_t>
// for each declared internal label x. The blank target state is |0_t>.
class CloneMap {
 public:
  CloneMap(std::vector<std::string> internal_labels, ParticleStatistics stats,
           std::string blank = "0", std::string here = "h",
           std::string there = "t")
      : statistics_(stats) {
    if (internal_labels.empty()) {
      throw std::invalid_argument("clone map needs at least one declared label");
    }
    for (const auto& label : internal_labels) {
      if (label.empty() || label == blank) {
        throw std::invalid_argument(
            "declared labels must be nonempty and distinct from the blank state");
      }
      for (const auto& action : actions_) {
        if (action.internal_label == label) {
          throw std::invalid_argument("duplicate declared label: " + label);
        }
      }
      const auto x_here = NParticleState::ket(BasisLabel{label, here});
      const auto x_there = NParticleState::ket(BasisLabel{label, there});
      const auto blank_there = NParticleState::ket(BasisLabel{blank, there});
      actions_.push_back(CloneAction{
          label,
          symmetrize(x_here, blank_there, stats),
          symmetrize(x_here, x_there, stats),
      });
    }
  }

  const std::vector<CloneAction>& actions() const { return actions_; }
  ParticleStatistics statistics() const { return statistics_; }

 private:
  ParticleStatistics statistics_;
  std::vector<CloneAction> actions_;
};

// Linear extension of T: decomposes the state over the orthonormal declared
// inputs and maps each coefficient onto the corresponding declared output.
// T(a|psi_h,0_t> + b|phi_h,0_t>) = a|psi_h,psi_t> + b|phi_h,phi_t>.
inline NParticleState apply_clone_map(const CloneMap& map,
                                      const NParticleState& state) {
  if (state.particle_count() != 2) {
    throw std::invalid_argument("clone map acts on two-particle states");
  }
  std::vector<Complex> coefficients;
  coefficients.reserve(map.actions().size());
  NParticleState residual = state;
  for (const auto& action : map.actions()) {
    const Complex c = inner(action.input, state);
    coefficients.push_back(c);
    residual = residual - c * action.input;
  }
  if (residual.norm() > 1e-10) {
    throw OutsideDeclaredSpan("state lies outside the span of declared clone inputs");
  }
  NParticleState result(2);
  for (std::size_t k = 0; k < map.actions().size(); ++k) {
    result = result + coefficients[k] * map.actions()[k].output;
  }
  return result;
}

namespace detail {

inline void require_unit_pair(const Complex& a, const Complex& b) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) {
    throw std::invalid_argument("amplitudes must satisfy |a|^2 + |b|^2 = 1");
  }
}

}  // namespace detail

// The state a perfect cloner would have to produce from the superposition
// a|psi> + b|phi| held here and a blank there:
//   |a psi_h + b phi_h, a psi_t + b phi_t>
//     = a^2 |psi_h,psi_t> + ab (|psi_h,phi_t> + |phi_h,psi_t>) + b^2 |phi_h,phi_t>.
// Unit norm whenever |a|^2 + |b|^2 = 1.
inline NParticleState ideal_clone(const Complex& a, const Complex& b,
                                  const std::string& psi,
                                  const std::string& phi,
                                  ParticleStatistics stats) {
  detail::require_unit_pair(a, b);
  if (psi == phi || psi.empty() || phi.empty()) {
    throw std::invalid_argument("ideal_clone needs two distinct internal labels");
  }
  const auto here = a * NParticleState::ket(BasisLabel{psi, "h"}) +
                    b * NParticleState::ket(BasisLabel{phi, "h"});
  const auto there = a * NParticleState::ket(BasisLabel{psi, "t"}) +
                     b * NParticleState::ket(BasisLabel{phi, "t"});
  return symmetrize_unnormalized(here, there, stats);
}

struct CloneVerdict {
  NParticleState ideal_state;
  NParticleState linear_state;
  double fidelity = 0.0;  // |<ideal|linear>|, both states normalized
  bool is_clone = false;  // fidelity >= 1 - 1e-12
};

// Compares the ideal clone of a|psi> + b|phi> with what the linear operator
// T actually produces. The two agree only when a or b vanishes; for real
// nonnegative amplitudes the overlap is a^3 + b^3.
inline CloneVerdict no_cloning_gap(const Complex& a, const Complex& b,
                                   const std::string& psi,
                                   const std::string& phi,
                                   ParticleStatistics stats) {
  detail::require_unit_pair(a, b);
  const CloneMap map({psi, phi}, stats);
  const NParticleState superposed =
      a * map.actions()[0].input + b * map.actions()[1].input;
  CloneVerdict verdict{
      ideal_clone(a, b, psi, phi, stats),
      apply_clone_map(map, superposed),
  };
  const double norms = verdict.ideal_state.norm() * verdict.linear_state.norm();
  verdict.fidelity =
      std::abs(inner(verdict.ideal_state, verdict.linear_state)) / norms;
  verdict.is_clone = verdict.fidelity >= 1.0 - 1e-12;
  return verdict;
}

struct WrongCloneDemo {
  NParticleState wrong;  // (|phi_h>|phi_t> +/- |0_t>|0_h>) / sqrt(2)
  NParticleState ideal;  // |phi_h, phi_t>, symmetrized
  double fidelity = 0.0;
};

// What goes wrong if T is (incorrectly) applied per direct-product term of
// the symmetrized input instead of to the symmetrized state as a whole: the
// second term turns into |0_t>|0_h>, and the result overlaps the true clone
// with fidelity 1/2 only.
inline WrongCloneDemo wrong_clone_demo(const std::string& phi,
                                       ParticleStatistics stats) {
  if (phi.empty() || phi == "0") {
    throw std::invalid_argument(
        "wrong_clone_demo needs an internal label distinct from the blank \"0\"");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto first = NParticleState::ket(LabelTuple{{phi, "h"}, {phi, "t"}});
  const auto second = NParticleState::ket(LabelTuple{{"0", "t"}, {"0", "h"}});
  WrongCloneDemo demo{
      Complex{inv_sqrt2, 0.0} *
          (first + Complex{exchange_sign(stats), 0.0} * second),
      symmetrize(NParticleState::ket(BasisLabel{phi, "h"}),
                 NParticleState::ket(BasisLabel{phi, "t"}), stats),
  };
  demo.fidelity = std::abs(inner(demo.ideal, demo.wrong));
  return demo;
}

}  // namespace symket
