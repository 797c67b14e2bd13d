// Copyright 2026 The cataccess developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cataccess/core.hpp"
#include "cataccess/errors.hpp"

// The ind-completion layer: ω-chains of compact objects stand in for their
// (possibly non-compact) colimits. Everything here is generic over the
// category trait; Rel and FdHilb both plug in.

namespace cataccess {

/// A lazily generated ω-chain of compact objects with connecting
/// M-morphisms. Generators must be pure: level n always yields the same
/// data.
template <class Cat>
class ChainDiagram {
 public:
  using Object = typename Cat::Object;
  using Morphism = typename Cat::Morphism;
  using ObjectFn = std::function<Object(std::size_t)>;
  using StepFn = std::function<Morphism(std::size_t)>;

  ChainDiagram(ObjectFn object, StepFn step, std::optional<std::size_t> stabilised = std::nullopt)
      : object_(std::move(object)), step_(std::move(step)), stabilised_(stabilised) {}

  static ChainDiagram constant(Object x) {
    return ChainDiagram([x](std::size_t) { return x; },
                        [x](std::size_t) { return Cat::id(x); }, 0);
  }

  /// A finite list of levels, continued by identity steps on the last
  /// object (so the chain is stabilised at the last provided level).
  static ChainDiagram from_levels(std::vector<Object> objects, std::vector<Morphism> steps,
                                  std::optional<std::size_t> stabilised = std::nullopt) {
    if (objects.empty()) throw value_error("ChainDiagram: need at least one level");
    if (steps.size() + 1 != objects.size())
      throw value_error("ChainDiagram: need exactly one step between consecutive levels");
    for (std::size_t n = 0; n < steps.size(); ++n) {
      if (!(Cat::source(steps[n]) == objects[n]) || !(Cat::target(steps[n]) == objects[n + 1]))
        throw type_error("ChainDiagram: step " + std::to_string(n) + " does not chain");
    }
    const std::size_t tail = steps.size();
    auto obj_fn = [objects](std::size_t n) {
      return n < objects.size() ? objects[n] : objects.back();
    };
    auto step_fn = [objects, steps](std::size_t n) {
      return n < steps.size() ? steps[n] : Cat::id(objects.back());
    };
    return ChainDiagram(obj_fn, step_fn, stabilised ? std::min(*stabilised, tail) : tail);
  }

  Object object(std::size_t n) const { return object_(n); }
  Morphism step(std::size_t n) const { return step_(n); }
  std::optional<std::size_t> stabilised_at() const { return stabilised_; }

 private:
  ObjectFn object_;
  StepFn step_;
  std::optional<std::size_t> stabilised_;
};

/// Whether a truncation must present the whole ω-colimit (requiring a
/// stabilised chain in FdHilb) or is just a finite window onto it.
enum class TruncationPolicy { omega_colimit, finite_window };

/// A desk-scale window onto a chain: levels 0..k, their colimit with
/// cocone, and the limit data of the dual chain.
template <class Cat>
struct TruncatedChain {
  using Object = typename Cat::Object;
  using Morphism = typename Cat::Morphism;

  std::vector<Object> objects;       // levels 0..k
  std::vector<Morphism> steps;       // k connecting morphisms
  Object colimit;
  std::vector<Morphism> cocone;      // legs object(n) → colimit
  std::vector<Morphism> limit_cone;  // legs colimit* → object(n)*, for the dual chain

  std::size_t depth() const { return steps.size(); }
};

// Limit cones of dual diagrams are daggers of the conjugated cocone legs;
// in both dagger instances this equals the compact dual of the leg.
template <class Cat>
typename Cat::Morphism dual_leg(const typename Cat::Morphism& leg) {
  return Cat::dagger(Cat::conj(leg));
}

template <class Cat>
TruncatedChain<Cat> truncate(const ChainDiagram<Cat>& chain, std::size_t k,
                             TruncationPolicy policy = TruncationPolicy::omega_colimit,
                             double tol = kDefaultTol) {
  TruncatedChain<Cat> out;
  for (std::size_t n = 0; n <= k; ++n) out.objects.push_back(chain.object(n));
  for (std::size_t n = 0; n < k; ++n) out.steps.push_back(chain.step(n));

  std::optional<std::size_t> declared = chain.stabilised_at();
  if (declared && *declared > k && policy == TruncationPolicy::omega_colimit)
    throw colimit_error("truncate: depth " + std::to_string(k) +
                        " is below the stabilisation level");
  if (policy == TruncationPolicy::finite_window && !declared) declared = k;

  auto colim = Cat::chain_colimit(out.objects[0], out.steps, declared, tol);
  out.colimit = colim.object;
  out.cocone = std::move(colim.cocone);
  for (const auto& leg : out.cocone) out.limit_cone.push_back(dual_leg<Cat>(leg));
  return out;
}

/// The dual chain D* = (−)* ∘ D as data in the underlying category:
/// the same (self-dual) objects with the dualised connecting morphisms
/// running downward.
template <class Cat>
struct DualChain {
  std::vector<typename Cat::Object> objects;
  std::vector<typename Cat::Morphism> down;  // object(n+1)* → object(n)*
};

template <class Cat>
DualChain<Cat> dual_diagram(const ChainDiagram<Cat>& chain, std::size_t k) {
  DualChain<Cat> out;
  for (std::size_t n = 0; n <= k; ++n) out.objects.push_back(Cat::dual_obj(chain.object(n)));
  for (std::size_t n = 0; n < k; ++n) {
    const auto s = chain.step(n);
    out.down.push_back(dual_compact<Cat>(s, Cat::compact(Cat::source(s)),
                                         Cat::compact(Cat::target(s))));
  }
  return out;
}

/// A (co)cone over a chain window: a vertex with one leg per level. A
/// cocone has legs into the vertex over an ascending chain (steps
/// object(n) → object(n+1)); a cone has legs out of the vertex over a
/// descending chain (steps object(n+1) → object(n), as in dual diagrams).
template <class Cat>
struct ConeData {
  enum class Direction { cone, cocone };
  Direction direction;
  typename Cat::Object vertex;
  std::vector<typename Cat::Morphism> legs;

  /// Legs must commute with the connecting morphisms up to the window depth.
  CheckReport check(const std::vector<typename Cat::Morphism>& steps,
                    double tol = kDefaultTol) const {
    double worst = 0.0;
    for (std::size_t n = 0; n < steps.size() && n + 1 < legs.size(); ++n) {
      const auto via_next = direction == Direction::cocone
                                ? Cat::compose(legs[n + 1], steps[n])
                                : Cat::compose(steps[n], legs[n + 1]);
      worst = std::max(worst, Cat::deviation(via_next, legs[n]));
    }
    return CheckReport{worst <= tol, worst};
  }
};

/// An ind-morphism: a compatible family of components C(i) → D(j_i).
template <class Cat>
struct IndMorphism {
  using Component = std::pair<std::size_t, typename Cat::Morphism>;  // (target level, map)
  std::function<Component(std::size_t)> family;

  /// Compatibility is observational: composites into the target colimit
  /// must agree for successive levels of the window.
  CheckReport check_compatible(const TruncatedChain<Cat>& src, const TruncatedChain<Cat>& dst,
                               double tol = kDefaultTol) const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 <= src.depth(); ++i) {
      const auto [j0, g0] = family(i);
      const auto [j1, g1] = family(i + 1);
      if (j0 > dst.depth() || j1 > dst.depth())
        throw value_error("IndMorphism: component level beyond target window");
      const auto via0 = Cat::compose(dst.cocone[j0], g0);
      const auto via1 = Cat::compose(Cat::compose(dst.cocone[j1], g1), src.steps[i]);
      worst = std::max(worst, Cat::deviation(via1, via0));
    }
    return CheckReport{worst <= tol, worst};
  }

  /// The morphism between the truncated colimits this family presents.
  typename Cat::Morphism realize(const TruncatedChain<Cat>& src, const TruncatedChain<Cat>& dst,
                                 double tol = kDefaultTol) const {
    std::vector<typename Cat::Morphism> out_legs;
    for (std::size_t i = 0; i <= src.depth(); ++i) {
      const auto [j, g] = family(i);
      if (j > dst.depth()) throw value_error("IndMorphism: component level beyond target window");
      out_legs.push_back(Cat::compose(dst.cocone[j], g));
    }
    return Cat::mediate_colimit(src.cocone, out_legs, tol);
  }
};

/// Result of factoring an M-morphism through a colimit: the least level and
/// the morphism into it.
template <class Cat>
struct LevelFactor {
  std::size_t level;
  typename Cat::Morphism n;
};

namespace detail {

// Candidate n with cocone[j] ∘ n = m. For Rel the canonical system needs a
// functional choice (least representative per element); the trivial system
// takes the full preimage. For FdHilb the solve is unique either way.
template <class Cat>
std::optional<typename Cat::Morphism> solve_through_leg(const typename Cat::Morphism& leg,
                                                        const typename Cat::Morphism& m,
                                                        bool functional_choice, double tol) {
  if constexpr (Cat::exact) {
    auto full = Cat::compose(Cat::dagger(leg), m);
    if (functional_choice) {
      // keep only the least target label per source element
      typename Cat::Morphism::PairSet chosen;
      std::optional<std::pair<std::string, std::string>> current;
      for (const auto& p : full.pairs()) {
        if (!current || current->first != p.first) {
          if (current) chosen.insert(*current);
          current = p;
        }
      }
      if (current) chosen.insert(*current);
      full = typename Cat::Morphism(full.source(), full.target(), std::move(chosen));
    }
    if (!(Cat::compose(leg, full) == m)) return std::nullopt;
    return full;
  } else {
    if (Cat::target(leg) != Cat::target(m)) return std::nullopt;
    try {
      auto n = Cat::mediate_limit({leg}, {m}, tol);
      return n;
    } catch (const mediate_error&) {
      return std::nullopt;
    }
  }
}

// Alternative solutions at the same level, for the essential-uniqueness
// check. Bounded enumeration; desk scale only.
template <class Cat>
std::vector<typename Cat::Morphism> alternative_solutions(const typename Cat::Morphism& leg,
                                                          const typename Cat::Morphism& m,
                                                          std::size_t cap, double tol) {
  std::vector<typename Cat::Morphism> out;
  if constexpr (Cat::exact) {
    const auto full = Cat::compose(Cat::dagger(leg), m);
    std::vector<std::pair<std::string, std::vector<std::string>>> choices;
    for (const auto& x : full.source().labels()) {
      auto ys = full.image(x);
      if (!ys.empty()) choices.emplace_back(x, std::vector<std::string>(ys.begin(), ys.end()));
    }
    std::size_t combos = 1;
    for (const auto& [x, ys] : choices) {
      combos *= ys.size();
      if (combos > cap) return out;
    }
    for (std::size_t c = 0; c < combos; ++c) {
      typename Cat::Morphism::PairSet p;
      std::size_t rest = c;
      for (const auto& [x, ys] : choices) {
        p.insert({x, ys[rest % ys.size()]});
        rest /= ys.size();
      }
      typename Cat::Morphism cand(full.source(), full.target(), std::move(p));
      if (Cat::compose(leg, cand) == m) out.push_back(std::move(cand));
    }
  } else {
    auto n = solve_through_leg<Cat>(leg, m, false, tol);
    if (n) out.push_back(*n);
  }
  return out;
}

}  // namespace detail

// Factors m : X ↣ colim(D) through the least level j with an n : X ↣ D(j)
// such that d_j ∘ n = m. Essential uniqueness of n is verified by pushing
// every (bounded-enumeration) solution to the top of the window and
// checking they merge there.
template <class Cat>
std::optional<LevelFactor<Cat>> factor_through_colimit(const typename Cat::Morphism& m,
                                                       const TruncatedChain<Cat>& tc,
                                                       const FactorisationSystem<Cat>& system,
                                                       std::size_t depth,
                                                       double tol = kDefaultTol) {
  if (!system.in_M(m)) throw value_error("factor_through_colimit: morphism is not in M");
  if (!(Cat::target(m) == tc.colimit))
    throw type_error("factor_through_colimit: morphism does not land in the colimit");
  const bool functional =
      system.kind == FactorisationSystem<Cat>::Kind::canonical;
  const std::size_t top = tc.depth();
  for (std::size_t j = 0; j <= std::min(depth, top); ++j) {
    auto n = detail::solve_through_leg<Cat>(tc.cocone[j], m, functional, tol);
    if (!n || !system.in_M(*n)) continue;

    // essential uniqueness: all solutions at level j agree after composing
    // up to the top level
    auto push_to_top = [&](const typename Cat::Morphism& s) {
      auto acc = s;
      for (std::size_t l = j; l < top; ++l) acc = Cat::compose(tc.steps[l], acc);
      return acc;
    };
    const auto reference = push_to_top(*n);
    for (const auto& alt : detail::alternative_solutions<Cat>(tc.cocone[j], m, 64, tol)) {
      if (!system.in_M(alt)) continue;
      if (Cat::deviation(push_to_top(alt), reference) > tol)
        throw error("factor_through_colimit: solutions fail to merge at a later level");
    }
    return LevelFactor<Cat>{j, *n};
  }
  return std::nullopt;
}

/// The unique u : vertex → colimit* with limit_cone[n] ∘ u = legs[n].
template <class Cat>
typename Cat::Morphism mediate(const std::vector<typename Cat::Morphism>& legs,
                               const TruncatedChain<Cat>& tc, double tol = kDefaultTol) {
  return Cat::mediate_limit(tc.limit_cone, legs, tol);
}

// The extended duals construction. For f : colim(C) → colim(D), each
// composite f ∘ c_i is factored as m_i ∘ e_i, the M-part is pushed down to
// some finite level j_i of D, and the duals of the pieces assemble into a
// cone on the dual chain of C; f* is its unique mediating morphism. On
// stabilised/compact input this agrees with the compact-level dual.
template <class Cat>
typename Cat::Morphism extend_dual(const typename Cat::Morphism& f, const TruncatedChain<Cat>& src,
                                   const TruncatedChain<Cat>& dst,
                                   const FactorisationSystem<Cat>& system,
                                   double tol = kDefaultTol) {
  if (!(Cat::source(f) == src.colimit) || !(Cat::target(f) == dst.colimit))
    throw type_error("extend_dual: f does not run between the truncated colimits");
  std::vector<typename Cat::Morphism> legs;
  for (std::size_t i = 0; i <= src.depth(); ++i) {
    const auto fc = Cat::compose(f, src.cocone[i]);
    const auto fac = system.factor(fc);
    const auto lf = factor_through_colimit<Cat>(fac.m, dst, system, dst.depth(), tol);
    if (!lf)
      throw error("extend_dual: M-part at level " + std::to_string(i) +
                  " does not factor through the window");
    const auto e_star = dual_compact<Cat>(fac.e, Cat::compact(Cat::source(fac.e)),
                                          Cat::compact(fac.mid));
    const auto n_star = dual_compact<Cat>(lf->n, Cat::compact(fac.mid),
                                          Cat::compact(dst.objects[lf->level]));
    legs.push_back(Cat::compose(e_star, Cat::compose(n_star, dst.limit_cone[lf->level])));
  }
  return mediate<Cat>(legs, src, tol);
}

template <class Cat>
typename Cat::Morphism extend_dual(const IndMorphism<Cat>& f, const TruncatedChain<Cat>& src,
                                   const TruncatedChain<Cat>& dst,
                                   const FactorisationSystem<Cat>& system,
                                   double tol = kDefaultTol) {
  return extend_dual<Cat>(f.realize(src, dst, tol), src, dst, system, tol);
}

}  // namespace cataccess
