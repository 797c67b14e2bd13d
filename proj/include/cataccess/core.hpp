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
#include <vector>

#include "cataccess/errors.hpp"

// Category-generic layer. A category plugs in through a trait struct
// providing Object/Morphism types, composition, tensor, dagger, the
// coherence morphisms (kept explicit so every composite below is a literal
// composite), chosen duals, factorisation and chain-colimit machinery.
// Both concrete instances (rel::RelCat and hilb::HilbCat) satisfy it.

namespace cataccess {

inline constexpr double kDefaultTol = 1e-9;

/// Witness of compactness: η: I → dual⊗object and ε: object⊗dual → I
/// satisfying the snake identities.
template <class Cat>
struct CompactStructure {
  typename Cat::Object object;
  typename Cat::Object dual;
  typename Cat::Morphism eta;
  typename Cat::Morphism epsilon;
};

template <class Cat>
struct GenericFactorisation {
  typename Cat::Morphism e;  // source ↠ mid
  typename Cat::Morphism m;  // mid ↣ target
  typename Cat::Object mid;
};

template <class Cat>
struct Colimit {
  typename Cat::Object object;
  std::vector<typename Cat::Morphism> cocone;  // legs level n → object
};

struct CheckReport {
  bool pass = false;
  double deviation = 0.0;
};

namespace detail {

template <class Cat>
typename Cat::Morphism compose_all(std::vector<typename Cat::Morphism> fs) {
  // right-to-left: fs = {f_k, ..., f_1} composes to f_k ∘ ... ∘ f_1
  if (fs.empty()) throw value_error("compose_all: empty composite");
  typename Cat::Morphism acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Cat::compose(fs[i], acc);
  return acc;
}

template <class Cat>
void require_typed(const typename Cat::Morphism& f, const typename Cat::Object& src,
                   const typename Cat::Object& dst, const std::string& what) {
  if (!(Cat::source(f) == src) || !(Cat::target(f) == dst))
    throw type_error(what + ": morphism has the wrong type");
}

}  // namespace detail

/// Checks both snake composites against the identities.
template <class Cat>
CheckReport check_snake(const CompactStructure<Cat>& cs, double tol = kDefaultTol) {
  using M = typename Cat::Morphism;
  const auto& x = cs.object;
  const auto& y = cs.dual;
  const auto i = Cat::unit();
  detail::require_typed<Cat>(cs.eta, i, Cat::tensor_obj(y, x), "check_snake eta");
  detail::require_typed<Cat>(cs.epsilon, Cat::tensor_obj(x, y), i, "check_snake epsilon");

  const M s1 = detail::compose_all<Cat>({Cat::left_unitor(x),
                                         Cat::tensor(cs.epsilon, Cat::id(x)),
                                         Cat::associator_inv(x, y, x),
                                         Cat::tensor(Cat::id(x), cs.eta),
                                         Cat::right_unitor_inv(x)});
  const M s2 = detail::compose_all<Cat>({Cat::right_unitor(y),
                                         Cat::tensor(Cat::id(y), cs.epsilon),
                                         Cat::associator(y, x, y),
                                         Cat::tensor(cs.eta, Cat::id(y)),
                                         Cat::left_unitor_inv(y)});
  const double d = std::max(Cat::deviation(s1, Cat::id(x)), Cat::deviation(s2, Cat::id(y)));
  return CheckReport{d <= tol, d};
}

/// ⌜f⌝ = (id ⊗ f) ∘ η_X : I → X* ⊗ Y for f : X → Y.
template <class Cat>
typename Cat::Morphism name(const typename Cat::Morphism& f, const CompactStructure<Cat>& cs_x) {
  if (!(Cat::source(f) == cs_x.object))
    throw type_error("name: compact structure is not for the source of f");
  return Cat::compose(Cat::tensor(Cat::id(cs_x.dual), f), cs_x.eta);
}

/// ⌞f⌟ = ε_Y ∘ (f ⊗ id) : X ⊗ Y* → I for f : X → Y.
template <class Cat>
typename Cat::Morphism coname(const typename Cat::Morphism& f, const CompactStructure<Cat>& cs_y) {
  if (!(Cat::target(f) == cs_y.object))
    throw type_error("coname: compact structure is not for the target of f");
  return Cat::compose(cs_y.epsilon, Cat::tensor(f, Cat::id(cs_y.dual)));
}

/// Recovers f from ⌜f⌝ by bending the name back through the snake.
template <class Cat>
typename Cat::Morphism unname(const typename Cat::Morphism& nm, const CompactStructure<Cat>& cs_x,
                              const typename Cat::Object& y) {
  const auto& x = cs_x.object;
  const auto& xd = cs_x.dual;
  detail::require_typed<Cat>(nm, Cat::unit(), Cat::tensor_obj(xd, y), "unname");
  return detail::compose_all<Cat>({Cat::left_unitor(y),
                                   Cat::tensor(cs_x.epsilon, Cat::id(y)),
                                   Cat::associator_inv(x, xd, y),
                                   Cat::tensor(Cat::id(x), nm),
                                   Cat::right_unitor_inv(x)});
}

// f* : Y* → X*, the compact dual of f : X → Y. The composite bends f
// around η_X and ε_Y; the symmetries adapt the one-sided η/ε orientations
// of CompactStructure to the two bends.
template <class Cat>
typename Cat::Morphism dual_compact(const typename Cat::Morphism& f,
                                    const CompactStructure<Cat>& cs_x,
                                    const CompactStructure<Cat>& cs_y) {
  const auto& x = cs_x.object;
  const auto& xd = cs_x.dual;
  const auto& y = cs_y.object;
  const auto& yd = cs_y.dual;
  detail::require_typed<Cat>(f, x, y, "dual_compact");
  const auto eta_r = Cat::compose(Cat::symmetry(xd, x), cs_x.eta);      // I → X ⊗ X*
  const auto eps_l = Cat::compose(cs_y.epsilon, Cat::symmetry(yd, y));  // Y* ⊗ Y → I
  return detail::compose_all<Cat>({Cat::left_unitor(xd),
                                   Cat::tensor(eps_l, Cat::id(xd)),
                                   Cat::associator_inv(yd, y, xd),
                                   Cat::tensor(Cat::id(yd), Cat::tensor(f, Cat::id(xd))),
                                   Cat::tensor(Cat::id(yd), eta_r),
                                   Cat::right_unitor_inv(yd)});
}

/// The covariant conjugation functor: f_* = (f*)† = (f†)*.
template <class Cat>
typename Cat::Morphism conjugate(const typename Cat::Morphism& f,
                                 const CompactStructure<Cat>& cs_x,
                                 const CompactStructure<Cat>& cs_y) {
  return Cat::dagger(dual_compact<Cat>(f, cs_x, cs_y));
}

/// Both absorption identities for composable f : X → Y, g : Y → Z:
/// (id ⊗ g) ∘ ⌜f⌝ = ⌜g∘f⌝ = (f* ⊗ id) ∘ ⌜g⌝.
template <class Cat>
CheckReport check_absorption(const typename Cat::Morphism& f, const typename Cat::Morphism& g,
                             const CompactStructure<Cat>& cs_x, const CompactStructure<Cat>& cs_y,
                             double tol = kDefaultTol) {
  const auto lhs = Cat::compose(Cat::tensor(Cat::id(cs_x.dual), g), name<Cat>(f, cs_x));
  const auto mid = name<Cat>(Cat::compose(g, f), cs_x);
  const auto fstar = dual_compact<Cat>(f, cs_x, cs_y);
  const auto rhs = Cat::compose(Cat::tensor(fstar, Cat::id(Cat::target(g))), name<Cat>(g, cs_y));
  const double d = std::max(Cat::deviation(lhs, mid), Cat::deviation(rhs, mid));
  return CheckReport{d <= tol, d};
}

/// A factorisation system as data, so the same constructions can run under
/// different systems.
template <class Cat>
struct FactorisationSystem {
  enum class Kind { canonical, trivial };
  Kind kind;
  std::string name;
  std::function<GenericFactorisation<Cat>(const typename Cat::Morphism&)> factor;
  std::function<bool(const typename Cat::Morphism&)> in_E;
  std::function<bool (const typename Cat::Morphism&)> in_M;
};

template <class Cat>
FactorisationSystem<Cat> canonical_system() {
  return FactorisationSystem<Cat>{
      FactorisationSystem<Cat>::Kind::canonical, "canonical",
      [](const typename Cat::Morphism& f) { return Cat::factor(f); },
      [](const typename Cat::Morphism& f) { return Cat::in_E(f); },
      [](const typename Cat::Morphism& f) { return Cat::in_M(f); }};
}

/// E = isomorphisms, M = all morphisms. Exists in any symmetric monoidal
/// category; used to probe independence of constructions from the system.
template <class Cat>
FactorisationSystem<Cat> trivial_system() {
  return FactorisationSystem<Cat>{
      FactorisationSystem<Cat>::Kind::trivial, "trivial",
      [](const typename Cat::Morphism& f) {
        return GenericFactorisation<Cat>{Cat::id(Cat::source(f)), f, Cat::source(f)};
      },
      [](const typename Cat::Morphism& f) { return Cat::is_iso(f); },
      [](const typename Cat::Morphism&) { return true; }};
}

}  // namespace cataccess
