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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cataccess/core.hpp"
#include "cataccess/errors.hpp"

namespace cataccess::rel {

using Label = std::string;

// A label is atomic (non-empty, free of '(', ')' and ',') or a pair
// "(l,r)" of labels. This keeps product labels unambiguous and makes their
// string order agree with lexicographic pair order.
inline bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  if (s.front() != '(') return s.find_first_of("(),") == std::string_view::npos;
  if (s.size() < 2 || s.back() != ')') return false;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth < 0) return false;
      if (depth == 0 && i + 1 != s.size()) return false;
    } else if (c == ',' && depth == 1) {
      return valid_label(s.substr(1, i - 1)) && valid_label(s.substr(i + 1, s.size() - i - 2));
    }
  }
  return false;
}

/// A finite set of distinct labels, kept sorted.
class Carrier {
 public:
  Carrier() = default;

  explicit Carrier(std::vector<Label> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (i > 0 && labels_[i] == labels_[i - 1])
        throw value_error("carrier labels must be distinct: " + labels_[i]);
      if (!valid_label(labels_[i]))
        throw value_error("malformed carrier label: '" + labels_[i] + "'");
    }
  }

  /// The monoidal unit: the singleton carrier {*}.
  static Carrier unit() { return Carrier({"*"}); }

  static Label pair_label(const Label& a, const Label& b) { return "(" + a + "," + b + ")"; }

  static Carrier product(const Carrier& a, const Carrier& b) {
    Carrier out;
    out.labels_.reserve(a.size() * b.size());
    for (const auto& x : a.labels_)
      for (const auto& y : b.labels_) out.labels_.push_back(pair_label(x, y));
    std::sort(out.labels_.begin(), out.labels_.end());
    return out;
  }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<Label>& labels() const { return labels_; }

  bool contains(const Label& x) const {
    return std::binary_search(labels_.begin(), labels_.end(), x);
  }

  friend bool operator==(const Carrier& a, const Carrier& b) { return a.labels_ == b.labels_; }
  friend bool operator!=(const Carrier& a, const Carrier& b) { return !(a == b); }
  friend bool operator<(const Carrier& a, const Carrier& b) { return a.labels_ < b.labels_; }

 private:
  std::vector<Label> labels_;

  friend class Relation;
  static Carrier unchecked(std::vector<Label> sorted) {
    Carrier c;
    c.labels_ = std::move(sorted);
    return c;
  }
};

/// A finite relation R ⊆ X × Y with named source and target carriers.
class Relation {
 public:
  using Pair = std::pair<Label, Label>;
  using PairSet = std::set<Pair>;

  Relation(Carrier source, Carrier target, PairSet pairs)
      : src_(std::move(source)), dst_(std::move(target)), pairs_(std::move(pairs)) {
    for (const auto& [x, y] : pairs_) {
      if (!src_.contains(x) || !dst_.contains(y))
        throw type_error("relation pair (" + x + "," + y + ") lies outside source x target");
    }
  }

  static Relation identity(const Carrier& x) {
    PairSet p;
    for (const auto& l : x.labels()) p.insert({l, l});
    return Relation(x, x, std::move(p));
  }

  static Relation empty(const Carrier& source, const Carrier& target) {
    return Relation(source, target, {});
  }

  /// Graph of a label map; every key must be mapped.
  static Relation from_map(const Carrier& source, const Carrier& target,
                           const std::map<Label, Label>& f) {
    PairSet p;
    for (const auto& [x, y] : f) p.insert({x, y});
    return Relation(source, target, std::move(p));
  }

  const Carrier& source() const { return src_; }
  const Carrier& target() const { return dst_; }
  const PairSet& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  bool relates(const Label& x, const Label& y) const { return pairs_.count({x, y}) > 0; }

  std::set<Label> image(const Label& x) const {
    std::set<Label> out;
    for (auto it = pairs_.lower_bound({x, Label()}); it != pairs_.end() && it->first == x; ++it)
      out.insert(it->second);
    return out;
  }

  /// Converse relation.
  Relation dagger() const {
    PairSet out;
    for (const auto& [x, y] : pairs_) out.insert({y, x});
    return Relation(dst_, src_, std::move(out));
  }

  Relation united(const Relation& other) const {
    if (src_ != other.src_ || dst_ != other.dst_) throw type_error("union: carrier mismatch");
    PairSet out = pairs_;
    out.insert(other.pairs_.begin(), other.pairs_.end());
    return Relation(src_, dst_, std::move(out));
  }

  Relation intersected(const Relation& other) const {
    if (src_ != other.src_ || dst_ != other.dst_) throw type_error("intersect: carrier mismatch");
    PairSet out;
    std::set_intersection(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(),
                          std::inserter(out, out.begin()));
    return Relation(src_, dst_, std::move(out));
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.src_ == b.src_ && a.dst_ == b.dst_ && a.pairs_ == b.pairs_;
  }
  friend bool operator!=(const Relation& a, const Relation& b) { return !(a == b); }

 private:
  Carrier src_, dst_;
  PairSet pairs_;
};

/// g ∘ f via the existential composite.
inline Relation compose(const Relation& g, const Relation& f) {
  if (f.target() != g.source()) throw type_error("compose: target of f differs from source of g");
  std::multimap<Label, Label> by_src;
  for (const auto& [y, z] : g.pairs()) by_src.insert({y, z});
  Relation::PairSet out;
  for (const auto& [x, y] : f.pairs()) {
    auto [lo, hi] = by_src.equal_range(y);
    for (auto it = lo; it != hi; ++it) out.insert({x, it->second});
  }
  return Relation(f.source(), g.target(), std::move(out));
}

inline Relation tensor(const Relation& f, const Relation& g) {
  Relation::PairSet out;
  for (const auto& [xf, yf] : f.pairs())
    for (const auto& [xg, yg] : g.pairs())
      out.insert({Carrier::pair_label(xf, xg), Carrier::pair_label(yf, yg)});
  return Relation(Carrier::product(f.source(), g.source()),
                  Carrier::product(f.target(), g.target()), std::move(out));
}

/// Size of the symmetric difference, used as an exact deviation measure.
inline double deviation(const Relation& a, const Relation& b) {
  if (a.source() != b.source() || a.target() != b.target())
    throw type_error("deviation: carrier mismatch");
  std::size_t d = 0;
  for (const auto& p : a.pairs()) d += b.pairs().count(p) == 0;
  for (const auto& p : b.pairs()) d += a.pairs().count(p) == 0;
  return static_cast<double>(d);
}

/// Every source element has exactly one successor (the class M).
inline bool in_M(const Relation& r) {
  for (const auto& x : r.source().labels())
    if (r.image(x).size() != 1) return false;
  return true;
}

/// Every target element has exactly one predecessor (the class E).
inline bool in_E(const Relation& r) { return in_M(r.dagger()); }

/// Graph of a bijection.
inline bool is_iso(const Relation& r) { return in_M(r) && in_E(r); }

inline Relation associator(const Carrier& a, const Carrier& b, const Carrier& c) {
  Relation::PairSet p;
  for (const auto& x : a.labels())
    for (const auto& y : b.labels())
      for (const auto& z : c.labels())
        p.insert({Carrier::pair_label(Carrier::pair_label(x, y), z),
                  Carrier::pair_label(x, Carrier::pair_label(y, z))});
  return Relation(Carrier::product(Carrier::product(a, b), c),
                  Carrier::product(a, Carrier::product(b, c)), std::move(p));
}

inline Relation left_unitor(const Carrier& a) {
  Relation::PairSet p;
  for (const auto& x : a.labels()) p.insert({Carrier::pair_label("*", x), x});
  return Relation(Carrier::product(Carrier::unit(), a), a, std::move(p));
}

inline Relation right_unitor(const Carrier& a) {
  Relation::PairSet p;
  for (const auto& x : a.labels()) p.insert({Carrier::pair_label(x, "*"), x});
  return Relation(Carrier::product(a, Carrier::unit()), a, std::move(p));
}

inline Relation symmetry(const Carrier& a, const Carrier& b) {
  Relation::PairSet p;
  for (const auto& x : a.labels())
    for (const auto& y : b.labels())
      p.insert({Carrier::pair_label(x, y), Carrier::pair_label(y, x)});
  return Relation(Carrier::product(a, b), Carrier::product(b, a), std::move(p));
}

/// Compact structure on X with X* = X, η = {(*,(x,x))}, ε = {((x,x),*)}.
inline CompactStructure<struct RelCat> compact_structure(const Carrier& x);

// --- factorisation -------------------------------------------------------

/// R = m ∘ e with e oppositely functional onto the graph of R and m
/// functional out of it.
struct Factorisation {
  Relation e;    // source ↠ mid
  Relation m;    // mid ↣ target
  Carrier mid;   // the graph of R, as a carrier of pair labels
};

inline Factorisation factor(const Relation& r) {
  std::vector<Label> mid_labels;
  Relation::PairSet ep, mp;
  for (const auto& [x, y] : r.pairs()) {
    const Label g = Carrier::pair_label(x, y);
    mid_labels.push_back(g);
    ep.insert({x, g});
    mp.insert({g, y});
  }
  Carrier mid(std::move(mid_labels));
  return Factorisation{Relation(r.source(), mid, std::move(ep)),
                       Relation(mid, r.target(), std::move(mp)), mid};
}

// --- diagonal fill -------------------------------------------------------

/// Commuting square data: v ∘ m ∘ e = m2 ∘ e2 ∘ u with e,e2 in E and
/// m,m2 in M.
struct FillSquare {
  Relation e, m;    // top factorisation
  Relation e2, m2;  // bottom factorisation
  Relation u, v;    // left and right edges
};

inline bool square_commutes(const FillSquare& s) {
  return compose(s.v, compose(s.m, s.e)) == compose(s.m2, compose(s.e2, s.u));
}

/// Largest candidate for a diagonal: everything compatible with both
/// triangles. For canonical factorisations this is the pairwise product
/// fill { ((x,y),(x',y')) | (x,x') ∈ u, (y,y') ∈ v }. Actual fills are
/// subsets of this.
inline Relation fill_candidate(const FillSquare& s) {
  const Relation via_e = compose(s.e2, compose(s.u, s.e.dagger()));
  const Relation via_m = compose(s.m2.dagger(), compose(s.v, s.m));
  return via_e.intersected(via_m);
}

inline bool is_fill(const FillSquare& s, const Relation& w) {
  return compose(w, s.e) == compose(s.e2, s.u) && compose(s.m2, w) == compose(s.v, s.m);
}

// The canonical diagonal w with w∘e = e2∘u and m2∘w = v∘m. Every commuting
// square has one. It is the unique fill whenever u and v are functional;
// with multi-valued side edges other (smaller) fills can exist, so the
// system is weak rather than orthogonal.
inline Relation diagonal_fill(const FillSquare& s) {
  if (!square_commutes(s)) throw value_error("diagonal_fill: outer square does not commute");
  Relation w = fill_candidate(s);
  if (is_fill(s, w)) return w;
  throw error("diagonal_fill: no diagonal satisfies both triangles");
}

/// All fills, by exhaustive search over subsets of the candidate set.
/// Only feasible at desk scale; throws when the candidate set is too big.
inline std::vector<Relation> all_fills(const FillSquare& s, std::size_t max_candidate_pairs = 20) {
  const Relation cand = fill_candidate(s);
  const std::vector<Relation::Pair> pool(cand.pairs().begin(), cand.pairs().end());
  if (pool.size() > max_candidate_pairs)
    throw value_error("all_fills: candidate set too large for exhaustive search");
  std::vector<Relation> fills;
  for (std::uint64_t mask = 0; mask < (1ull << pool.size()); ++mask) {
    Relation::PairSet p;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask & (1ull << i)) p.insert(pool[i]);
    Relation w(cand.source(), cand.target(), std::move(p));
    if (is_fill(s, w)) fills.push_back(std::move(w));
  }
  return fills;
}

// --- chain colimits ------------------------------------------------------

struct ChainColimit {
  Carrier object;
  std::vector<Relation> cocone;  // legs X_n -> object, one per level
  std::vector<Carrier> levels;
};

// Colimit of a finite chain R_n ⊆ X_n × X_{n+1} by restriction and quotient.
// A level-n element survives iff it has a successor that itself survives;
// at the final level everything survives (truncation convention). Surviving
// elements are identified along the step relations; each class takes the
// least top-level label it contains as its printable representative.
inline ChainColimit chain_colimit(const Carrier& first, const std::vector<Relation>& steps) {
  std::vector<Carrier> levels{first};
  for (std::size_t n = 0; n < steps.size(); ++n) {
    if (steps[n].source() != levels.back())
      throw type_error("chain_colimit: step " + std::to_string(n) + " does not chain");
    levels.push_back(steps[n].target());
  }
  const std::size_t k = steps.size();

  // survivors, from the top down
  std::vector<std::set<Label>> alive(k + 1);
  alive[k] = std::set<Label>(levels[k].labels().begin(), levels[k].labels().end());
  for (std::size_t n = k; n-- > 0;) {
    for (const auto& [x, y] : steps[n].pairs())
      if (alive[n + 1].count(y)) alive[n].insert(x);
  }

  // union-find over surviving (level, label) nodes
  std::map<std::pair<std::size_t, Label>, std::size_t> node_id;
  std::vector<std::size_t> parent;
  auto add_node = [&](std::size_t n, const Label& x) {
    node_id.emplace(std::make_pair(n, x), parent.size());
    parent.push_back(parent.size());
  };
  for (std::size_t n = 0; n <= k; ++n)
    for (const auto& x : alive[n]) add_node(n, x);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
  for (std::size_t n = 0; n < k; ++n)
    for (const auto& [x, y] : steps[n].pairs())
      if (alive[n].count(x) && alive[n + 1].count(y))
        unite(node_id.at({n, x}), node_id.at({n + 1, y}));

  // representative = least top-level label in the class
  std::map<std::size_t, Label> rep;
  for (const auto& x : alive[k]) {
    const std::size_t root = find(node_id.at({k, x}));
    auto it = rep.find(root);
    if (it == rep.end() || x < it->second) rep[root] = x;
  }

  std::vector<Label> carrier_labels;
  for (const auto& [root, label] : rep) carrier_labels.push_back(label);
  Carrier object(std::move(carrier_labels));

  std::vector<Relation> cocone;
  for (std::size_t n = 0; n <= k; ++n) {
    Relation::PairSet p;
    for (const auto& x : alive[n]) p.insert({x, rep.at(find(node_id.at({n, x})))});
    cocone.push_back(Relation(levels[n], object, std::move(p)));
  }
  return ChainColimit{std::move(object), std::move(cocone), std::move(levels)};
}

// --- category trait ------------------------------------------------------

/// Rel plugged into the generic categorical interface.
struct RelCat {
  using Object = Carrier;
  using Morphism = Relation;
  static constexpr const char* name = "rel";
  static constexpr bool exact = true;

  static Object unit() { return Carrier::unit(); }
  static Object tensor_obj(const Object& a, const Object& b) { return Carrier::product(a, b); }
  static Object dual_obj(const Object& a) { return a; }
  static Object source(const Morphism& f) { return f.source(); }
  static Object target(const Morphism& f) { return f.target(); }

  static Morphism id(const Object& a) { return Relation::identity(a); }
  static Morphism compose(const Morphism& g, const Morphism& f) { return rel::compose(g, f); }
  static Morphism tensor(const Morphism& f, const Morphism& g) { return rel::tensor(f, g); }
  static Morphism dagger(const Morphism& f) { return f.dagger(); }
  static Morphism conj(const Morphism& f) { return f; }

  static Morphism associator(const Object& a, const Object& b, const Object& c) {
    return rel::associator(a, b, c);
  }
  static Morphism associator_inv(const Object& a, const Object& b, const Object& c) {
    return rel::associator(a, b, c).dagger();
  }
  static Morphism left_unitor(const Object& a) { return rel::left_unitor(a); }
  static Morphism left_unitor_inv(const Object& a) { return rel::left_unitor(a).dagger(); }
  static Morphism right_unitor(const Object& a) { return rel::right_unitor(a); }
  static Morphism right_unitor_inv(const Object& a) { return rel::right_unitor(a).dagger(); }
  static Morphism symmetry(const Object& a, const Object& b) { return rel::symmetry(a, b); }

  static bool equal(const Morphism& f, const Morphism& g, double /*tol*/ = 0.0) {
    return f == g;
  }
  static double deviation(const Morphism& f, const Morphism& g) { return rel::deviation(f, g); }

  static CompactStructure<RelCat> compact(const Object& x);

  static bool in_E(const Morphism& f) { return rel::in_E(f); }
  static bool in_M(const Morphism& f) { return rel::in_M(f); }
  static bool is_iso(const Morphism& f, double /*tol*/ = 0.0) { return rel::is_iso(f); }

  static GenericFactorisation<RelCat> factor(const Morphism& f) {
    auto fac = rel::factor(f);
    return GenericFactorisation<RelCat>{fac.e, fac.m, fac.mid};
  }

  static Colimit<RelCat> chain_colimit(const Object& first, const std::vector<Morphism>& steps,
                                       std::optional<std::size_t> /*declared_stable*/,
                                       double /*tol*/) {
    auto c = rel::chain_colimit(first, steps);
    return Colimit<RelCat>{c.object, c.cocone};
  }

  // Mediating morphism into a limit: the unique u with cone[n] ∘ u =
  // legs[n]. Built as the union of cone[n]† ∘ legs[n] over levels and then
  // verified, so incompatible legs are rejected.
  static Morphism mediate_limit(const std::vector<Morphism>& cone,
                                const std::vector<Morphism>& legs, double /*tol*/) {
    if (cone.empty() || cone.size() != legs.size())
      throw value_error("mediate_limit: level count mismatch");
    Morphism u = Relation::empty(legs[0].source(), cone[0].source());
    for (std::size_t n = 0; n < cone.size(); ++n)
      u = u.united(rel::compose(cone[n].dagger(), legs[n]));
    for (std::size_t n = 0; n < cone.size(); ++n)
      if (rel::compose(cone[n], u) != legs[n])
        throw mediate_error("mediate_limit: legs are not a compatible cone");
    return u;
  }

  // Dual construction out of a colimit: the unique h with h ∘ cocone[n] =
  // legs[n].
  static Morphism mediate_colimit(const std::vector<Morphism>& cocone,
                                  const std::vector<Morphism>& legs, double /*tol*/) {
    if (cocone.empty() || cocone.size() != legs.size())
      throw value_error("mediate_colimit: level count mismatch");
    Morphism h = Relation::empty(cocone[0].target(), legs[0].target());
    for (std::size_t n = 0; n < cocone.size(); ++n)
      h = h.united(rel::compose(legs[n], cocone[n].dagger()));
    for (std::size_t n = 0; n < cocone.size(); ++n)
      if (rel::compose(h, cocone[n]) != legs[n])
        throw mediate_error("mediate_colimit: legs are not a compatible cocone");
    return h;
  }
};

inline CompactStructure<RelCat> compact_structure(const Carrier& x) {
  Relation::PairSet etap, epsp;
  for (const auto& l : x.labels()) {
    etap.insert({"*", Carrier::pair_label(l, l)});
    epsp.insert({Carrier::pair_label(l, l), "*"});
  }
  const Carrier xx = Carrier::product(x, x);
  return CompactStructure<RelCat>{x, x, Relation(Carrier::unit(), xx, std::move(etap)),
                                  Relation(xx, Carrier::unit(), std::move(epsp))};
}

inline CompactStructure<RelCat> RelCat::compact(const Object& x) { return compact_structure(x); }

}  // namespace cataccess::rel
