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

#include <string>
#include <vector>

#include "cataccess/accessible.hpp"
#include "cataccess/fdhilb.hpp"
#include "cataccess/rel.hpp"
#include "cataccess/rng.hpp"

// Seeded random instances at desk scale, shared by the check suites and
// the test drivers.

namespace cataccess::instances {

inline rel::Carrier carrier_of_size(std::size_t size, const std::string& prefix = "x") {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) labels.push_back(prefix + std::to_string(i));
  return rel::Carrier(std::move(labels));
}

inline rel::Carrier random_carrier(Rng& rng, std::size_t max_size, std::size_t min_size = 0,
                                   const std::string& prefix = "x") {
  return carrier_of_size(min_size + rng.uniform(max_size - min_size + 1), prefix);
}

inline rel::Relation random_relation(Rng& rng, const rel::Carrier& x, const rel::Carrier& y,
                                     double density = 0.4) {
  rel::Relation::PairSet pairs;
  for (const auto& a : x.labels())
    for (const auto& b : y.labels())
      if (rng.bernoulli(density)) pairs.insert({a, b});
  return rel::Relation(x, y, std::move(pairs));
}

/// Graph of a random (total) function; needs a non-empty target unless the
/// source is empty too.
inline rel::Relation random_functional(Rng& rng, const rel::Carrier& x, const rel::Carrier& y) {
  rel::Relation::PairSet pairs;
  for (const auto& a : x.labels())
    pairs.insert({a, y.labels()[rng.uniform(y.size())]});
  return rel::Relation(x, y, std::move(pairs));
}

inline rel::Relation random_bijection(Rng& rng, const rel::Carrier& x, const rel::Carrier& y) {
  if (x.size() != y.size()) throw value_error("random_bijection: sizes differ");
  std::vector<std::size_t> perm(x.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform(i)]);
  rel::Relation::PairSet pairs;
  for (std::size_t i = 0; i < perm.size(); ++i)
    pairs.insert({x.labels()[i], y.labels()[perm[i]]});
  return rel::Relation(x, y, std::move(pairs));
}

/// An M-chain of carriers: levels of bounded size connected by graphs of
/// functions. With `stabilised`, the tail steps are bijections, so the
/// window faithfully presents the whole chain.
inline ChainDiagram<rel::RelCat> random_rel_mchain(Rng& rng, std::size_t length,
                                                   std::size_t max_carrier,
                                                   bool stabilised = false,
                                                   const std::string& prefix = "x") {
  std::vector<rel::Carrier> levels;
  std::vector<rel::Relation> steps;
  levels.push_back(random_carrier(rng, max_carrier, 1, prefix + "0_"));
  for (std::size_t n = 0; n < length; ++n) {
    const auto& prev = levels.back();
    if (stabilised && n + 1 == length) {
      // keep the final step an isomorphism
      rel::Carrier next = carrier_of_size(prev.size(), prefix + std::to_string(n + 1) + "_");
      steps.push_back(random_bijection(rng, prev, next));
      levels.push_back(std::move(next));
    } else {
      rel::Carrier next = random_carrier(rng, max_carrier, 1, prefix + std::to_string(n + 1) + "_");
      steps.push_back(random_functional(rng, prev, next));
      levels.push_back(std::move(next));
    }
  }
  return ChainDiagram<rel::RelCat>::from_levels(std::move(levels), std::move(steps));
}

inline hilb::FdMorphism random_matrix(Rng& rng, hilb::Dim rows, hilb::Dim cols,
                                      double scale = 1.0) {
  hilb::Matrix m(rows, cols);
  for (hilb::Dim r = 0; r < rows; ++r)
    for (hilb::Dim c = 0; c < cols; ++c)
      m(r, c) = scale * hilb::Complex(rng.gaussian(), rng.gaussian());
  return hilb::FdMorphism(std::move(m));
}

/// Random isometry (rows ≥ cols) via the orthonormal factor of a Gaussian.
inline hilb::FdMorphism random_isometry(Rng& rng, hilb::Dim rows, hilb::Dim cols) {
  if (rows < cols) throw value_error("random_isometry: rows must be at least cols");
  while (true) {
    const auto g = random_matrix(rng, rows, cols);
    Eigen::HouseholderQR<hilb::Matrix> qr(g.matrix());
    hilb::Matrix q = qr.householderQ() * hilb::Matrix::Identity(rows, cols);
    hilb::FdMorphism iso(std::move(q));
    if (hilb::rank_of(iso) == cols) return iso;
  }
}

inline hilb::FdMorphism random_coisometry(Rng& rng, hilb::Dim rows, hilb::Dim cols) {
  return random_isometry(rng, cols, rows).dagger();
}

inline hilb::FdMorphism random_unitary(Rng& rng, hilb::Dim n) {
  return random_isometry(rng, n, n);
}

/// Random injective map, not necessarily an isometry.
inline hilb::FdMorphism random_injection(Rng& rng, hilb::Dim rows, hilb::Dim cols) {
  while (true) {
    const auto g = random_matrix(rng, rows, cols);
    if (hilb::rank_of(g) == cols) return g;
  }
}

/// A stabilised chain of injective maps with dimensions bounded by max_dim.
inline ChainDiagram<hilb::HilbCat> random_hilb_mchain(Rng& rng, std::size_t length,
                                                      hilb::Dim max_dim) {
  std::vector<hilb::Dim> dims;
  dims.push_back(1 + static_cast<hilb::Dim>(rng.uniform(static_cast<std::uint64_t>(max_dim))));
  for (std::size_t n = 0; n < length; ++n) {
    const hilb::Dim lo = dims.back();
    dims.push_back(lo + static_cast<hilb::Dim>(rng.uniform(static_cast<std::uint64_t>(
                            std::max<hilb::Dim>(1, max_dim - lo + 1)))));
  }
  dims.back() = dims[dims.size() - 2];  // final step square, hence invertible
  std::vector<hilb::FdMorphism> steps;
  std::vector<hilb::Dim> objects{dims[0]};
  for (std::size_t n = 0; n < length; ++n) {
    steps.push_back(random_injection(rng, dims[n + 1], dims[n]));
    objects.push_back(dims[n + 1]);
  }
  return ChainDiagram<hilb::HilbCat>::from_levels(std::move(objects), std::move(steps));
}

}  // namespace cataccess::instances
