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

#include <array>
#include <cmath>
#include <numbers>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "cataccess/accessible.hpp"
#include "cataccess/errors.hpp"
#include "cataccess/fdhilb.hpp"
#include "cataccess/rng.hpp"

// An Ekert-91 style key distribution simulator on the categorical
// substrate. The quantum channel is the chain n ↦ (X*⊗X)^{⊗n} of qubit-pair
// stores; a protocol run draws pair slots from a finite truncation of it,
// growing the truncation when the supply runs out.

namespace cataccess::qkd {

using hilb::ClassicalStructure;
using hilb::Dim;
using hilb::FdMorphism;
using hilb::HilbCat;
using hilb::Matrix;
using hilb::PVSpectrum;

inline constexpr Dim kQubit = 2;

/// The singlet (|01⟩ − |10⟩)/√2 as a 4×1 unit vector.
inline FdMorphism bell_pair() {
  Matrix v = Matrix::Zero(4, 1);
  v(1, 0) = 1.0 / std::sqrt(2.0);
  v(2, 0) = -1.0 / std::sqrt(2.0);
  return FdMorphism(std::move(v));
}

/// Projective qubit measurement along a Bloch-plane angle. Outcome 0
/// projects onto (cos θ/2, sin θ/2), outcome 1 onto its complement, so two
/// parties at angles a, b on the singlet see E(a,b) = −cos(a−b).
inline PVSpectrum angle_measurement(double theta) {
  Matrix p(2, 2);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  p(0, 0) = c;
  p(0, 1) = s;
  p(1, 0) = -s;
  p(1, 1) = c;
  return hilb::pv_spectrum(FdMorphism(std::move(p)), hilb::classical_structure(kQubit));
}

// --- the quantum channel ---------------------------------------------------

/// The chain D(n) = (X*⊗X)^{⊗n} with connecting maps id ⊗ s, where s is
/// the unit-normalised pair state. The categorical unit η has norm
/// √dim; the per-level scalar discrepancy is kept on a ledger so sampling
/// can use unit states while the chain stays an M-chain of isometries.
struct ChannelChain {
  ChainDiagram<HilbCat> chain;
  double eta_scale;  // norm of the categorical η relative to the unit state

  double ledger_scale(std::size_t levels) const { return std::pow(eta_scale, levels); }
};

inline ChannelChain channel() {
  auto pair_dim = [](std::size_t n) {
    Dim d = 1;
    for (std::size_t i = 0; i < n; ++i) d *= kQubit * kQubit;
    return d;
  };
  const FdMorphism s = bell_pair();
  auto step = [pair_dim, s](std::size_t n) {
    return tensor(FdMorphism::identity(pair_dim(n)), s);
  };
  return ChannelChain{ChainDiagram<HilbCat>(pair_dim, step, std::nullopt),
                      std::sqrt(static_cast<double>(kQubit))};
}

/// A finite truncation of the channel as a store of fresh pair slots.
/// Drawing peels the front slot; re-attaching it restores the state
/// exactly, witnessing that the draw map is an isomorphism on truncations.
class ChannelState {
 public:
  explicit ChannelState(std::size_t depth) : created_(depth) {
    for (std::size_t i = 0; i < depth; ++i) slots_.push_back(i);
  }

  std::size_t remaining() const { return slots_.size(); }
  std::size_t depth() const { return created_; }
  const std::vector<std::uint64_t>& slots() const { return slots_; }

  /// Peels one fresh pair slot off the front.
  std::pair<std::uint64_t, ChannelState> draw() const {
    if (slots_.empty()) throw exhausted_error("channel truncation exhausted");
    ChannelState rest = *this;
    const std::uint64_t slot = rest.slots_.front();
    rest.slots_.erase(rest.slots_.begin());
    return {slot, std::move(rest)};
  }

  ChannelState attach(std::uint64_t slot) const {
    ChannelState out = *this;
    out.slots_.insert(out.slots_.begin(), slot);
    return out;
  }

  /// Re-truncates at a larger depth; already-consumed slots stay consumed.
  ChannelState grown(std::size_t new_depth) const {
    if (new_depth <= created_) throw value_error("grown: new depth must exceed current depth");
    ChannelState out = *this;
    for (std::size_t i = created_; i < new_depth; ++i) out.slots_.push_back(i);
    out.created_ = new_depth;
    return out;
  }

  friend bool operator==(const ChannelState& a, const ChannelState& b) {
    return a.created_ == b.created_ && a.slots_ == b.slots_;
  }

 private:
  std::vector<std::uint64_t> slots_;
  std::size_t created_;
};

// --- measurement ------------------------------------------------------------

/// Born probabilities for the joint outcome (i, j) when the two halves of
/// `state` are measured with `a` and `b`.
inline std::array<double, 4> joint_probabilities(const FdMorphism& state, const PVSpectrum& a,
                                                 const PVSpectrum& b, double tol = kDefaultTol) {
  if (state.rows() != 4 || state.cols() != 1) throw type_error("expected a 4x1 pair state");
  if (std::abs(state.norm() - 1.0) > tol) throw value_error("pair state is not normalised");
  const FdMorphism amp = compose(tensor(a.p, b.p), state);
  std::array<double, 4> probs{};
  for (Dim i = 0; i < 4; ++i) probs[static_cast<std::size_t>(i)] = std::norm(amp.at(i, 0));
  return probs;
}

/// Samples a joint outcome (Alice bit, Bob bit).
inline std::pair<int, int> measure_pair(const FdMorphism& state, const PVSpectrum& a,
                                        const PVSpectrum& b, Rng& rng,
                                        double tol = kDefaultTol) {
  const auto probs = joint_probabilities(state, a, b, tol);
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t o = 0; o < 4; ++o) {
    acc += probs[o];
    if (u < acc || o == 3) return {static_cast<int>(o / 2), static_cast<int>(o % 2)};
  }
  return {1, 1};
}

// --- the protocol ------------------------------------------------------------

// Both parties agree on one measurement set up front; sifting compares the
// chosen indices, so key agreement is guaranteed exactly when the two angle
// triples coincide. They are kept as separate fields so deliberately
// mismatched runs can be simulated.
struct ProtocolConfig {
  int n = 1;  // block parameter: 3n pairs per round
  std::array<double, 3> alice_angles{0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0};
  std::array<double, 3> bob_angles{0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0};
  std::uint64_t seed = 0;
  int max_rounds = 8;
  bool eavesdrop = false;
  std::optional<int> force_basis;  // both parties always pick this index (tests)
  double tol = kDefaultTol;
};

struct RoundRecord {
  std::vector<int> a, b;        // basis choices, values 1..3
  std::vector<int> c, c_prime;  // measured bits
  std::vector<int> sift;        // the announced index set I (1-based)
  bool restart = false;
};

struct ProtocolTranscript {
  std::vector<RoundRecord> rounds;
  std::vector<int> key_alice, key_bob;
  std::optional<double> chsh;
  std::size_t depth = 0;  // final channel truncation depth
  std::uint64_t seed = 0;
  bool terminated = false;

  bool keys_match() const { return key_alice == key_bob; }
};

namespace detail {

inline FdMorphism intercept_resend(const FdMorphism& state, double eve_angle, Rng& rng) {
  // Eve measures the transit half and forwards the corresponding
  // eigenstate; for rank-one projectors collapsing is exactly that.
  const PVSpectrum eve = angle_measurement(eve_angle);
  Matrix proj0 = eve.p.matrix().row(0).adjoint() * eve.p.matrix().row(0);
  const FdMorphism collapse0 = compose(tensor(FdMorphism::identity(2), FdMorphism(proj0)), state);
  const double p0 = std::pow(collapse0.norm(), 2);
  if (rng.uniform01() < p0) return FdMorphism(collapse0.matrix() / collapse0.norm());
  Matrix proj1 = eve.p.matrix().row(1).adjoint() * eve.p.matrix().row(1);
  const FdMorphism collapse1 = compose(tensor(FdMorphism::identity(2), FdMorphism(proj1)), state);
  return FdMorphism(collapse1.matrix() / collapse1.norm());
}

}  // namespace detail

// One full protocol run. Each round draws 3n fresh pairs from the channel
// truncation (growing it by doubling whenever the supply runs out), both
// parties measure under secret uniformly random basis choices, the
// mismatched-basis index set I is announced and discarded, and the
// complement becomes key material: Alice keeps c_j, Bob keeps 1 − c'_j.
// A round restarts when sifting keeps fewer than n bits (#I > 2n).
inline ProtocolTranscript run_protocol(const ProtocolConfig& cfg) {
  if (cfg.n < 1) throw value_error("run_protocol: n must be at least 1");

  Rng rng(cfg.seed);
  ProtocolTranscript tr;
  tr.seed = cfg.seed;
  const std::size_t block = static_cast<std::size_t>(3 * cfg.n);

  std::array<PVSpectrum, 3> alice{angle_measurement(cfg.alice_angles[0]),
                                  angle_measurement(cfg.alice_angles[1]),
                                  angle_measurement(cfg.alice_angles[2])};
  std::array<PVSpectrum, 3> bob{angle_measurement(cfg.bob_angles[0]),
                                angle_measurement(cfg.bob_angles[1]),
                                angle_measurement(cfg.bob_angles[2])};

  ChannelState supply(block);
  for (int round = 0; round < cfg.max_rounds; ++round) {
    RoundRecord rec;
    for (std::size_t i = 0; i < block; ++i) {
      const int a = cfg.force_basis ? *cfg.force_basis : static_cast<int>(rng.uniform(3)) + 1;
      const int b = cfg.force_basis ? *cfg.force_basis : static_cast<int>(rng.uniform(3)) + 1;
      rec.a.push_back(a);
      rec.b.push_back(b);

      while (supply.remaining() == 0) supply = supply.grown(2 * supply.depth());
      auto [slot, rest] = supply.draw();
      (void)slot;
      supply = std::move(rest);

      FdMorphism state = bell_pair();  // each drawn slot holds a fresh pair
      if (cfg.eavesdrop) {
        const double eve = cfg.bob_angles[rng.uniform(3)];
        state = detail::intercept_resend(state, eve, rng);
      }
      const auto [c, cp] = measure_pair(state, alice[static_cast<std::size_t>(a - 1)],
                                        bob[static_cast<std::size_t>(b - 1)], rng, cfg.tol);
      rec.c.push_back(c);
      rec.c_prime.push_back(cp);
    }
    for (std::size_t i = 0; i < block; ++i)
      if (rec.a[i] != rec.b[i]) rec.sift.push_back(static_cast<int>(i) + 1);

    if (rec.sift.size() > 2 * static_cast<std::size_t>(cfg.n)) {
      rec.restart = true;
      tr.rounds.push_back(std::move(rec));
      continue;
    }
    for (std::size_t i = 0; i < block; ++i) {
      if (rec.a[i] == rec.b[i]) {
        tr.key_alice.push_back(rec.c[i]);
        tr.key_bob.push_back(1 - rec.c_prime[i]);
      }
    }
    tr.rounds.push_back(std::move(rec));
    tr.terminated = true;
    break;
  }
  tr.depth = supply.depth();
  return tr;
}

inline std::uint64_t seed_for_run(std::uint64_t seed, std::uint64_t index) {
  return Rng::combine(seed, index);
}

/// Independent seeded runs; deterministic per (seed, run index) regardless
/// of scheduling, so the aggregate tolerates out-of-order completion.
inline std::vector<ProtocolTranscript> run_protocol_batch(const ProtocolConfig& base,
                                                          std::size_t runs,
                                                          unsigned threads = 1) {
  std::vector<ProtocolTranscript> out(runs);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      ProtocolConfig cfg = base;
      cfg.seed = seed_for_run(base.seed, i);
      out[i] = run_protocol(cfg);
    }
  };
  if (threads <= 1 || runs < 2 * threads) {
    work(0, runs);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (runs + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = std::min<std::size_t>(t * chunk, runs);
    const std::size_t hi = std::min<std::size_t>(lo + chunk, runs);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

// --- CHSH estimation ---------------------------------------------------------

enum class PairSource { singlet, product_zero, intercept_resend };

inline std::array<std::pair<double, double>, 4> standard_chsh_pairs(
    const std::array<double, 3>& alice = {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0},
    const std::array<double, 3>& bob = {std::numbers::pi / 4.0, std::numbers::pi / 2.0, 3.0 * std::numbers::pi / 4.0}) {
  return {std::pair{alice[0], bob[0]}, std::pair{alice[0], bob[2]}, std::pair{alice[2], bob[0]},
          std::pair{alice[2], bob[2]}};
}

/// Empirical CHSH statistic |E₁ − E₂ + E₃ + E₄| from `samples` measured
/// pairs per correlator.
inline double chsh_estimate(std::size_t samples,
                            const std::array<std::pair<double, double>, 4>& pairs,
                            PairSource source, Rng& rng,
                            const std::array<double, 3>& eve_angles = {std::numbers::pi / 4.0, std::numbers::pi / 2.0,
                                                                       3.0 * std::numbers::pi / 4.0}) {
  if (samples < 1000) throw value_error("chsh_estimate: need at least 1000 samples");
  FdMorphism product = FdMorphism::from_rowmajor(4, 1, {1.0, 0.0, 0.0, 0.0});
  std::array<double, 4> corr{};
  for (std::size_t k = 0; k < 4; ++k) {
    const PVSpectrum a = angle_measurement(pairs[k].first);
    const PVSpectrum b = angle_measurement(pairs[k].second);
    long sum = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      FdMorphism state = source == PairSource::product_zero ? product : bell_pair();
      if (source == PairSource::intercept_resend)
        state = detail::intercept_resend(state, eve_angles[rng.uniform(3)], rng);
      const auto [ca, cb] = measure_pair(state, a, b, rng);
      sum += (ca == cb) ? 1 : -1;
    }
    corr[k] = static_cast<double>(sum) / static_cast<double>(samples);
  }
  return std::abs(corr[0] - corr[1] + corr[2] + corr[3]);
}

// --- the correctness equation ------------------------------------------------

// For a demolition spectrum m : X → C the two discarding composites out of
// (m_* ⊗ m) ∘ η_X agree and equal the dagger of the classical counit; this
// is exactly why Alice's kept bit always matches Bob's flipped bit.
inline CheckReport check_correctness_theorem(const PVSpectrum& m, double tol = kDefaultTol) {
  if (!hilb::check_pvm(m.p, tol).pass)
    throw value_error("check_correctness_theorem: m is not a demolition spectrum");
  const Dim x = m.p.cols();
  const Dim c = m.classical.dim;
  const auto cs_x = hilb::compact_structure(x);
  const auto cs_c = hilb::induced_compact(m.classical);

  const FdMorphism m_star = conjugate<HilbCat>(m.p, cs_x, cs_c);
  const FdMorphism pair = compose(tensor(m_star, m.p), cs_x.eta);  // I → C* ⊗ C
  const FdMorphism idc = FdMorphism::identity(c);

  const FdMorphism left = compose(HilbCat::left_unitor(c),
                                  compose(tensor(m.classical.epsilon, idc), pair));
  const FdMorphism right = compose(HilbCat::right_unitor(c),
                                   compose(tensor(idc, m.classical.epsilon), pair));
  const FdMorphism expected = m.classical.epsilon.dagger();

  const double dev = std::max({deviation(left, right), deviation(left, expected),
                               deviation(right, expected)});
  return CheckReport{dev <= tol, dev};
}

}  // namespace cataccess::qkd
