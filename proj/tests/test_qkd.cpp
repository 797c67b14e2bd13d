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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "cataccess/instances.hpp"
#include "cataccess/qkd.hpp"
#include "cataccess/rng.hpp"
#include "cataccess/serialize.hpp"

using namespace cataccess;
using hilb::FdMorphism;
using hilb::HilbCat;
using hilb::Matrix;

namespace {

constexpr double pi = std::numbers::pi;

// Independent Born-rule oracle: projectors assembled directly from the
// measurement direction, expectation by explicit quadratic form.
Matrix oracle_projector(double theta, int outcome) {
  Eigen::Vector2cd u;
  if (outcome == 0)
    u << std::cos(theta / 2.0), std::sin(theta / 2.0);
  else
    u << -std::sin(theta / 2.0), std::cos(theta / 2.0);
  return u * u.adjoint();
}

double oracle_joint(const Matrix& state, double a, int i, double b, int j) {
  Matrix pa = oracle_projector(a, i);
  Matrix pb = oracle_projector(b, j);
  Matrix joint(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) joint.block(2 * r, 2 * c, 2, 2) = pa(r, c) * pb;
  return (state.adjoint() * joint * state)(0, 0).real();
}

double oracle_correlator(const Matrix& state, double a, double b) {
  double e = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e += ((i == j) ? 1.0 : -1.0) * oracle_joint(state, a, i, b, j);
  return e;
}

// Ensemble correlator after an intercept-resend attack at angle e.
double oracle_intercept_correlator(const Matrix& state, double a, double b, double e) {
  double corr = 0.0;
  for (int eps = 0; eps < 2; ++eps) {
    Matrix collapse(4, 4);
    Matrix pe = oracle_projector(e, eps);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        collapse.block(2 * r, 2 * c, 2, 2) = (r == c ? 1.0 : 0.0) * pe;
    Matrix branch = collapse * state;
    const double weight = branch.squaredNorm();
    if (weight < 1e-15) continue;
    branch /= std::sqrt(weight);
    corr += weight * oracle_correlator(branch, a, b);
  }
  return corr;
}

}  // namespace

TEST_CASE("the shared pair state is the singlet") {
  const auto s = qkd::bell_pair();
  const double inv = 1.0 / std::sqrt(2.0);
  CHECK(s.approx_eq(FdMorphism::from_rowmajor(4, 1, {0.0, inv, -inv, 0.0})));
  CHECK(s.norm() == Catch::Approx(1.0));
  // antisymmetry under the swap
  CHECK(compose(HilbCat::symmetry(2, 2), s).approx_eq(FdMorphism(-s.matrix())));
}

TEST_CASE("the pair-store chain") {
  const auto ch = qkd::channel();
  CHECK(ch.chain.object(0) == 1);
  CHECK(ch.chain.object(1) == 4);
  CHECK(ch.chain.object(3) == 64);
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(hilb::in_M(ch.chain.step(n)));
    // connecting maps are isometries
    const auto st = ch.chain.step(n);
    CHECK(compose(st.dagger(), st).approx_eq(FdMorphism::identity(st.cols())));
  }
  CHECK(ch.ledger_scale(2) == Catch::Approx(2.0));  // √2 per level
}

TEST_CASE("drawing from a truncation") {
  qkd::ChannelState st(2);
  auto [s1, r1] = st.draw();
  auto [s2, r2] = r1.draw();
  CHECK(s1 != s2);
  CHECK(r2.remaining() == 0);
  CHECK_THROWS_AS(r2.draw(), exhausted_error);

  SECTION("draw then re-attach is the identity, exactly") {
    CHECK(r1.attach(s1) == st);
    CHECK(r2.attach(s2).attach(s1) == st);
  }

  SECTION("re-truncating keeps consumed slots consumed") {
    const auto grown = r2.grown(5);
    CHECK(grown.remaining() == 3);
    CHECK(grown.depth() == 5);
    CHECK_THROWS_AS(r2.grown(2), value_error);
  }
}

TEST_CASE("joint measurement probabilities") {
  const auto z = qkd::angle_measurement(0.0);

  SECTION("matched bases are perfectly anticorrelated") {
    for (double theta : {0.0, pi / 4.0, 1.1, pi / 2.0}) {
      const auto m = qkd::angle_measurement(theta);
      const auto p = qkd::joint_probabilities(qkd::bell_pair(), m, m);
      CHECK(p[0] == Catch::Approx(0.0).margin(1e-12));
      CHECK(p[3] == Catch::Approx(0.0).margin(1e-12));
      CHECK(p[1] == Catch::Approx(0.5).margin(1e-12));
      CHECK(p[2] == Catch::Approx(0.5).margin(1e-12));
    }
  }

  SECTION("product state in the computational basis is deterministic") {
    const auto zero_zero = FdMorphism::from_rowmajor(4, 1, {1.0, 0.0, 0.0, 0.0});
    const auto p = qkd::joint_probabilities(zero_zero, z, z);
    CHECK(p[0] == Catch::Approx(1.0));
    Rng rng(2);
    for (int i = 0; i < 10; ++i) CHECK(qkd::measure_pair(zero_zero, z, z, rng) ==
                                       std::pair<int, int>{0, 0});
  }

  SECTION("probabilities match the independent oracle at arbitrary angles") {
    Rng rng(3);
    for (int i = 0; i < 25; ++i) {
      const double a = rng.uniform(0.0, 2.0 * pi);
      const double b = rng.uniform(0.0, 2.0 * pi);
      const auto p = qkd::joint_probabilities(qkd::bell_pair(), qkd::angle_measurement(a),
                                              qkd::angle_measurement(b));
      double total = 0.0;
      for (int o = 0; o < 4; ++o) {
        const double expect = oracle_joint(qkd::bell_pair().matrix(), a, o / 2, b, o % 2);
        CHECK(p[static_cast<std::size_t>(o)] == Catch::Approx(expect).margin(1e-12));
        total += p[static_cast<std::size_t>(o)];
      }
      CHECK(total == Catch::Approx(1.0));
      // singlet correlator closed form
      CHECK(oracle_correlator(qkd::bell_pair().matrix(), a, b) ==
            Catch::Approx(-std::cos(a - b)).margin(1e-12));
    }
  }

  SECTION("non-normalised states are rejected") {
    const auto bad = FdMorphism::from_rowmajor(4, 1, {1.0, 1.0, 0.0, 0.0});
    CHECK_THROWS_AS(qkd::joint_probabilities(bad, z, z), value_error);
  }
}

TEST_CASE("protocol runs") {
  SECTION("a seeded run terminates with matching keys") {
    qkd::ProtocolConfig cfg;
    cfg.n = 1;
    cfg.seed = 2026;
    const auto t = qkd::run_protocol(cfg);
    REQUIRE(t.terminated);
    CHECK(t.keys_match());
    const auto& last = t.rounds.back();
    CHECK(t.key_alice.size() == 3 - last.sift.size());
    // Bob's flip: his announced bits complement his key bits on kept indices
    std::size_t k = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (last.a[i] == last.b[i]) {
        CHECK(t.key_alice[k] == last.c[i]);
        CHECK(t.key_bob[k] == 1 - last.c_prime[i]);
        ++k;
      }
    }
  }

  SECTION("kept indices are exactly the complement of the announced set") {
    qkd::ProtocolConfig cfg;
    cfg.n = 2;
    const auto batch = qkd::run_protocol_batch(cfg, 100);
    for (const auto& t : batch) {
      for (const auto& r : t.rounds) {
        std::vector<int> expect;
        for (std::size_t i = 0; i < r.a.size(); ++i)
          if (r.a[i] != r.b[i]) expect.push_back(static_cast<int>(i) + 1);
        CHECK(r.sift == expect);
        if (!r.restart) CHECK(r.a.size() - r.sift.size() == t.key_alice.size());
      }
      if (t.terminated) CHECK(t.keys_match());
    }
  }

  SECTION("forcing both parties onto one basis keeps everything") {
    qkd::ProtocolConfig cfg;
    cfg.n = 2;
    cfg.force_basis = 1;
    const auto t = qkd::run_protocol(cfg);
    REQUIRE(t.terminated);
    CHECK(t.rounds.size() == 1);
    CHECK(t.rounds[0].sift.empty());
    CHECK(t.key_alice.size() == 6);
    CHECK(t.keys_match());
  }

  SECTION("zero rounds means non-termination, reported not hidden") {
    qkd::ProtocolConfig cfg;
    cfg.max_rounds = 0;
    const auto t = qkd::run_protocol(cfg);
    CHECK_FALSE(t.terminated);
    CHECK(t.rounds.empty());
  }

  SECTION("invalid block parameter is rejected") {
    qkd::ProtocolConfig cfg;
    cfg.n = 0;
    CHECK_THROWS_AS(qkd::run_protocol(cfg), value_error);
  }

  SECTION("the truncation depth grows across restarts") {
    qkd::ProtocolConfig cfg;
    cfg.n = 4;
    cfg.seed = 5;
    const auto batch = qkd::run_protocol_batch(cfg, 50);
    for (const auto& t : batch) {
      std::size_t restarts = 0;
      for (const auto& r : t.rounds) restarts += r.restart;
      if (restarts > 0) CHECK(t.depth > 12);
      CHECK(t.depth >= 12);
    }
  }

  SECTION("batches are deterministic and scheduling independent") {
    qkd::ProtocolConfig cfg;
    cfg.n = 1;
    cfg.seed = 99;
    const auto a = qkd::run_protocol_batch(cfg, 40, 1);
    const auto b = qkd::run_protocol_batch(cfg, 40, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());
  }

  SECTION("an eavesdropper leaves a well-formed transcript") {
    qkd::ProtocolConfig cfg;
    cfg.n = 2;
    cfg.seed = 31;
    cfg.eavesdrop = true;
    const auto t = qkd::run_protocol(cfg);
    if (t.terminated) CHECK(t.key_alice.size() == t.key_bob.size());
  }
}

TEST_CASE("chsh estimation") {
  Rng rng(12345);

  SECTION("sample size precondition") {
    CHECK_THROWS_AS(
        qkd::chsh_estimate(10, qkd::standard_chsh_pairs(), qkd::PairSource::singlet, rng),
        value_error);
  }

  SECTION("the singlet at the standard angles reaches 2*sqrt(2)") {
    // oracle first: the four analytic correlators
    const auto pairs = qkd::standard_chsh_pairs();
    const auto state = qkd::bell_pair().matrix();
    const double oracle = std::abs(
        oracle_correlator(state, pairs[0].first, pairs[0].second) -
        oracle_correlator(state, pairs[1].first, pairs[1].second) +
        oracle_correlator(state, pairs[2].first, pairs[2].second) +
        oracle_correlator(state, pairs[3].first, pairs[3].second));
    CHECK(oracle == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-12));

    const double s = qkd::chsh_estimate(30000, pairs, qkd::PairSource::singlet, rng);
    CHECK(s == Catch::Approx(oracle).margin(0.05));
  }

  SECTION("a product state stays classical") {
    Matrix prod = Matrix::Zero(4, 1);
    prod(0, 0) = 1.0;
    const auto pairs = qkd::standard_chsh_pairs();
    const double oracle = std::abs(
        oracle_correlator(prod, pairs[0].first, pairs[0].second) -
        oracle_correlator(prod, pairs[1].first, pairs[1].second) +
        oracle_correlator(prod, pairs[2].first, pairs[2].second) +
        oracle_correlator(prod, pairs[3].first, pairs[3].second));
    CHECK(oracle <= 2.0 + 1e-12);
    const double s = qkd::chsh_estimate(20000, pairs, qkd::PairSource::product_zero, rng);
    CHECK(s <= 2.0 + 5.0 * 2.0 / std::sqrt(20000.0));
    CHECK(s == Catch::Approx(oracle).margin(0.06));
  }

  SECTION("intercept-resend degrades the statistic to the oracle value") {
    const auto pairs = qkd::standard_chsh_pairs();
    const std::array<double, 3> eve{pi / 4.0, pi / 2.0, 3.0 * pi / 4.0};
    const auto state = qkd::bell_pair().matrix();
    double combo[4];
    for (int k = 0; k < 4; ++k) {
      combo[k] = 0.0;
      for (double e : eve)
        combo[k] += oracle_intercept_correlator(state, pairs[static_cast<std::size_t>(k)].first,
                                                pairs[static_cast<std::size_t>(k)].second, e) /
                    3.0;
    }
    const double oracle = std::abs(combo[0] - combo[1] + combo[2] + combo[3]);
    CHECK(oracle < 2.0);

    const double s =
        qkd::chsh_estimate(30000, pairs, qkd::PairSource::intercept_resend, rng, eve);
    CHECK(s == Catch::Approx(oracle).margin(0.06));
    CHECK(s < 2.0);
  }
}

TEST_CASE("the correctness equation") {
  SECTION("identity spectrum on the bit") {
    const auto m = hilb::pv_spectrum(FdMorphism::identity(2), hilb::classical_structure(2));
    const auto rep = qkd::check_correctness_theorem(m);
    CHECK(rep.pass);
    CHECK(rep.deviation <= 1e-12);
    // both composites equal the dagger of the deleting map, entrywise ones
    const auto cs_x = hilb::compact_structure(2);
    const auto cs_c = hilb::induced_compact(m.classical);
    const auto pairv = compose(tensor(conjugate<HilbCat>(m.p, cs_x, cs_c), m.p), cs_x.eta);
    const auto left = compose(tensor(m.classical.epsilon, FdMorphism::identity(2)), pairv);
    CHECK(left.approx_eq(FdMorphism::from_rowmajor(2, 1, {1.0, 1.0})));
  }

  SECTION("random demolition spectra") {
    Rng rng(17);
    for (int i = 0; i < 30; ++i) {
      const hilb::Dim c = 2 + static_cast<hilb::Dim>(rng.uniform(2));
      const hilb::Dim x = c + static_cast<hilb::Dim>(rng.uniform(3));
      const auto p = instances::random_coisometry(rng, c, x);
      const auto m = hilb::pv_spectrum(p, hilb::classical_structure(c));
      const auto rep = qkd::check_correctness_theorem(m);
      CHECK(rep.pass);
      CHECK(rep.deviation <= 1e-9);
    }
  }

  SECTION("failing the spectrum condition is a precondition error") {
    const qkd::PVSpectrum bad{FdMorphism::from_rowmajor(2, 2, {1.0, 1.0, 0.0, 0.0}),
                              hilb::classical_structure(2)};
    CHECK_THROWS_AS(qkd::check_correctness_theorem(bad), value_error);
  }
}

TEST_CASE("transcript JSON round trip") {
  qkd::ProtocolConfig cfg;
  cfg.n = 2;
  cfg.seed = 7;
  const auto t = qkd::run_protocol(cfg);
  const auto j = to_json(t);
  CHECK(j.at("key_alice").is_string());
  CHECK(j.at("chsh").is_null());
  const auto back = transcript_from_json(j);
  CHECK(to_json(back).dump() == j.dump());
  CHECK(back.key_alice == t.key_alice);
  CHECK(back.seed == t.seed);

  CHECK_THROWS_AS(transcript_from_json(json::parse(R"({"round":[]})")), value_error);
}
