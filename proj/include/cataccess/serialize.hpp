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

#include <json.hpp>
#include <string>
#include <vector>

#include "cataccess/accessible.hpp"
#include "cataccess/errors.hpp"
#include "cataccess/fdhilb.hpp"
#include "cataccess/qkd.hpp"
#include "cataccess/rel.hpp"

// JSON forms of the wire-visible values. All emitters are deterministic
// (sorted labels, fixed key order from nlohmann's ordered maps) and round
// trips are exact.

namespace cataccess {

using json = nlohmann::json;

// --- relations: {source:[...], target:[...], pairs:[[s,t],...]} -----------

inline json to_json(const rel::Relation& r) {
  json pairs = json::array();
  for (const auto& [x, y] : r.pairs()) pairs.push_back(json::array({x, y}));
  return json{{"source", r.source().labels()}, {"target", r.target().labels()}, {"pairs", pairs}};
}

inline rel::Relation relation_from_json(const json& j) {
  try {
    rel::Carrier src(j.at("source").get<std::vector<std::string>>());
    rel::Carrier dst(j.at("target").get<std::vector<std::string>>());
    rel::Relation::PairSet pairs;
    for (const auto& p : j.at("pairs"))
      pairs.insert({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
    return rel::Relation(std::move(src), std::move(dst), std::move(pairs));
  } catch (const json::exception& e) {
    throw value_error(std::string("relation_from_json: ") + e.what());
  }
}

// --- matrices: {rows, cols, re:[...], im:[...]} row-major ------------------

inline json to_json(const hilb::FdMorphism& f) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < f.rows(); ++r)
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
      re.push_back(f.at(r, c).real());
      im.push_back(f.at(r, c).imag());
    }
  return json{{"rows", f.rows()}, {"cols", f.cols()}, {"re", re}, {"im", im}};
}

inline hilb::FdMorphism matrix_from_json(const json& j) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size() || static_cast<Eigen::Index>(re.size()) != rows * cols)
      throw value_error("matrix_from_json: entry count does not match shape");
    std::vector<hilb::Complex> entries(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) entries[i] = {re[i], im[i]};
    return hilb::FdMorphism::from_rowmajor(rows, cols, entries);
  } catch (const json::exception& e) {
    throw value_error(std::string("matrix_from_json: ") + e.what());
  }
}

// --- protocol transcripts ---------------------------------------------------

inline std::string bits_to_string(const std::vector<int>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline std::vector<int> bits_from_string(const std::string& s) {
  std::vector<int> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw value_error("bits_from_string: not a bit string");
    bits.push_back(c == '1');
  }
  return bits;
}

inline json to_json(const qkd::ProtocolTranscript& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds) {
    rounds.push_back(json{{"a", r.a},
                          {"b", r.b},
                          {"c", r.c},
                          {"c_prime", r.c_prime},
                          {"I", r.sift},
                          {"restart", r.restart}});
  }
  json j{{"round", rounds},
         {"key_alice", bits_to_string(t.key_alice)},
         {"key_bob", bits_to_string(t.key_bob)},
         {"depth", t.depth},
         {"seed", t.seed},
         {"terminated", t.terminated}};
  j["chsh"] = t.chsh ? json(*t.chsh) : json(nullptr);
  return j;
}

inline qkd::ProtocolTranscript transcript_from_json(const json& j) {
  try {
    qkd::ProtocolTranscript t;
    for (const auto& r : j.at("round")) {
      qkd::RoundRecord rec;
      rec.a = r.at("a").get<std::vector<int>>();
      rec.b = r.at("b").get<std::vector<int>>();
      rec.c = r.at("c").get<std::vector<int>>();
      rec.c_prime = r.at("c_prime").get<std::vector<int>>();
      rec.sift = r.at("I").get<std::vector<int>>();
      rec.restart = r.at("restart").get<bool>();
      t.rounds.push_back(std::move(rec));
    }
    t.key_alice = bits_from_string(j.at("key_alice").get<std::string>());
    t.key_bob = bits_from_string(j.at("key_bob").get<std::string>());
    t.depth = j.at("depth").get<std::size_t>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.terminated = j.at("terminated").get<bool>();
    if (!j.at("chsh").is_null()) t.chsh = j.at("chsh").get<double>();
    return t;
  } catch (const json::exception& e) {
    throw value_error(std::string("transcript_from_json: ") + e.what());
  }
}

// --- chain specs -------------------------------------------------------------
//
// {kind:"qkd-channel"} | {kind:"constant", category, object}
// | {kind:"explicit", category, levels:[...], steps:[...], stabilised_at?}

inline ChainDiagram<rel::RelCat> rel_chain_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
      rel::Carrier x(j.at("object").get<std::vector<std::string>>());
      return ChainDiagram<rel::RelCat>::constant(x);
    }
    if (kind == "explicit") {
      std::vector<rel::Carrier> levels;
      for (const auto& l : j.at("levels")) levels.emplace_back(l.get<std::vector<std::string>>());
      std::vector<rel::Relation> steps;
      for (const auto& s : j.at("steps")) steps.push_back(relation_from_json(s));
      std::optional<std::size_t> stab;
      if (j.contains("stabilised_at")) stab = j.at("stabilised_at").get<std::size_t>();
      return ChainDiagram<rel::RelCat>::from_levels(std::move(levels), std::move(steps), stab);
    }
    throw value_error("rel_chain_from_json: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw value_error(std::string("rel_chain_from_json: ") + e.what());
  }
}

inline ChainDiagram<hilb::HilbCat> hilb_chain_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "qkd-channel") return qkd::channel().chain;
    if (kind == "constant") {
      const auto dim = j.at("object").get<Eigen::Index>();
      return ChainDiagram<hilb::HilbCat>::constant(dim);
    }
    if (kind == "explicit") {
      std::vector<Eigen::Index> levels;
      for (const auto& l : j.at("levels")) levels.push_back(l.get<Eigen::Index>());
      std::vector<hilb::FdMorphism> steps;
      for (const auto& s : j.at("steps")) steps.push_back(matrix_from_json(s));
      std::optional<std::size_t> stab;
      if (j.contains("stabilised_at")) stab = j.at("stabilised_at").get<std::size_t>();
      return ChainDiagram<hilb::HilbCat>::from_levels(std::move(levels), std::move(steps), stab);
    }
    throw value_error("hilb_chain_from_json: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw value_error(std::string("hilb_chain_from_json: ") + e.what());
  }
}

}  // namespace cataccess
