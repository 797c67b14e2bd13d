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

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cataccess/qkd.hpp"
#include "cataccess/serialize.hpp"
#include "cataccess/suites.hpp"

// Command line front end. JSON goes to stdout, diagnostics to stderr
// (suppressed by --quiet); exit codes are part of the interface:
//   0 success / all checks pass      1 check failure or non-termination
//   2 usage error or unknown suite   3 key mismatch
//   4 unreadable, unwritable or malformed file

namespace cataccess::cli {

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("CATACCESS_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      return 0;
    }
  }
  return 0;
}

inline int cmd_check(const std::string& suite, std::uint64_t seed, double tol, bool quiet,
                     std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> known{"all",        "compact",   "factorisation",
                                              "accessible", "classical", "qkd"};
  if (std::find(known.begin(), known.end(), suite) == known.end()) {
    err << "unknown suite '" << suite << "'\n";
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();
  const auto results = suites::run_suite(suite, seed, tol);
  const auto wall =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                            start);
  json checks = json::array();
  bool all_pass = true;
  std::size_t passed = 0;
  for (const auto& r : *results) {
    checks.push_back(json{{"name", r.name},
                          {"status", r.pass ? "pass" : "fail"},
                          {"max_deviation", r.deviation}});
    all_pass = all_pass && r.pass;
    passed += r.pass;
  }
  json report{{"suite", suite},
              {"seed", seed},
              {"tol", tol},
              {"status", all_pass ? "pass" : "fail"},
              {"checks", checks}};
  out << report.dump(2) << "\n";
  if (!quiet)
    err << "suite " << suite << ": " << passed << "/" << results->size() << " checks passed in "
        << wall.count() << " ms\n";
  return all_pass ? 0 : 1;
}

inline int cmd_qkd_run(int n, std::uint64_t seed, int rounds, bool eavesdrop,
                       const std::string& out_path, bool quiet, std::ostream& out,
                       std::ostream& err) {
  qkd::ProtocolConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  cfg.max_rounds = rounds;
  cfg.eavesdrop = eavesdrop;
  const auto transcript = qkd::run_protocol(cfg);
  const std::string text = to_json(transcript).dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f || !(f << text) || (f.flush(), !f)) {
      err << "cannot write transcript to '" << out_path << "'\n";
      return 4;
    }
  }
  if (!quiet)
    err << "qkd run: " << (transcript.terminated ? "terminated" : "did not terminate") << " after "
        << transcript.rounds.size() << " round(s), key length " << transcript.key_alice.size()
        << "\n";
  if (!transcript.terminated) return 1;
  return transcript.keys_match() ? 0 : 3;
}

inline int cmd_report(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "cannot read '" << path << "'\n";
    return 4;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  qkd::ProtocolTranscript t;
  try {
    t = transcript_from_json(json::parse(buf.str()));
  } catch (const std::exception& e) {
    err << "malformed transcript: " << e.what() << "\n";
    return 4;
  }
  std::size_t restarts = 0;
  for (const auto& r : t.rounds) restarts += r.restart;
  out << "rounds:        " << t.rounds.size() << " (" << restarts << " restart(s))\n";
  out << "key length:    alice " << t.key_alice.size() << ", bob " << t.key_bob.size() << "\n";
  out << "channel depth: " << t.depth << "\n";
  out << "seed:          " << t.seed << "\n";
  if (t.chsh)
    out << "chsh:          " << *t.chsh << "\n";
  else
    out << "chsh:          n/a\n";
  if (!t.terminated) {
    out << "agreement:     NOT TERMINATED\n";
    return 0;
  }
  if (!t.keys_match()) {
    out << "agreement:     MISMATCH\n";
    return 3;
  }
  out << "agreement:     keys agree\n";
  return 0;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"compactly accessible categories at desk scale"};
  app.require_subcommand(0, 1);

  std::string suite = "all";
  std::uint64_t seed = default_seed();
  double tol = kDefaultTol;
  bool quiet = false;

  auto* check = app.add_subcommand("check", "run a verification suite");
  check->add_option("--suite", suite, "all|compact|factorisation|accessible|classical|qkd");
  check->add_option("--seed", seed, "rng seed (default: CATACCESS_SEED or 0)");
  check->add_option("--tol", tol, "numerical tolerance");
  check->add_flag("--quiet", quiet, "suppress diagnostics");

  int n = 1;
  int rounds = 8;
  bool eavesdrop = false;
  std::string out_path;
  std::string report_path;

  auto* qkd_cmd = app.add_subcommand("qkd", "key distribution protocol tools");
  auto* qkd_run = qkd_cmd->add_subcommand("run", "run the protocol once");
  qkd_run->add_option("--n", n, "block parameter; 3n pairs per round")
      ->check(CLI::PositiveNumber);
  qkd_run->add_option("--seed", seed, "rng seed (default: CATACCESS_SEED or 0)");
  qkd_run->add_option("--rounds", rounds, "maximum rounds before giving up");
  qkd_run->add_flag("--eavesdrop", eavesdrop, "insert an intercept-resend eavesdropper");
  qkd_run->add_option("--out", out_path, "write the transcript to this path");
  qkd_run->add_flag("--quiet", quiet, "suppress diagnostics");

  auto* report = app.add_subcommand("report", "summarise a transcript file");
  report->add_option("path", report_path, "transcript JSON path")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (check->parsed()) return cmd_check(suite, seed, tol, quiet, out, err);
    if (qkd_cmd->parsed()) {
      if (!qkd_run->parsed()) {
        err << "usage: qkd run [options]\n";
        return 2;
      }
      return cmd_qkd_run(n, seed, rounds, eavesdrop, out_path, quiet, out, err);
    }
    if (report->parsed()) return cmd_report(report_path, out, err);
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  out << app.help();
  return 2;
}

}  // namespace cataccess::cli
