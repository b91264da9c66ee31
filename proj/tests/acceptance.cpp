// Acceptance suite: one line per criterion, each built from sub-checks that
// assert the reference values at their stated tolerances. Failing
// sub-checks print the measured value next to the reference one.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifa/cycle.hpp"
#include "ifa/io.hpp"
#include "ifa/market.hpp"
#include "ifa/rule.hpp"
#include "ifa/scan.hpp"
#include "ifa/stats.hpp"
#include "oracle.hpp"
#include "section3_table.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    notes.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
    if (!ok) pass = false;
  }
  void note(const std::string& what) { notes.push_back("       " + what); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string cli() {
  const char* env = std::getenv("IFA_CLI");
  return env ? env : "ifa";
}

int run_cli(const std::string& args) {
  const std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path work_dir() {
  static fs::path p = [] {
    fs::path d = fs::temp_directory_path() / "ifa_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

ifa::DigitConvention conv() { return ifa::DigitConvention{}; }

long single_period(std::uint64_t n, int w) {
  ifa::EvolveConfig cfg{ifa::EvolveMode::single, {n, 2, 2}, std::nullopt, w, 1, 0};
  return ifa::detect_cycle(cfg, conv()).period;
}

long pair_period(std::uint64_t a, std::uint64_t b, int w) {
  ifa::EvolveConfig cfg{ifa::EvolveMode::pair, {a, 2, 2}, ifa::RuleId{b, 2, 2}, w, 1, 0};
  return ifa::detect_cycle(cfg, conv()).period;
}

// ---------------------------------------------------------------- criterion 1
Criterion criterion1() {
  Criterion c{1, "calibration recovers the numbering convention and w"};
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = work_dir() / "calibrate";
  const int rc = run_cli("calibrate --out " + out.string() + " --force");
  c.check(rc == 0, "calibrate exits 0 (unique convention); got " + std::to_string(rc));
  ifa::scan::Calibration cal;
  try {
    cal = ifa::scan::load_calibration(out / "calibration.json");
  } catch (const std::exception& e) {
    c.check(false, std::string("calibration.json readable: ") + e.what());
    return c;
  }
  c.check(cal.window == 10, "calibrated lookback w = 10; got " + std::to_string(cal.window));
  for (const auto& [name, ok] : cal.anchors) c.check(ok, "anchor " + name + " passes");
  c.check(cal.anchors.size() == 6, "six anchors evaluated");
  // anchor values re-verified directly, exact integers
  c.check(ifa::relabel_states({54, 2, 2}, cal.convention).number == 201, "relabel(54) = 201");
  c.check(single_period(52, cal.window) == 30, "single rule 52 period 30");
  c.check(pair_period(52, 99, cal.window) == 1588, "pair (52,99) period 1588");
  c.check(single_period(54, cal.window) == 889, "single rule 54 period 889");
  {
    std::set<std::uint64_t> complex_rules;
    for (std::uint64_t n = 0; n < 256; n++)
      if (single_period(n, cal.window) >= (1l << cal.window) / 2) complex_rules.insert(n);
    c.check(complex_rules == std::set<std::uint64_t>{54, 201},
            "complex single rules are exactly {54, 201}");
  }
  c.note("relabel classes among 256 rules: " + std::to_string(cal.relabel_classes) +
         " (16 state-swap-symmetric tables make this 136, not 128)");
  const double dt = seconds_since(t0);
  c.check(dt < 60, "runtime < 1 minute (" + std::to_string(dt) + "s)");
  return c;
}

// ---------------------------------------------------------------- criterion 2
Criterion criterion2() {
  Criterion c{2, "pair scan reproduces the reference rule-pair table"};
  const auto t0 = std::chrono::steady_clock::now();
  const auto records = ifa::scan::scan_pairs(10, conv(), 889);
  std::map<std::pair<int, int>, long> found;
  for (const auto& r : records) found[{int(r.rule1), int(r.rule2)}] = r.report.period;

  int cells_ok = 0;
  for (const auto& cell : refdata::kReferencePairTable) {
    auto it = found.find({cell.rule1, cell.rule2});
    if (it != found.end() && it->second == cell.period) cells_ok++;
  }
  c.check(cells_ok == int(refdata::kReferencePairTable.size()),
          "all 62 readable reference-table cells matched exactly (" + std::to_string(cells_ok) +
              "/62, zero tolerance)");
  c.check(found.count({39, 54}) && found[{39, 54}] == 1022, "(39,54) present with period 1022");
  c.check(found[{54, 54}] == 889 && found[{201, 201}] == 889, "(54,54) = (201,201) = 889");
  c.check(records.size() == 68, "exactly 68 complex pairs; found " +
                                    std::to_string(records.size()));
  c.check(found.count({54, 39}) == 0,
          "(54,39) absent from the complex set; found with period " +
              (found.count({54, 39}) ? std::to_string(found[{54, 39}]) : std::string("-")));
  if (records.size() != 68) {
    c.note("the 12 pairs beyond the reference table, each confirmed by a 10,000-step");
    c.note("direct-comparison oracle:");
    std::set<std::pair<int, int>> reference;
    for (const auto& cell : refdata::kReferencePairTable)
      reference.insert({cell.rule1, cell.rule2});
    for (const auto& r : records)
      if (!reference.count({int(r.rule1), int(r.rule2)})) {
        // oracle confirmation
        ifa::Evolution evo =
            ifa::evolve_pair({r.rule1, 2, 2}, {r.rule2, 2, 2}, 10, 10000, conv());
        std::vector<int> mov(evo.movements.begin(), evo.movements.end());
        const oracle::QP qp = oracle::brute_force_cycle(mov, 2048);
        c.note("  (" + std::to_string(r.rule1) + "," + std::to_string(r.rule2) +
               ") period " + std::to_string(r.report.period) +
               (qp.p == r.report.period ? " [oracle agrees]" : " [ORACLE DISAGREES]"));
      }
  }
  const double dt = seconds_since(t0);
  c.check(dt < 300, "runtime < 5 minutes single-threaded (" + std::to_string(dt) + "s)");
  return c;
}

// ---------------------------------------------------------------- criterion 3
Criterion criterion3() {
  Criterion c{3, "alternating-window scan finds no complex rule"};
  const auto t0 = std::chrono::steady_clock::now();
  for (const bool longer_odd : {false, true}) {
    const auto records = ifa::scan::scan_alt_window(10, conv(), longer_odd, 889);
    int complex_count = 0;
    for (const auto& r : records)
      if (r.report.complex) complex_count++;
    c.check(records.size() == 256, "all 256 rules scanned");
    c.check(complex_count == 0, std::string("zero complex rules (phase: odd reads ") +
                                    (longer_odd ? "w+1" : "w") + ")");
  }
  const double dt = seconds_since(t0);
  c.check(dt < 60, "runtime < 1 minute (" + std::to_string(dt) + "s)");
  return c;
}

// ---------------------------------------------------------------- criterion 4
Criterion criterion4(fs::path* scan_csv_out) {
  Criterion c{4, "multi-asset scan over all 16,777,216 rules"};
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = work_dir() / "multi";
  const int rc = run_cli("--calibration " + (work_dir() / "calibrate" / "calibration.json").string() +
                         " scan multi --workers 8 --out " + out.string() + " --force");
  c.check(rc == 0, "scan multi exits 0; got " + std::to_string(rc));
  json man;
  try {
    man = json::parse(ifa::io::read_file(out / "manifest.json"));
  } catch (const std::exception& e) {
    c.check(false, std::string("manifest readable: ") + e.what());
    return c;
  }
  *scan_csv_out = out / "multi_pass.csv";
  const auto counts = man["counts"];
  c.check(counts["evaluated"].get<std::uint64_t>() == 16777216ull,
          "evaluated exactly 16,777,216 rules");
  const std::uint64_t passing = counts["passing"].get<std::uint64_t>();
  const std::uint64_t distinct = counts["distinct_evolutions"].get<std::uint64_t>();
  const bool exact = passing == 6266 && distinct == 3986;
  if (exact) {
    c.check(true, "reference counts 6,266 / 3,986 matched exactly");
  } else {
    c.note("reference counts 6,266 passing / 3,986 distinct not reproduced: measured " +
           std::to_string(passing) + " / " + std::to_string(distinct));
    // the criterion's fallback: both documented readings reported, closest adopted,
    // discrepancy recorded in the run manifest
    const bool both_readings = counts.contains("readings") &&
                               counts["readings"].contains("per_asset_visible_cycle") &&
                               counts["readings"].contains("joint_state_no_repeat");
    c.check(both_readings, "manifest reports counts under both documented readings");
    if (both_readings)
      c.note("  per_asset_visible_cycle = " +
             std::to_string(counts["readings"]["per_asset_visible_cycle"].get<std::uint64_t>()) +
             ", joint_state_no_repeat = " +
             std::to_string(counts["readings"]["joint_state_no_repeat"].get<std::uint64_t>()));
    c.check(counts.contains("adopted_reading"), "closest reading adopted in the manifest");
    c.check(counts.contains("discrepancy_note"), "discrepancy recorded in the manifest");
    c.note("relabel-class grouping (alternative dedup): " +
           std::to_string(counts["distinct_relabel_classes"].get<std::uint64_t>()));
  }
  const double dt = seconds_since(t0);
  c.check(dt < 1800, "runtime < 30 minutes with 8 workers (" + std::to_string(dt) + "s)");
  return c;
}

// ---------------------------------------------------------------- criterion 5
Criterion criterion5(const fs::path& scan_csv) {
  Criterion c{5, "stylized facts over the passing set (500-step paths)"};
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = work_dir() / "stats";
  const int rc = run_cli("--calibration " + (work_dir() / "calibrate" / "calibration.json").string() +
                         " stats --scan " + scan_csv.string() + " --out " + out.string() +
                         " --horizon 500 --rolling 50 --stride 25 --force");
  c.check(rc == 0, "stats exits 0; got " + std::to_string(rc));
  json man;
  try {
    man = json::parse(ifa::io::read_file(out / "manifest.json"));
  } catch (const std::exception& e) {
    c.check(false, std::string("manifest readable: ") + e.what());
    return c;
  }
  const auto counts = man["counts"];
  const double skew = counts["terminal_skewness"].get<double>();
  const double kurt = counts["terminal_kurtosis"].get<double>();
  c.check(std::abs(skew - (-0.39)) <= 0.05,
          "terminal-value skewness -0.39 +- 0.05; measured " + std::to_string(skew));
  c.check(std::abs(kurt - 5.2) <= 0.3,
          "terminal-value kurtosis 5.2 +- 0.3; measured " + std::to_string(kurt));

  const auto c500 = counts["corr_extremes_analysis_horizon"];
  const auto c100 = counts["corr_extremes_scan_horizon"];
  auto extremes_match = [](double lo, double hi) {
    return std::abs(lo - (-0.96)) <= 0.02 && std::abs(hi - 0.86) <= 0.02;
  };
  const bool m500 = extremes_match(c500[0].get<double>(), c500[1].get<double>());
  const bool m100 = extremes_match(c100[0].get<double>(), c100[1].get<double>());
  c.check(m500 || m100, "correlation extremes -0.96 / +0.86 (+-0.02) at some horizon");
  c.note("  extremes at 500 steps: [" + std::to_string(c500[0].get<double>()) + ", " +
         std::to_string(c500[1].get<double>()) + "]" + (m500 ? " (match)" : ""));
  c.note("  extremes at 100 steps: [" + std::to_string(c100[0].get<double>()) + ", " +
         std::to_string(c100[1].get<double>()) + "]" + (m100 ? " (match)" : ""));

  const double kmax_mov = counts["path_kurt_range_movements"][1].get<double>();
  const double kmax_lvl = counts["path_kurt_max_levels"].get<double>();
  c.check((kmax_mov >= 10 && kmax_mov <= 14) || (kmax_lvl >= 10 && kmax_lvl <= 14),
          "per-path kurtosis maximum in [10, 14]; movements " + std::to_string(kmax_mov) +
              ", price levels " + std::to_string(kmax_lvl));

  c.check(counts["terminals_at_bound"].get<std::uint64_t>() == 0,
          "no terminal value reaches +-500");

  const bool has_neg = counts.contains("spearman_negative");
  c.check(has_neg, "downturn analysis produced a negative-side rank correlation");
  if (has_neg) {
    const double sn = counts["spearman_negative"].get<double>();
    c.check(sn < 0, "negative-side Spearman < 0; measured " + std::to_string(sn));
    if (counts.contains("spearman_positive"))
      c.note("  positive-side Spearman: " +
             std::to_string(counts["spearman_positive"].get<double>()));
  }
  const double dt = seconds_since(t0);
  c.check(dt < 300, "runtime < 5 minutes (" + std::to_string(dt) + "s)");
  return c;
}

// ---------------------------------------------------------------- criterion 6
Criterion criterion6() {
  Criterion c{6, "property suites"};
  const auto t0 = std::chrono::steady_clock::now();

  // encode/decode roundtrip on 10,000 random rules
  {
    std::mt19937_64 rng(2024);
    bool ok = true;
    for (int i = 0; i < 10000; i++) {
      const std::uint64_t n = rng() % 256;
      if (ifa::encode_rule(ifa::decode_rule({n, 2, 2}, conv()), conv()).number != n) ok = false;
      const std::uint64_t m = rng() % ifa::RuleId{0, 2, 4}.rule_space();
      if (ifa::encode_rule(ifa::decode_rule({m, 2, 4}, conv()), conv()).number != m) ok = false;
    }
    c.check(ok, "encode/decode roundtrip on 10,000 random rules");
  }

  // relabel involution and behavior-equivalence, 256 rules x 100 random windows
  {
    bool involution = true;
    int equiv_violations = 0;
    std::mt19937_64 rng(7);
    std::vector<std::uint64_t> wins;
    for (int i = 0; i < 100; i++) wins.push_back(rng() & ((1u << 10) - 1));
    std::vector<std::uint64_t> offenders;
    for (std::uint64_t n = 0; n < 256; n++) {
      const std::uint64_t r = ifa::relabel_states({n, 2, 2}, conv()).number;
      if (ifa::relabel_states({r, 2, 2}, conv()).number != n) involution = false;
      const ifa::TransitionTable a = ifa::decode_rule({n, 2, 2}, conv());
      const ifa::TransitionTable b = ifa::decode_rule({r, 2, 2}, conv());
      for (const std::uint64_t w : wins)
        if (a.evaluate_packed(w, 10, 1) != b.evaluate_packed(w, 10, 1)) {
          equiv_violations++;
          if (offenders.size() < 4) offenders.push_back(n);
          break;
        }
    }
    c.check(involution, "relabel is an involution on all 256 rules");
    c.check(equiv_violations == 0,
            "relabel behavior-equivalence on all 256 rules x 100 random windows; " +
                std::to_string(equiv_violations) + " rules disagree with their relabel");
    if (equiv_violations > 0) {
      std::string s = "  first offenders:";
      for (const std::uint64_t n : offenders)
        s += " " + std::to_string(n) + "<->" +
             std::to_string(ifa::relabel_states({n, 2, 2}, conv()).number);
      c.note(s);
      c.note("  the start state stays pinned at 1, so swapping state labels is only");
      c.note("  behavior-preserving for tables whose next state ignores the current state");
    }
  }

  // cycle detector equals the brute-force oracle, all 256 rules, w in 2..6
  {
    bool ok = true;
    for (int w = 2; w <= 6 && ok; w++) {
      const long kw = 1l << w;
      for (std::uint64_t n = 0; n < 256; n++) {
        ifa::Evolution evo = ifa::evolve_single({n, 2, 2}, w, int(3 * kw), conv());
        std::vector<int> mov(evo.movements.begin(), evo.movements.end());
        const oracle::QP expect = oracle::brute_force_cycle(mov, kw);
        ifa::EvolveConfig cfg{ifa::EvolveMode::single, {n, 2, 2}, std::nullopt, w, 1, 0};
        const ifa::CycleReport got = ifa::detect_cycle(cfg, conv());
        if (got.period != expect.p || got.preperiod != expect.q) {
          ok = false;
          break;
        }
      }
    }
    c.check(ok, "cycle detector equals the brute-force oracle (256 rules x w in {2..6})");
  }

  // moments / pearson affine invariance to 1e-9
  {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    bool ok = true;
    for (int trial = 0; trial < 50; trial++) {
      std::vector<double> xs, ys;
      for (int i = 0; i < 500; i++) {
        xs.push_back(g(rng) * (1 + 0.1 * (i % 7)));
        ys.push_back(g(rng) + 0.2 * xs.back());
      }
      const auto m0 = ifa::stats::moments(xs);
      std::vector<double> zs(xs);
      for (auto& v : zs) v = 4.75 * v - 3;
      const auto m1 = ifa::stats::moments(zs);
      if (std::abs(m0.skewness - m1.skewness) > 1e-9) ok = false;
      if (std::abs(m0.kurtosis - m1.kurtosis) > 1e-9) ok = false;
      std::vector<double> yt(ys);
      for (auto& v : yt) v = 0.5 * v + 9;
      if (std::abs(ifa::stats::pearson(xs, ys) - ifa::stats::pearson(xs, yt)) > 1e-9) ok = false;
    }
    c.check(ok, "moments and pearson affine invariance to 1e-9");
  }

  // parallel determinism and kill/resume byte-equality on a 65,536-rule shard
  {
    const fs::path d1 = work_dir() / "det1", d8 = work_dir() / "det8";
    const std::string calarg =
        "--calibration " + (work_dir() / "calibrate" / "calibration.json").string();
    const std::string range = " scan multi --begin 0 --end 65536 --shard-size 8192 ";
    int rc1 = run_cli(calarg + range + "--workers 1 --out " + d1.string() + " --force");
    int rc8 = run_cli(calarg + range + "--workers 8 --out " + d8.string() + " --force");
    const bool both = rc1 == 0 && rc8 == 0;
    bool identical = false;
    if (both)
      identical = ifa::io::read_file(d1 / "multi_pass.csv") ==
                  ifa::io::read_file(d8 / "multi_pass.csv");
    c.check(both && identical, "1-worker and 8-worker scans produce byte-identical output");

    // interrupted run: a hard kill mid-scan, then resume from checkpoints
    const fs::path ck = work_dir() / "ck", d3 = work_dir() / "det_resume";
    fs::create_directories(ck);
    const std::string killcmd = "timeout -s KILL 0.4 " + cli() + " " + calarg + range +
                                "--workers 2 --checkpoint-dir " + ck.string() + " --out " +
                                d3.string() + " --force > /dev/null 2>&1";
    (void)std::system(killcmd.c_str());
    const int rcr = run_cli(calarg + range + "--workers 2 --checkpoint-dir " + ck.string() +
                            " --resume --out " + d3.string() + " --force");
    bool resumed_ok = rcr == 0;
    bool resume_identical = false;
    if (resumed_ok && both)
      resume_identical = ifa::io::read_file(d3 / "multi_pass.csv") ==
                         ifa::io::read_file(d1 / "multi_pass.csv");
    c.check(resumed_ok && resume_identical,
            "kill + resume reproduces the uninterrupted output byte-for-byte");
  }

  const double dt = seconds_since(t0);
  c.check(dt < 300, "total runtime < 5 minutes (" + std::to_string(dt) + "s)");
  return c;
}

} // namespace

int main() {
  std::vector<Criterion> results;
  fs::path scan_csv;
  results.push_back(criterion1());
  results.push_back(criterion2());
  results.push_back(criterion3());
  results.push_back(criterion4(&scan_csv));
  results.push_back(criterion5(scan_csv));
  results.push_back(criterion6());

  int failed = 0;
  std::cout << "\n================ acceptance summary ================\n";
  for (const auto& c : results) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": " << c.title
              << "\n";
    for (const auto& n : c.notes) std::cout << n << "\n";
    if (!c.pass) failed++;
  }
  std::cout << "====================================================\n";
  std::cout << (failed == 0 ? "all criteria passed\n"
                            : std::to_string(failed) + " criterion(s) failed\n");
  return failed == 0 ? 0 : 1;
}
