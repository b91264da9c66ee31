// Exhaustive rule-space scans and the calibration that pins down the
// numbering convention and lookback window from reference anchor values.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifa/cycle.hpp"
#include "ifa/market.hpp"
#include "ifa/rule.hpp"

namespace ifa::scan {

// Anchor values the calibration must reproduce simultaneously:
//   A1 complex singles are exactly {54, 201}
//   A2 relabel(54) = 201
//   A3 rule 99 evolves all-UP with period 1
//   A4 single rule 52 has period 30
//   A5 pair (52, 99) has period 1588
//   A6 single rule 54 has period 889
struct Calibration {
  DigitConvention convention;
  int window = 0; // the w all anchors hold at
  std::map<std::string, bool> anchors;
  std::vector<std::string> equivalent_descriptions; // descriptor spellings with the same map
  int relabel_classes = 0;
  int relabel_fixed_points = 0;
  bool accepted = false;

  nlohmann::json to_json() const;
  static Calibration from_json(const nlohmann::json& j);
  std::string digest() const;
};

struct CalibrateOptions {
  int w_min = 8;
  int w_max = 12;
  bool include_polarity_candidates = true; // search UP=0 spellings too
};

struct CandidateTrace {
  std::string description;
  int best_window = 0;
  std::map<std::string, bool> best_anchors; // anchors at the best window
};

struct CalibrationOutcome {
  std::vector<Calibration> accepted;    // one per distinct effective map
  std::vector<CandidateTrace> rejected; // best partial match per failed candidate
  bool unique() const { return accepted.size() == 1; }
};

CalibrationOutcome calibrate(const CalibrateOptions& options = {});

// Loads a calibration.json and re-verifies nothing; callers trust the digest.
Calibration load_calibration(const std::filesystem::path& file);

// ---- single rules ---------------------------------------------------------

struct SingleRecord {
  std::uint64_t rule = 0;          // relabel-class representative (the smaller number)
  std::uint64_t partner = 0;       // relabel(rule)
  CycleReport report;              // representative's cycle
  long partner_period = 0;         // partner's own movement period
  bool behavior_uniform = false;   // partner period and preperiod match
};

// One record per relabel class.
std::vector<SingleRecord> scan_single(int window, const DigitConvention& conv);

// ---- rule pairs ------------------------------------------------------------

struct PairRecord {
  std::uint64_t rule1 = 0;
  std::uint64_t rule2 = 0;
  CycleReport report;
};

// All 256^2 ordered pairs; returns the complex ones (period >= threshold),
// ordered by (rule1, rule2).
std::vector<PairRecord> scan_pairs(int window, const DigitConvention& conv,
                                   long threshold = 889);

// ---- alternating window ----------------------------------------------------

struct AltWindowRecord {
  std::uint64_t rule = 0;
  CycleReport report;
};

// All 256 rules in alternating-window mode under one phase assignment.
std::vector<AltWindowRecord> scan_alt_window(int window, const DigitConvention& conv,
                                             bool odd_uses_longer, long threshold = 889);

// ---- multi-asset -----------------------------------------------------------

struct MultiScanParams {
  int assets = 2;
  int window = 12;
  int horizon = 100;
  std::uint64_t begin = 0;
  std::uint64_t end = 16777216; // exclusive
  std::uint64_t shard_size = 65536;
  long stop_after_shards = -1; // stop the run after this many newly computed shards
};

struct MultiPassRecord {
  std::uint64_t rule = 0;
  double correlation = 0;
  std::uint64_t dup_of = 0; // smallest passing rule with the identical evolution
};

struct MultiScanResult {
  MultiScanParams params;
  std::uint64_t evaluated = 0;
  std::vector<MultiPassRecord> passing; // ascending by rule
  std::uint64_t distinct_evolutions = 0;
  std::uint64_t distinct_relabel_classes = 0;
  // Alternative repetition reading, tallied alongside the primary one:
  // count of rules whose joint window state never repeats inside the horizon
  // (correlation clauses applied the same way).
  std::uint64_t alt_no_state_repeat = 0;
  long shards_total = 0;
  long shards_computed = 0; // this run (others loaded from checkpoints)
  bool complete = true;     // false when stopped early; outputs not merged
};

// Embarrassingly parallel scan over contiguous shards. Workers share nothing
// but the read-only convention; output is merged in shard order, so the bytes
// never depend on worker count or scheduling. Checkpoints (one JSON per
// shard, checksummed, written atomically) make kill/resume runs reproduce an
// uninterrupted run exactly.
MultiScanResult scan_multi(const MultiScanParams& params, const DigitConvention& conv,
                           int workers,
                           const std::optional<std::filesystem::path>& checkpoint_dir,
                           bool resume, const std::string& calibration_digest);

// Grouping of passing rules by identical joint evolution over the horizon;
// returns dup_of per rule plus the two group counts (evolution, relabel).
struct DedupInfo {
  std::vector<std::uint64_t> dup_of;
  std::uint64_t distinct_evolutions = 0;
  std::uint64_t distinct_relabel_classes = 0;
};
DedupInfo dedup_rules(const std::vector<std::uint64_t>& passing, const MultiScanParams& params,
                      const DigitConvention& conv);

} // namespace ifa::scan
