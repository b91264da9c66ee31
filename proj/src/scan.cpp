#include "ifa/scan.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

#include "ifa/io.hpp"

namespace ifa::scan {

namespace {

const char* kAnchorNames[6] = {"A1", "A2", "A3", "A4", "A5", "A6"};

std::vector<DigitConvention> candidate_conventions(bool include_polarity) {
  std::vector<DigitConvention> all;
  for (int pm = 0; pm < 2; pm++)
    for (int sa = 0; sa < 2; sa++)
      for (int ia = 0; ia < 2; ia++)
        for (int cs = 0; cs < 2; cs++)
          for (int mf = 0; mf < 2; mf++)
            for (int up = include_polarity ? 0 : 1; up < 2; up++)
              all.push_back({pm != 0, sa != 0, ia != 0, cs != 0, mf != 0, up});
  return all;
}

long movement_period(const RuleId& rule, int w, const DigitConvention& conv) {
  EvolveConfig cfg{EvolveMode::single, rule, std::nullopt, w, 1, 0};
  return detect_cycle(cfg, conv).period;
}

long pair_period(std::uint64_t r1, std::uint64_t r2, int w, const DigitConvention& conv) {
  EvolveConfig cfg{EvolveMode::pair, {r1, 2, 2}, RuleId{r2, 2, 2}, w, 1, 0};
  return detect_cycle(cfg, conv).period;
}

std::map<std::string, bool> check_anchors(const DigitConvention& conv, int w) {
  std::map<std::string, bool> a;
  for (const char* n : kAnchorNames) a[n] = false;

  a["A2"] = relabel_states({54, 2, 2}, conv).number == 201;
  if (!a["A2"]) return a;
  a["A6"] = movement_period({54, 2, 2}, w, conv) == 889;
  if (!a["A6"]) return a;
  a["A4"] = movement_period({52, 2, 2}, w, conv) == 30;
  a["A5"] = pair_period(52, 99, w, conv) == 1588;

  // rule 99's evolution stays all-UP: the all-buy window is a fixed point
  // producing the UP action.
  {
    TransitionTable t99 = decode_rule({99, 2, 2}, conv);
    Window up = Window::all_up(w, 1, conv.up_action);
    const int act = t99.evaluate_packed(up.packed(), w, up.bits_per_symbol());
    a["A3"] = act == conv.up_action && up.pushed(act) == up;
  }

  // exactly {54, 201} complex among all 256 rules
  {
    bool ok = a["A4"] && a["A5"] && a["A3"];
    if (ok) {
      const long threshold = (1l << w) / 2;
      for (std::uint64_t n = 0; n < 256 && ok; n++) {
        const bool cx = movement_period({n, 2, 2}, w, conv) >= threshold;
        if (cx != (n == 54 || n == 201)) ok = false;
      }
      a["A1"] = ok;
    }
  }
  return a;
}

int count_passed(const std::map<std::string, bool>& a) {
  int c = 0;
  for (const auto& [k, v] : a)
    if (v) c++;
  return c;
}

void relabel_stats(const DigitConvention& conv, int* classes, int* fixed) {
  std::set<std::uint64_t> reps;
  int fx = 0;
  for (std::uint64_t n = 0; n < 256; n++) {
    const std::uint64_t r = relabel_states({n, 2, 2}, conv).number;
    if (r == n) fx++;
    reps.insert(std::min(n, r));
  }
  *classes = int(reps.size());
  *fixed = fx;
}

} // namespace

nlohmann::json Calibration::to_json() const {
  nlohmann::json j;
  j["convention"] = {
      {"state_major_pairs", convention.state_major_pairs},
      {"states_ascending", convention.states_ascending},
      {"inputs_ascending", convention.inputs_ascending},
      {"state_major_digits", convention.state_major_digits},
      {"most_significant_first", convention.most_significant_first},
      {"up_action", convention.up_action},
  };
  j["window"] = window;
  j["anchors"] = anchors;
  j["equivalent_descriptions"] = equivalent_descriptions;
  j["relabel_classes"] = relabel_classes;
  j["relabel_fixed_points"] = relabel_fixed_points;
  j["accepted"] = accepted;
  j["map_fingerprint"] = io::hex64(convention.fingerprint());
  return j;
}

Calibration Calibration::from_json(const nlohmann::json& j) {
  Calibration c;
  const auto& cv = j.at("convention");
  c.convention.state_major_pairs = cv.at("state_major_pairs").get<bool>();
  c.convention.states_ascending = cv.at("states_ascending").get<bool>();
  c.convention.inputs_ascending = cv.at("inputs_ascending").get<bool>();
  c.convention.state_major_digits = cv.at("state_major_digits").get<bool>();
  c.convention.most_significant_first = cv.at("most_significant_first").get<bool>();
  c.convention.up_action = cv.at("up_action").get<int>();
  c.window = j.at("window").get<int>();
  if (j.contains("anchors")) c.anchors = j.at("anchors").get<std::map<std::string, bool>>();
  if (j.contains("equivalent_descriptions"))
    c.equivalent_descriptions = j.at("equivalent_descriptions").get<std::vector<std::string>>();
  if (j.contains("relabel_classes")) c.relabel_classes = j.at("relabel_classes").get<int>();
  if (j.contains("relabel_fixed_points"))
    c.relabel_fixed_points = j.at("relabel_fixed_points").get<int>();
  c.accepted = j.value("accepted", false);
  return c;
}

std::string Calibration::digest() const { return io::hex64(io::fnv1a64(to_json().dump())); }

CalibrationOutcome calibrate(const CalibrateOptions& options) {
  CalibrationOutcome out;
  std::map<std::uint64_t, Calibration> accepted_by_map;

  for (const DigitConvention& conv : candidate_conventions(options.include_polarity_candidates)) {
    CandidateTrace trace;
    trace.description = conv.describe();
    bool any = false;
    for (int w = options.w_min; w <= options.w_max; w++) {
      auto anchors = check_anchors(conv, w);
      if (count_passed(anchors) > count_passed(trace.best_anchors)) {
        trace.best_anchors = anchors;
        trace.best_window = w;
      }
      if (count_passed(anchors) == 6) {
        const std::uint64_t fp = conv.fingerprint();
        auto it = accepted_by_map.find(fp);
        if (it == accepted_by_map.end()) {
          Calibration c;
          c.convention = conv;
          c.window = w;
          c.anchors = anchors;
          c.accepted = true;
          relabel_stats(conv, &c.relabel_classes, &c.relabel_fixed_points);
          c.equivalent_descriptions.push_back(conv.describe());
          accepted_by_map.emplace(fp, std::move(c));
        } else {
          it->second.equivalent_descriptions.push_back(conv.describe());
        }
        any = true;
      }
    }
    if (!any) out.rejected.push_back(std::move(trace));
  }
  for (auto& [fp, c] : accepted_by_map) out.accepted.push_back(std::move(c));
  return out;
}

Calibration load_calibration(const std::filesystem::path& file) {
  return Calibration::from_json(nlohmann::json::parse(io::read_file(file)));
}

std::vector<SingleRecord> scan_single(int window, const DigitConvention& conv) {
  std::vector<SingleRecord> out;
  std::set<std::uint64_t> seen;
  const long threshold = (1l << window) / 2;
  for (std::uint64_t n = 0; n < 256; n++) {
    const std::uint64_t partner = relabel_states({n, 2, 2}, conv).number;
    const std::uint64_t rep = std::min(n, partner);
    if (seen.count(rep)) continue;
    seen.insert(rep);
    SingleRecord r;
    r.rule = rep;
    r.partner = std::max(n, partner);
    EvolveConfig cfg{EvolveMode::single, {rep, 2, 2}, std::nullopt, window, 1, 0};
    r.report = detect_cycle(cfg, conv, CycleMethod::hash, threshold);
    if (r.partner != r.rule) {
      EvolveConfig cfg2{EvolveMode::single, {r.partner, 2, 2}, std::nullopt, window, 1, 0};
      CycleReport rep2 = detect_cycle(cfg2, conv);
      r.partner_period = rep2.period;
      r.behavior_uniform = rep2.period == r.report.period && rep2.preperiod == r.report.preperiod;
    } else {
      r.partner_period = r.report.period;
      r.behavior_uniform = true;
    }
    out.push_back(r);
  }
  return out;
}

std::vector<PairRecord> scan_pairs(int window, const DigitConvention& conv, long threshold) {
  std::vector<PairRecord> out;
  std::uint64_t visited = 0;
  for (std::uint64_t r1 = 0; r1 < 256; r1++)
    for (std::uint64_t r2 = 0; r2 < 256; r2++) {
      visited++;
      EvolveConfig cfg{EvolveMode::pair, {r1, 2, 2}, RuleId{r2, 2, 2}, window, 1, 0};
      CycleReport rep = detect_cycle(cfg, conv, CycleMethod::hash, threshold);
      if (rep.complex) out.push_back({r1, r2, rep});
    }
  if (visited != 256 * 256) throw std::logic_error("pair scan did not visit 256^2 pairs");
  return out;
}

std::vector<AltWindowRecord> scan_alt_window(int window, const DigitConvention& conv,
                                             bool odd_uses_longer, long threshold) {
  std::vector<AltWindowRecord> out;
  for (std::uint64_t n = 0; n < 256; n++) {
    EvolveConfig cfg{EvolveMode::alt_window, {n, 2, 2}, std::nullopt, window, 1, 0};
    cfg.odd_uses_longer = odd_uses_longer;
    AltWindowRecord r;
    r.rule = n;
    r.report = detect_cycle(cfg, conv, CycleMethod::hash, threshold);
    out.push_back(r);
  }
  return out;
}

} // namespace ifa::scan
