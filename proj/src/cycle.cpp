#include "ifa/cycle.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace ifa {

namespace {

constexpr int kPhaseShift = 60; // phase bit position in the packed state key

} // namespace

DynamicsWalker::DynamicsWalker(const EvolveConfig& config, const DigitConvention& conv)
    : t1_(decode_rule(config.rule1, conv)),
      t2_(config.rule2 ? decode_rule(*config.rule2, conv) : decode_rule(config.rule1, conv)),
      cfg_(config),
      up_(conv.up_action) {
  if (config.mode == EvolveMode::pair) {
    if (!config.rule2) throw std::invalid_argument("pair mode needs rule2");
    if (config.rule1.states != config.rule2->states ||
        config.rule1.actions != config.rule2->actions)
      throw std::invalid_argument("paired rules must share (s, k)");
    has_t2_ = true;
  }
  if (config.mode == EvolveMode::multi) {
    if (config.rule1.actions != (1 << config.assets))
      throw std::invalid_argument("rule alphabet must equal 2^assets");
  } else if (config.assets != 1) {
    throw std::invalid_argument("multi-asset history needs multi mode");
  }
  const int span = config.mode == EvolveMode::alt_window ? config.window + 1 : config.window;
  Window probe(span, t1_.actions()); // validates packing limits
  bps_ = probe.bits_per_symbol();
  reset();
}

void DynamicsWalker::reset() {
  const int span = cfg_.mode == EvolveMode::alt_window ? cfg_.window + 1 : cfg_.window;
  Window win = Window::all_up(span, cfg_.mode == EvolveMode::multi ? cfg_.assets : 1, up_);
  bits_ = win.packed();
  day_ = 0;
  rekey();
}

void DynamicsWalker::rekey() {
  // Only the symbols the future can read belong in the key.
  std::uint64_t masked = bits_;
  std::uint64_t phase = 0;
  if (cfg_.mode == EvolveMode::pair) {
    phase = std::uint64_t(day_ & 1);
  } else if (cfg_.mode == EvolveMode::alt_window) {
    const int next_day = int(day_ % 2) + 1; // parity of day_+1
    const bool longer = cfg_.odd_uses_longer ? (next_day % 2 == 1) : (next_day % 2 == 0);
    const int span = longer ? cfg_.window + 1 : cfg_.window;
    masked = bits_ & ((std::uint64_t(1) << (bps_ * span)) - 1);
    phase = std::uint64_t(day_ & 1);
  } else {
    masked = bits_ & ((std::uint64_t(1) << (bps_ * cfg_.window)) - 1);
  }
  key_ = masked | (phase << kPhaseShift);
}

int DynamicsWalker::step() {
  const long day = day_ + 1;
  int read = cfg_.window;
  const TransitionTable* tbl = &t1_;
  if (cfg_.mode == EvolveMode::pair && day % 2 == 0) tbl = &t2_;
  if (cfg_.mode == EvolveMode::alt_window) {
    const bool longer = cfg_.odd_uses_longer ? (day % 2 == 1) : (day % 2 == 0);
    read = longer ? cfg_.window + 1 : cfg_.window;
  }
  const int a = tbl->evaluate_packed(bits_, read, bps_);
  const int span = cfg_.mode == EvolveMode::alt_window ? cfg_.window + 1 : cfg_.window;
  bits_ = ((bits_ << bps_) | std::uint64_t(a)) & ((std::uint64_t(1) << (bps_ * span)) - 1);
  day_ = day;
  rekey();
  return a;
}

std::uint64_t DynamicsWalker::state_space_bound() const {
  const std::uint64_t k = std::uint64_t(t1_.actions());
  std::uint64_t kw = 1;
  for (int i = 0; i < cfg_.window; i++) kw *= k;
  switch (cfg_.mode) {
    case EvolveMode::pair: return 2 * kw;
    case EvolveMode::alt_window: return kw + kw * k;
    default: return kw;
  }
}

namespace {

struct StateCycle {
  long q, p;
};

StateCycle find_state_cycle_hash(DynamicsWalker& walk) {
  std::unordered_map<std::uint64_t, long> seen;
  seen.reserve(1024);
  seen.emplace(walk.state(), 0);
  long t = 0;
  for (;;) {
    walk.step();
    t++;
    auto [it, fresh] = seen.emplace(walk.state(), t);
    if (!fresh) return {it->second, t - it->second};
  }
}

StateCycle find_state_cycle_brent(const EvolveConfig& cfg, const DigitConvention& conv) {
  DynamicsWalker tortoise(cfg, conv), hare(cfg, conv);
  hare.step();
  long power = 1, lam = 1;
  while (tortoise.state() != hare.state()) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare.step();
    lam++;
  }
  DynamicsWalker a(cfg, conv), b(cfg, conv);
  for (long i = 0; i < lam; i++) b.step();
  long mu = 0;
  while (a.state() != b.state()) {
    a.step();
    b.step();
    mu++;
  }
  return {mu, lam};
}

} // namespace

CycleReport detect_cycle(const EvolveConfig& config, const DigitConvention& conv,
                         CycleMethod method, long threshold) {
  StateCycle sc{};
  if (method == CycleMethod::hash) {
    DynamicsWalker walk(config, conv);
    sc = find_state_cycle_hash(walk);
  } else {
    sc = find_state_cycle_brent(config, conv);
  }

  // Materialize movements 1 .. q_s + 2*p_s and refine to the movement level.
  DynamicsWalker walk(config, conv);
  const long need = sc.q + 2 * sc.p;
  std::vector<std::uint8_t> mov(std::size_t(need) + 1);
  for (long t = 1; t <= need; t++) mov[std::size_t(t)] = std::uint8_t(walk.step());

  long p = sc.p;
  for (long d = 1; d <= sc.p; d++) {
    if (sc.p % d) continue;
    bool ok = true;
    for (long t = sc.q + 1; t <= sc.q + sc.p; t++)
      if (mov[std::size_t(t)] != mov[std::size_t(t + d)]) {
        ok = false;
        break;
      }
    if (ok) {
      p = d;
      break;
    }
  }
  long q = sc.q;
  while (q > 0 && mov[std::size_t(q)] == mov[std::size_t(q + p)]) q--;

  CycleReport rep;
  rep.mode = config.mode;
  rep.preperiod = q;
  rep.period = p;
  rep.state_preperiod = sc.q;
  rep.state_period = sc.p;
  rep.threshold = threshold;
  rep.complex = threshold > 0 && p >= threshold;
  return rep;
}

bool is_complex_single(const CycleReport& report, int window, int alphabet) {
  std::uint64_t kw = 1;
  for (int i = 0; i < window; i++) kw *= std::uint64_t(alphabet);
  return std::uint64_t(report.period) >= kw / 2;
}

bool is_complex_pair(const CycleReport& report, long threshold) {
  return report.period >= threshold;
}

std::string cycle_csv_row(const EvolveConfig& config, const CycleReport& report) {
  std::ostringstream os;
  const char* mode = config.mode == EvolveMode::single  ? "single"
                     : config.mode == EvolveMode::pair  ? "pair"
                     : config.mode == EvolveMode::multi ? "multi"
                                                        : "alt-window";
  os << mode << "," << config.rule1.number << ",";
  if (config.rule2) os << config.rule2->number;
  os << "," << config.window << "," << report.preperiod << "," << report.period << ","
     << (report.complex ? 1 : 0);
  return os.str();
}

bool has_visible_cycle(const std::vector<int>& series) {
  const long H = long(series.size());
  for (long p = 1; 2 * p <= H; p++) {
    bool ok = true;
    for (long t = H - 2 * p; t < H - p; t++)
      if (series[std::size_t(t)] != series[std::size_t(t + p)]) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

MultiAssetFilter multi_asset_filter(const Evolution& evo, const DigitConvention& conv) {
  if (evo.config.assets != 2) throw std::invalid_argument("filter expects m = 2 evolutions");
  MultiAssetFilter f;
  const std::vector<int> x0 = asset_series(evo, 0, conv);
  const std::vector<int> x1 = asset_series(evo, 1, conv);
  f.asset0_repeats = has_visible_cycle(x0);
  f.asset1_repeats = has_visible_cycle(x1);
  f.identical = x0 == x1;
  f.opposite = true;
  for (std::size_t i = 0; i < x0.size(); i++)
    if (x0[i] != -x1[i]) {
      f.opposite = false;
      break;
    }
  // Pearson for reporting; the pass decision uses the exact checks above.
  const double n = double(x0.size());
  double sx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < x0.size(); i++) {
    sx += x0[i];
    sy += x1[i];
    sxy += x0[i] * x1[i];
  }
  const double vx = n * n - sx * sx, vy = n * n - sy * sy; // sum of squares of +-1 is n
  f.correlation = (vx <= 0 || vy <= 0) ? std::nan("") : (n * sxy - sx * sy) / std::sqrt(vx * vy);
  f.pass = !f.asset0_repeats && !f.asset1_repeats && !f.identical && !f.opposite;
  return f;
}

} // namespace ifa
