#include "ifa/market.hpp"

#include <sstream>

namespace ifa {

namespace {

int bits_for(int alphabet) {
  int b = 1;
  while ((1 << b) < alphabet) b++;
  return b;
}

} // namespace

Window::Window(int length, int alphabet)
    : length_(length), alphabet_(alphabet), bps_(bits_for(alphabet)) {
  if (length < 1) throw std::invalid_argument("window length must be >= 1");
  if (alphabet < 2) throw std::invalid_argument("alphabet must be >= 2");
  if (length * bps_ > 62) throw std::invalid_argument("window too large to pack");
}

Window Window::all_up(int length, int assets, int up_action) {
  const int k = 1 << assets;
  Window w(length, k);
  const std::uint64_t sym = up_action == 1 ? std::uint64_t(k - 1) : 0;
  for (int i = 0; i < length; i++) w.bits_ = (w.bits_ << w.bps_) | sym;
  return w;
}

int Window::symbol(int i) const {
  if (i < 0 || i >= length_) throw std::out_of_range("window index");
  return int((bits_ >> (bps_ * i)) & ((std::uint64_t(1) << bps_) - 1));
}

std::vector<int> Window::symbols() const {
  std::vector<int> out(static_cast<std::size_t>(length_), 0);
  for (int i = 0; i < length_; i++) out[std::size_t(i)] = symbol(i);
  return out;
}

Window Window::pushed(int action) const {
  if (action < 0 || action >= alphabet_) throw std::invalid_argument("action out of range");
  Window w = *this;
  const std::uint64_t mask = (std::uint64_t(1) << (bps_ * length_)) - 1;
  w.bits_ = ((bits_ << bps_) | std::uint64_t(action)) & mask;
  return w;
}

Window Window::pushed_grow(int action) const {
  if (action < 0 || action >= alphabet_) throw std::invalid_argument("action out of range");
  Window w(length_ + 1, alphabet_);
  w.bits_ = (bits_ << bps_) | std::uint64_t(action);
  return w;
}

Window Window::shrunk() const {
  if (length_ < 2) throw std::invalid_argument("cannot shrink below length 1");
  Window w(length_ - 1, alphabet_);
  w.bits_ = bits_ & ((std::uint64_t(1) << (bps_ * (length_ - 1))) - 1);
  return w;
}

Window Window::front(int n) const {
  if (n < 1 || n > length_) throw std::out_of_range("front size");
  Window w(n, alphabet_);
  w.bits_ = bits_ & ((std::uint64_t(1) << (bps_ * n)) - 1);
  return w;
}

Window init_history(int window, int assets, const DigitConvention& conv) {
  if (window < 1) throw std::invalid_argument("lookback window must be >= 1");
  if (assets < 1) throw std::invalid_argument("asset count must be >= 1");
  return Window::all_up(window, assets, conv.up_action);
}

std::pair<int, Window> step(const Window& window, const TransitionTable& table) {
  if (window.alphabet() != table.actions())
    throw std::invalid_argument("window alphabet does not match table");
  const int a = table.evaluate_packed(window.packed(), window.length(), window.bits_per_symbol());
  return {a, window.pushed(a)};
}

namespace {

Evolution run_simple(const EvolveConfig& cfg, const TransitionTable& t1, const TransitionTable* t2,
                     const DigitConvention& conv) {
  Evolution evo;
  evo.config = cfg;
  evo.movements.reserve(std::size_t(cfg.steps));
  Window win = init_history(cfg.window, cfg.assets, conv);
  const int bps = win.bits_per_symbol();
  std::uint64_t bits = win.packed();
  const std::uint64_t mask = (std::uint64_t(1) << (bps * cfg.window)) - 1;
  for (int t = 1; t <= cfg.steps; t++) {
    const TransitionTable& tbl = (t2 && t % 2 == 0) ? *t2 : t1;
    const int a = tbl.evaluate_packed(bits, cfg.window, bps);
    evo.movements.push_back(std::uint8_t(a));
    bits = ((bits << bps) | std::uint64_t(a)) & mask;
  }
  return evo;
}

} // namespace

Evolution evolve_single(const RuleId& rule, int window, int steps, const DigitConvention& conv) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  EvolveConfig cfg{EvolveMode::single, rule, std::nullopt, window, 1, steps};
  TransitionTable t = decode_rule(rule, conv);
  return run_simple(cfg, t, nullptr, conv);
}

Evolution evolve_pair(const RuleId& rule1, const RuleId& rule2, int window, int steps,
                      const DigitConvention& conv) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (rule1.states != rule2.states || rule1.actions != rule2.actions)
    throw std::invalid_argument("paired rules must share (s, k)");
  EvolveConfig cfg{EvolveMode::pair, rule1, rule2, window, 1, steps};
  TransitionTable t1 = decode_rule(rule1, conv);
  TransitionTable t2 = decode_rule(rule2, conv);
  return run_simple(cfg, t1, &t2, conv);
}

Evolution evolve_alt_window(const RuleId& rule, int window, int steps,
                            const DigitConvention& conv, bool odd_uses_longer) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  EvolveConfig cfg{EvolveMode::alt_window, rule, std::nullopt, window, 1, steps};
  cfg.odd_uses_longer = odd_uses_longer;
  TransitionTable t = decode_rule(rule, conv);

  Evolution evo;
  evo.config = cfg;
  evo.movements.reserve(std::size_t(steps));
  // history of w+1 buys; each day reads the most recent w or w+1 of it
  Window hist = init_history(window + 1, 1, conv);
  for (int day = 1; day <= steps; day++) {
    const bool longer = odd_uses_longer ? (day % 2 == 1) : (day % 2 == 0);
    const int we = longer ? window + 1 : window;
    const int a = t.evaluate_packed(hist.packed(), we, hist.bits_per_symbol());
    evo.movements.push_back(std::uint8_t(a));
    hist = hist.pushed(a);
  }
  return evo;
}

Evolution evolve_multi(const RuleId& rule, int assets, int window, int steps,
                       const DigitConvention& conv) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (assets < 1) throw std::invalid_argument("asset count must be >= 1");
  if (rule.actions != (1 << assets))
    throw std::invalid_argument("rule alphabet must equal 2^assets");
  EvolveConfig cfg{EvolveMode::multi, rule, std::nullopt, window, assets, steps};
  TransitionTable t = decode_rule(rule, conv);
  return run_simple(cfg, t, nullptr, conv);
}

Evolution evolve(const EvolveConfig& config, const DigitConvention& conv) {
  switch (config.mode) {
    case EvolveMode::single:
      return evolve_single(config.rule1, config.window, config.steps, conv);
    case EvolveMode::pair:
      if (!config.rule2) throw std::invalid_argument("pair mode needs rule2");
      return evolve_pair(config.rule1, *config.rule2, config.window, config.steps, conv);
    case EvolveMode::alt_window:
      return evolve_alt_window(config.rule1, config.window, config.steps, conv,
                               config.odd_uses_longer);
    case EvolveMode::multi:
      return evolve_multi(config.rule1, config.assets, config.window, config.steps, conv);
  }
  throw std::logic_error("unknown mode");
}

std::vector<int> asset_series(const Evolution& evo, int asset, const DigitConvention& conv) {
  if (asset < 0 || asset >= evo.config.assets) throw std::out_of_range("asset index");
  std::vector<int> out(evo.movements.size());
  for (std::size_t i = 0; i < evo.movements.size(); i++) {
    const int bit = (evo.movements[i] >> asset) & 1;
    out[i] = bit == (conv.up_action & 1) ? 1 : -1;
  }
  return out;
}

std::vector<long> price_path(const std::vector<int>& series) {
  std::vector<long> out(series.size());
  long acc = 0;
  for (std::size_t i = 0; i < series.size(); i++) {
    acc += series[i];
    out[i] = acc;
  }
  return out;
}

std::string evolution_csv(const Evolution& evo, const DigitConvention& conv) {
  std::ostringstream os;
  os << "t,action";
  for (int j = 0; j < evo.config.assets; j++) os << ",asset" << j;
  os << "\n";
  for (int t = 1; t <= evo.size(); t++) {
    os << t << "," << evo.at(t);
    for (int j = 0; j < evo.config.assets; j++) {
      const int bit = (evo.at(t) >> j) & 1;
      os << "," << (bit == (conv.up_action & 1) ? 1 : -1);
    }
    os << "\n";
  }
  return os.str();
}

} // namespace ifa
