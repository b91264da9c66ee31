// Market evolution: a representative investor's rule (or rule pair) applied
// day after day to its own output history.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifa/rule.hpp"

namespace ifa {

// Fixed-length recent history of joint actions, most recent first.
class Window {
public:
  Window(int length, int alphabet);
  static Window all_up(int length, int assets, int up_action);

  int length() const { return length_; }
  int alphabet() const { return alphabet_; }
  int bits_per_symbol() const { return bps_; }
  std::uint64_t packed() const { return bits_; } // most recent symbol in low bits

  int symbol(int i) const; // i = 0 is the most recent movement
  std::vector<int> symbols() const;

  // New window with `action` as the newest movement and the oldest dropped.
  Window pushed(int action) const;
  // Extended window keeping `length+1` symbols (alternating-window bookkeeping).
  Window pushed_grow(int action) const;
  // Drop the oldest symbol.
  Window shrunk() const;
  // View of the most recent `n` symbols.
  Window front(int n) const;

  bool operator==(const Window&) const = default;

private:
  std::uint64_t bits_ = 0;
  int length_;
  int alphabet_;
  int bps_;
};

enum class EvolveMode { single, pair, alt_window, multi };

struct EvolveConfig {
  EvolveMode mode = EvolveMode::single;
  RuleId rule1;
  std::optional<RuleId> rule2; // pair mode
  int window = 10;
  int assets = 1;              // m; joint alphabet k = 2^m
  int steps = 0;
  bool odd_uses_longer = false; // alt-window: which parity reads w+1 movements
};

// Movement sequence over T steps; movement t (1-based) is the day-t action.
struct Evolution {
  EvolveConfig config;
  std::vector<std::uint8_t> movements;

  int size() const { return int(movements.size()); }
  int at(int t) const { return movements.at(std::size_t(t - 1)); } // t is 1-based
};

// w copies of the all-buy joint action (2^m - 1 under UP=1 polarity).
Window init_history(int window, int assets, const DigitConvention& conv);

// One day: evaluate, then push the chosen action as the newest movement.
std::pair<int, Window> step(const Window& window, const TransitionTable& table);

Evolution evolve_single(const RuleId& rule, int window, int steps, const DigitConvention& conv);
// Odd days (1, 3, ...) use rule1, even days rule2.
Evolution evolve_pair(const RuleId& rule1, const RuleId& rule2, int window, int steps,
                      const DigitConvention& conv);
// One rule, lookback alternating between w and w+1 by day parity.
Evolution evolve_alt_window(const RuleId& rule, int window, int steps, const DigitConvention& conv,
                            bool odd_uses_longer = false);
// Joint decisions over m assets; reduces to evolve_single at m = 1.
Evolution evolve_multi(const RuleId& rule, int assets, int window, int steps,
                       const DigitConvention& conv);

Evolution evolve(const EvolveConfig& config, const DigitConvention& conv);

// Per-asset +-1 view: +1 where bit `asset` of the movement is the buy bit.
std::vector<int> asset_series(const Evolution& evo, int asset, const DigitConvention& conv);

// Cumulative sums; element t is the price level after t movements.
std::vector<long> price_path(const std::vector<int>& series);

// CSV export: header `t,action,asset0,...`; assets as +-1.
std::string evolution_csv(const Evolution& evo, const DigitConvention& conv);

} // namespace ifa
