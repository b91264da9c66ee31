// Iterated finite automata: rule numbering, transition tables, evaluation.
//
// An IFA with s states and k actions is a table mapping (state, input symbol)
// to (next state, output action). Tables are numbered 0 .. (s*k)^(s*k)-1 by
// writing one base-(s*k) digit per table cell; exactly how cells map to digit
// positions and how a digit splits into (next state, action) is a convention
// (DigitConvention) recovered by calibration rather than hard-coded.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifa {

inline constexpr int kMaxCells = 64; // s*k <= 15 keeps rule counts inside uint64

struct RuleId {
  std::uint64_t number = 0;
  int states = 2;  // s >= 1
  int actions = 2; // k >= 2

  int cells() const { return states * actions; }
  // (s*k)^(s*k); throws if it would overflow 64 bits
  std::uint64_t rule_space() const;
  bool operator==(const RuleId&) const = default;
};

// How rule numbers map onto transition tables.
struct DigitConvention {
  bool state_major_pairs = true;   // enumerate cells with state as the outer key
  bool states_ascending = true;    // state 1 block before state 2 block
  bool inputs_ascending = false;   // false: highest input symbol first within a block
  bool state_major_digits = true;  // digit = (next_state-1)*k + action; false: action*s + (next_state-1)
  bool most_significant_first = true; // first enumerated cell takes the most significant digit
  int up_action = 1;               // action value meaning UP/buy (and input bit meaning UP)

  // Canonical fingerprint of the induced decode map for s=2,k=2 plus polarity.
  // Conventions that describe the same bijection share a fingerprint.
  std::uint64_t fingerprint() const;
  std::string describe() const;
  bool operator==(const DigitConvention&) const = default;
};

struct Transition {
  int next_state = 1; // 1-based
  int action = 0;     // 0 .. k-1
  bool operator==(const Transition&) const = default;
};

class TransitionTable {
public:
  TransitionTable(int states, int actions);

  int states() const { return states_; }
  int actions() const { return actions_; }

  Transition at(int state, int symbol) const; // state 1-based, symbol 0-based
  void set(int state, int symbol, Transition t);

  // Start in state 1, consume the window most-recent-first, return the output
  // action of the final transition taken.
  int evaluate(std::span<const int> window_recent_first) const;

  // Hot-path form: window packed with the most recent symbol in the low bits,
  // bits_per_symbol wide each, length symbols long.
  int evaluate_packed(std::uint64_t window, int length, int bits_per_symbol) const;

  void validate() const; // throws std::invalid_argument on out-of-range entries
  bool operator==(const TransitionTable&) const = default;

private:
  int states_;
  int actions_;
  // cell index = (state-1)*actions + symbol; values packed next0*actions+action
  std::array<std::uint8_t, kMaxCells> next0_{};
  std::array<std::uint8_t, kMaxCells> act_{};
};

// number -> table under a convention; throws std::out_of_range for bad numbers
TransitionTable decode_rule(const RuleId& id, const DigitConvention& conv);

// table -> number (exact inverse of decode_rule)
RuleId encode_rule(const TransitionTable& table, const DigitConvention& conv);

// Swap state labels 1 and 2 (s=2 only) and re-encode. Involution.
RuleId relabel_states(const RuleId& id, const DigitConvention& conv);

// min(n, relabel(n)): representative of the relabel class
RuleId canonical_rule(const RuleId& id, const DigitConvention& conv);

// GraphViz text for the state diagram. For k=2 edges read "UP/SELL" etc.
// (per the convention's polarity); other alphabets use raw integers.
std::string to_dot(const TransitionTable& table, const DigitConvention& conv);

} // namespace ifa
