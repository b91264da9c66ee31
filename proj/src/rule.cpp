#include "ifa/rule.hpp"

#include <sstream>

namespace ifa {

std::uint64_t RuleId::rule_space() const {
  if (states < 1 || actions < 2) throw std::invalid_argument("rule space needs s >= 1, k >= 2");
  const int sk = states * actions;
  if (sk > 15) throw std::invalid_argument("rule space exceeds 64 bits (s*k > 15)");
  std::uint64_t r = 1;
  for (int i = 0; i < sk; i++) r *= std::uint64_t(sk);
  return r;
}

namespace {

// Cell enumeration order: cell j -> (state0, symbol)
void enumerate_cells(const DigitConvention& c, int s, int k,
                     std::array<std::pair<int, int>, kMaxCells>& cells) {
  int j = 0;
  auto state_at = [&](int i) { return c.states_ascending ? i : s - 1 - i; };
  auto input_at = [&](int i) { return c.inputs_ascending ? i : k - 1 - i; };
  if (c.state_major_pairs) {
    for (int a = 0; a < s; a++)
      for (int b = 0; b < k; b++) cells[j++] = {state_at(a), input_at(b)};
  } else {
    for (int b = 0; b < k; b++)
      for (int a = 0; a < s; a++) cells[j++] = {state_at(a), input_at(b)};
  }
}

} // namespace

std::uint64_t DigitConvention::fingerprint() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (std::uint64_t n = 0; n < 256; n++) {
    TransitionTable t = decode_rule({n, 2, 2}, *this);
    for (int st = 1; st <= 2; st++)
      for (int sym = 0; sym < 2; sym++) {
        Transition tr = t.at(st, sym);
        mix(std::uint64_t(tr.next_state));
        mix(std::uint64_t(tr.action));
      }
  }
  mix(std::uint64_t(up_action));
  return h;
}

std::string DigitConvention::describe() const {
  std::ostringstream os;
  os << (state_major_pairs ? "state-major" : "input-major") << " cells, states "
     << (states_ascending ? "ascending" : "descending") << ", inputs "
     << (inputs_ascending ? "ascending" : "descending") << ", digits "
     << (state_major_digits ? "(next-1)*k+action" : "action*s+(next-1)") << ", "
     << (most_significant_first ? "msb" : "lsb") << "-first, UP=" << up_action;
  return os.str();
}

TransitionTable::TransitionTable(int states, int actions)
    : states_(states), actions_(actions) {
  if (states < 1 || actions < 2 || states * actions > kMaxCells)
    throw std::invalid_argument("unsupported table dimensions");
}

Transition TransitionTable::at(int state, int symbol) const {
  if (state < 1 || state > states_ || symbol < 0 || symbol >= actions_)
    throw std::out_of_range("table cell out of range");
  const int i = (state - 1) * actions_ + symbol;
  return {int(next0_[i]) + 1, int(act_[i])};
}

void TransitionTable::set(int state, int symbol, Transition t) {
  if (state < 1 || state > states_ || symbol < 0 || symbol >= actions_)
    throw std::out_of_range("table cell out of range");
  if (t.next_state < 1 || t.next_state > states_ || t.action < 0 || t.action >= actions_)
    throw std::invalid_argument("transition out of range");
  const int i = (state - 1) * actions_ + symbol;
  next0_[i] = std::uint8_t(t.next_state - 1);
  act_[i] = std::uint8_t(t.action);
}

int TransitionTable::evaluate(std::span<const int> window) const {
  if (window.empty()) throw std::invalid_argument("empty window");
  int st = 0, out = 0;
  for (int sym : window) {
    if (sym < 0 || sym >= actions_) throw std::invalid_argument("window symbol out of range");
    const int i = st * actions_ + sym;
    out = act_[i];
    st = next0_[i];
  }
  return out;
}

int TransitionTable::evaluate_packed(std::uint64_t window, int length, int bps) const {
  const std::uint64_t mask = (std::uint64_t(1) << bps) - 1;
  int st = 0, out = 0;
  for (int i = 0; i < length; i++) {
    const int sym = int((window >> (bps * i)) & mask);
    const int idx = st * actions_ + sym;
    out = act_[idx];
    st = next0_[idx];
  }
  return out;
}

void TransitionTable::validate() const {
  for (int i = 0; i < states_ * actions_; i++) {
    if (next0_[i] >= states_) throw std::invalid_argument("next state out of range");
    if (act_[i] >= actions_) throw std::invalid_argument("action out of range");
  }
}

TransitionTable decode_rule(const RuleId& id, const DigitConvention& conv) {
  const int s = id.states, k = id.actions, sk = s * k;
  if (id.number >= id.rule_space()) throw std::out_of_range("rule number out of range");

  std::array<int, kMaxCells> digits{}; // least significant first
  std::uint64_t n = id.number;
  for (int i = 0; i < sk; i++) {
    digits[i] = int(n % sk);
    n /= sk;
  }
  std::array<std::pair<int, int>, kMaxCells> cells;
  enumerate_cells(conv, s, k, cells);

  TransitionTable t(s, k);
  for (int j = 0; j < sk; j++) {
    const int d = conv.most_significant_first ? digits[sk - 1 - j] : digits[j];
    int next0, action;
    if (conv.state_major_digits) {
      next0 = d / k;
      action = d % k;
    } else {
      action = d / s;
      next0 = d % s;
    }
    auto [state0, sym] = cells[j];
    t.set(state0 + 1, sym, {next0 + 1, action});
  }
  return t;
}

RuleId encode_rule(const TransitionTable& table, const DigitConvention& conv) {
  table.validate();
  const int s = table.states(), k = table.actions(), sk = s * k;
  std::array<std::pair<int, int>, kMaxCells> cells;
  enumerate_cells(conv, s, k, cells);

  std::array<int, kMaxCells> digits{};
  for (int j = 0; j < sk; j++) {
    auto [state0, sym] = cells[j];
    Transition tr = table.at(state0 + 1, sym);
    const int next0 = tr.next_state - 1;
    const int d = conv.state_major_digits ? next0 * k + tr.action : tr.action * s + next0;
    digits[conv.most_significant_first ? sk - 1 - j : j] = d;
  }
  std::uint64_t n = 0;
  for (int i = sk - 1; i >= 0; i--) n = n * sk + std::uint64_t(digits[i]);
  return {n, s, k};
}

RuleId relabel_states(const RuleId& id, const DigitConvention& conv) {
  if (id.states != 2) throw std::invalid_argument("relabel_states supports s = 2 only");
  TransitionTable t = decode_rule(id, conv);
  TransitionTable r(2, id.actions);
  for (int st = 1; st <= 2; st++)
    for (int sym = 0; sym < id.actions; sym++) {
      Transition tr = t.at(3 - st, sym);
      r.set(st, sym, {3 - tr.next_state, tr.action});
    }
  return encode_rule(r, conv);
}

RuleId canonical_rule(const RuleId& id, const DigitConvention& conv) {
  RuleId other = relabel_states(id, conv);
  return other.number < id.number ? other : id;
}

std::string to_dot(const TransitionTable& table, const DigitConvention& conv) {
  const int k = table.actions();
  auto input_name = [&](int sym) -> std::string {
    if (k == 2) return sym == conv.up_action ? "UP" : "DOWN";
    return std::to_string(sym);
  };
  auto action_name = [&](int a) -> std::string {
    if (k == 2) return a == conv.up_action ? "BUY" : "SELL";
    return std::to_string(a);
  };
  std::ostringstream os;
  os << "digraph ifa {\n  rankdir=LR;\n";
  for (int st = 1; st <= table.states(); st++)
    os << "  \"" << st << "\" [shape=circle];\n";
  for (int st = 1; st <= table.states(); st++)
    for (int sym = 0; sym < k; sym++) {
      Transition tr = table.at(st, sym);
      os << "  \"" << st << "\" -> \"" << tr.next_state << "\" [label=\""
         << input_name(sym) << "/" << action_name(tr.action) << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

} // namespace ifa
