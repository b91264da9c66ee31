// Exact cycle structure of deterministic evolutions.
//
// The dynamics state is the lookback window plus, for alternating modes, the
// day parity. State-level (preperiod, period) comes from first-repeat hashing
// or Brent's algorithm; the movement-level minimal period (what "the sequence
// of UPs and DOWNs repeats" means) is then refined from it, since the minimal
// eventual period of the movement sequence divides the state period.
#pragma once

#include <cstdint>
#include <vector>

#include "ifa/market.hpp"

namespace ifa {

struct CycleReport {
  EvolveMode mode = EvolveMode::single;
  long preperiod = 0;       // movement-level minimal q: m[t+p] = m[t] for all t > q
  long period = 1;          // movement-level minimal p
  long state_preperiod = 0; // orbit-level first-repeat q
  long state_period = 1;    // orbit-level p
  bool complex = false;
  long threshold = 0;       // the period threshold the complex flag used
};

enum class CycleMethod { hash, brent };

// Walks the dynamics of an EvolveConfig (steps field ignored) as a pure
// function of the packed state. Exposed for scans and tests.
class DynamicsWalker {
public:
  DynamicsWalker(const EvolveConfig& config, const DigitConvention& conv);

  std::uint64_t state() const { return key_; }
  int step(); // advance one day, return the movement
  void reset();

  // Upper bound on distinct states (k^w, 2k^w, or k^w + k^(w+1)).
  std::uint64_t state_space_bound() const;

private:
  TransitionTable t1_;
  TransitionTable t2_;
  EvolveConfig cfg_;
  int bps_;
  int up_;
  bool has_t2_ = false;
  std::uint64_t bits_ = 0; // window, most recent symbol in low bits
  long day_ = 0;
  std::uint64_t key_ = 0;
  void rekey();
};

// Exact (state_preperiod, state_period) then movement-level refinement.
// threshold <= 0 leaves the complex flag false.
CycleReport detect_cycle(const EvolveConfig& config, const DigitConvention& conv,
                         CycleMethod method = CycleMethod::hash, long threshold = 0);

// period >= k^w / 2
bool is_complex_single(const CycleReport& report, int window, int alphabet);
// period >= threshold (default: single rule 54's period at the calibrated w)
bool is_complex_pair(const CycleReport& report, long threshold = 889);

// One row of the CycleReport CSV: mode,rule1,rule2,w,preperiod,period,complex
std::string cycle_csv_row(const EvolveConfig& config, const CycleReport& report);

struct MultiAssetFilter {
  bool asset0_repeats = false; // a cycle is visible in asset 0 within the horizon
  bool asset1_repeats = false;
  bool identical = false;      // asset series exactly equal
  bool opposite = false;       // asset series exactly negated
  double correlation = 0.0;    // Pearson over the horizon (NaN if either constant)
  bool pass = false;
};

// The reference screen: m = 2 evolutions over a horizon pass when neither
// asset shows a twice-confirmed cycle inside the horizon and the assets are
// neither identical nor exactly opposite.
// "Visible cycle": some (q, p) with q + 2p <= H and x[t+p] = x[t] for q < t <= H-p.
MultiAssetFilter multi_asset_filter(const Evolution& evo, const DigitConvention& conv);

// The same tail test on a raw +-1 series (exposed for tests and scans).
bool has_visible_cycle(const std::vector<int>& series);

} // namespace ifa
