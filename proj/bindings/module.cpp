#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ifa/cycle.hpp"
#include "ifa/market.hpp"
#include "ifa/rule.hpp"
#include "ifa/scan.hpp"
#include "ifa/stats.hpp"

namespace py = pybind11;
using namespace ifa;

namespace {

DigitConvention conv_from_kwargs(int up_action) {
  DigitConvention c;
  c.up_action = up_action;
  return c;
}

EvolveConfig make_config(std::uint64_t rule, std::optional<std::uint64_t> rule2, bool alt_window,
                         int assets, int window) {
  EvolveConfig cfg;
  cfg.window = window;
  cfg.assets = assets;
  const int k = 1 << assets;
  cfg.rule1 = {rule, 2, k};
  if (alt_window) {
    cfg.mode = EvolveMode::alt_window;
  } else if (rule2) {
    cfg.mode = EvolveMode::pair;
    cfg.rule2 = RuleId{*rule2, 2, k};
  } else {
    cfg.mode = assets > 1 ? EvolveMode::multi : EvolveMode::single;
  }
  return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "iterated-finite-automaton market model";

  py::class_<DigitConvention>(m, "DigitConvention")
      .def(py::init(&conv_from_kwargs), py::arg("up_action") = 1)
      .def_readwrite("state_major_pairs", &DigitConvention::state_major_pairs)
      .def_readwrite("states_ascending", &DigitConvention::states_ascending)
      .def_readwrite("inputs_ascending", &DigitConvention::inputs_ascending)
      .def_readwrite("state_major_digits", &DigitConvention::state_major_digits)
      .def_readwrite("most_significant_first", &DigitConvention::most_significant_first)
      .def_readwrite("up_action", &DigitConvention::up_action)
      .def("fingerprint", &DigitConvention::fingerprint)
      .def("describe", &DigitConvention::describe);

  py::class_<Transition>(m, "Transition")
      .def_readonly("next_state", &Transition::next_state)
      .def_readonly("action", &Transition::action)
      .def("__repr__", [](const Transition& t) {
        return "(" + std::to_string(t.next_state) + "," + std::to_string(t.action) + ")";
      });

  py::class_<TransitionTable>(m, "TransitionTable")
      .def_property_readonly("states", &TransitionTable::states)
      .def_property_readonly("actions", &TransitionTable::actions)
      .def("at", &TransitionTable::at, py::arg("state"), py::arg("symbol"))
      .def("evaluate", [](const TransitionTable& t, const std::vector<int>& window) {
        return t.evaluate(window);
      });

  m.def(
      "decode_rule",
      [](std::uint64_t number, int states, int actions, const DigitConvention& conv) {
        return decode_rule({number, states, actions}, conv);
      },
      py::arg("number"), py::arg("states") = 2, py::arg("actions") = 2,
      py::arg("conv") = DigitConvention{});
  m.def(
      "encode_rule",
      [](const TransitionTable& t, const DigitConvention& conv) {
        return encode_rule(t, conv).number;
      },
      py::arg("table"), py::arg("conv") = DigitConvention{});
  m.def(
      "relabel_rule",
      [](std::uint64_t number, int actions, const DigitConvention& conv) {
        return relabel_states({number, 2, actions}, conv).number;
      },
      py::arg("number"), py::arg("actions") = 2, py::arg("conv") = DigitConvention{});
  m.def(
      "rule_dot",
      [](std::uint64_t number, int states, int actions, const DigitConvention& conv) {
        return to_dot(decode_rule({number, states, actions}, conv), conv);
      },
      py::arg("number"), py::arg("states") = 2, py::arg("actions") = 2,
      py::arg("conv") = DigitConvention{});

  m.def(
      "evolve",
      [](std::uint64_t rule, int steps, int window, std::optional<std::uint64_t> rule2,
         bool alt_window, int assets, const DigitConvention& conv) {
        EvolveConfig cfg = make_config(rule, rule2, alt_window, assets, window);
        cfg.steps = steps;
        const Evolution evo = evolve(cfg, conv);
        return std::vector<int>(evo.movements.begin(), evo.movements.end());
      },
      py::arg("rule"), py::arg("steps"), py::arg("window") = 10, py::arg("rule2") = std::nullopt,
      py::arg("alt_window") = false, py::arg("assets") = 1, py::arg("conv") = DigitConvention{});

  m.def(
      "asset_series",
      [](const std::vector<int>& movements, int asset, int assets, int window,
         const DigitConvention& conv) {
        Evolution evo;
        evo.config = EvolveConfig{EvolveMode::multi, {0, 2, 1 << assets}, std::nullopt, window,
                                  assets, int(movements.size())};
        evo.movements.assign(movements.begin(), movements.end());
        return ifa::asset_series(evo, asset, conv);
      },
      py::arg("movements"), py::arg("asset"), py::arg("assets") = 2, py::arg("window") = 12,
      py::arg("conv") = DigitConvention{});

  py::class_<CycleReport>(m, "CycleReport")
      .def_readonly("preperiod", &CycleReport::preperiod)
      .def_readonly("period", &CycleReport::period)
      .def_readonly("state_preperiod", &CycleReport::state_preperiod)
      .def_readonly("state_period", &CycleReport::state_period)
      .def_readonly("complex", &CycleReport::complex)
      .def_readonly("threshold", &CycleReport::threshold)
      .def("__repr__", [](const CycleReport& r) {
        return "CycleReport(q=" + std::to_string(r.preperiod) +
               ", p=" + std::to_string(r.period) + ")";
      });

  m.def(
      "detect_cycle",
      [](std::uint64_t rule, int window, std::optional<std::uint64_t> rule2, bool alt_window,
         int assets, long threshold, bool brent, const DigitConvention& conv) {
        const EvolveConfig cfg = make_config(rule, rule2, alt_window, assets, window);
        return detect_cycle(cfg, conv, brent ? CycleMethod::brent : CycleMethod::hash, threshold);
      },
      py::arg("rule"), py::arg("window") = 10, py::arg("rule2") = std::nullopt,
      py::arg("alt_window") = false, py::arg("assets") = 1, py::arg("threshold") = 0,
      py::arg("brent") = false, py::arg("conv") = DigitConvention{});

  py::class_<stats::MomentSummary>(m, "MomentSummary")
      .def_readonly("count", &stats::MomentSummary::count)
      .def_readonly("mean", &stats::MomentSummary::mean)
      .def_readonly("skewness", &stats::MomentSummary::skewness)
      .def_readonly("kurtosis", &stats::MomentSummary::kurtosis);

  m.def("moments", &stats::moments);
  m.def("pearson", &stats::pearson);
  m.def(
      "rolling_correlation",
      [](const std::vector<double>& xs, const std::vector<double>& ys, int window, int stride) {
        return stats::rolling_correlation(xs, ys, window, stride);
      },
      py::arg("xs"), py::arg("ys"), py::arg("window") = 50, py::arg("stride") = 1);
  m.def("best_asset_return", &stats::best_asset_return, py::arg("xs"), py::arg("ys"),
        py::arg("t"), py::arg("window") = 50);
  m.def("spearman", &stats::spearman);

  m.def(
      "calibrate",
      [](int w_min, int w_max) {
        scan::CalibrateOptions opt;
        opt.w_min = w_min;
        opt.w_max = w_max;
        const auto out = scan::calibrate(opt);
        py::list result;
        for (const auto& c : out.accepted) {
          py::dict d;
          d["window"] = c.window;
          d["convention"] = c.convention;
          d["anchors"] = c.anchors;
          d["relabel_classes"] = c.relabel_classes;
          result.append(d);
        }
        return result;
      },
      py::arg("w_min") = 8, py::arg("w_max") = 12);

  m.def(
      "scan_multi_range",
      [](std::uint64_t begin, std::uint64_t end, int window, int horizon, int workers,
         const DigitConvention& conv) {
        scan::MultiScanParams p;
        p.begin = begin;
        p.end = end;
        p.window = window;
        p.horizon = horizon;
        const auto res = scan::scan_multi(p, conv, workers, std::nullopt, false, "");
        py::list out;
        for (const auto& r : res.passing) {
          py::dict d;
          d["rule"] = r.rule;
          d["correlation"] = r.correlation;
          d["dup_of"] = r.dup_of;
          out.append(d);
        }
        return out;
      },
      py::arg("begin"), py::arg("end"), py::arg("window") = 12, py::arg("horizon") = 100,
      py::arg("workers") = 2, py::arg("conv") = DigitConvention{});
}
