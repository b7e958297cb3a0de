#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skillcompat/chess/position.hpp"
#include "skillcompat/experiment/commands.hpp"
#include "skillcompat/frameworks/match.hpp"
#include "skillcompat/util/error.hpp"

namespace py = pybind11;
namespace sx = skillcompat::experiment;

namespace {

py::object from_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::list summaries_to_py(const std::vector<skillcompat::analysis::MatchSummary>& v) {
  py::list out;
  for (const auto& s : v) out.append(from_json(s.to_json()));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Strong/weak chess team-play experiments";

  static py::exception<skillcompat::Error> error(m, "SkillcompatError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const skillcompat::Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("perft", &sx::cmd_perft, py::arg("fen") = std::string(skillcompat::chess::kStartFen), py::arg("depth"),
        "Leaf count of the legal move tree.");

  m.def(
      "legal_moves",
      [](const std::string& fen) {
        std::vector<std::string> out;
        for (const auto& mv : skillcompat::chess::Position::from_fen(fen).legal_moves()) out.push_back(mv.uci());
        return out;
      },
      py::arg("fen"), "Legal moves in UCI notation.");

  m.def("win_share", &skillcompat::frameworks::win_share, py::arg("wins"), py::arg("draws"), py::arg("losses"));
  m.def("win_share_se", &skillcompat::frameworks::win_share_se, py::arg("wins"), py::arg("draws"),
        py::arg("losses"));
  m.def("config_hash", &sx::config_hash, py::arg("text"));

  m.def(
      "run",
      [](const std::string& config, std::optional<uint64_t> seed, std::optional<int> workers,
         std::optional<std::string> out, std::optional<std::string> pool) {
        sx::RunOptions opts;
        opts.seed = seed;
        opts.workers = workers;
        opts.out = std::move(out);
        opts.pool = std::move(pool);
        std::vector<skillcompat::analysis::MatchSummary> result;
        {
          py::gil_scoped_release release;
          result = sx::cmd_run(config, opts);
        }
        return summaries_to_py(result);
      },
      py::arg("config"), py::kw_only(), py::arg("seed") = py::none(), py::arg("workers") = py::none(),
      py::arg("out") = py::none(), py::arg("pool") = py::none(),
      "Play every match of a config; returns one summary dict per match.");

  m.def(
      "annotate",
      [](const std::string& records, const std::string& out, const std::string& config, const std::string& table) {
        auto spec = sx::evaluator_for(config, table);
        py::gil_scoped_release release;
        return sx::cmd_annotate(records, spec, out);
      },
      py::arg("records"), py::arg("out"), py::kw_only(), py::arg("config") = "", py::arg("table") = "",
      "Write per-move losses; returns the number of move records.");

  m.def(
      "report",
      [](const std::vector<std::string>& losses, const std::vector<std::string>& summaries, const std::string& out) {
        sx::ReportOptions opts{losses, summaries, out, {}};
        return sx::cmd_report(opts).text;
      },
      py::arg("losses"), py::arg("summaries"), py::arg("out"), "Build the report into `out`; returns its text.");

  m.def(
      "agreement",
      [](const std::string& config, const std::vector<std::string>& agents, const std::string& corpus) {
        auto suite = sx::load_suite(config);
        const auto& match = suite.experiments.front().match;
        py::gil_scoped_release release;
        return sx::cmd_agreement(match.registry, agents, corpus, match.evaluator);
      },
      py::arg("config"), py::arg("agents"), py::arg("corpus"), "Argmax agreement matrix as CSV.");
}
