#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "skillcompat/analysis/metrics.hpp"

namespace skillcompat::analysis {

// Match-level numbers as persisted by `run`.
struct MatchSummary {
  std::string label;
  Framework framework = Framework::kStt;
  uint64_t n = 0, wins = 0, draws = 0, losses = 0, aborted = 0, maxply_draws = 0;
  double win_share = 0.0;
  double se = 0.0;
  std::string config_hash;
  std::string pool_id;

  nlohmann::json to_json() const;
  static MatchSummary from_json(const nlohmann::json& j);
};

struct CounterfactualRow {
  std::string senior;
  std::string boards;  // which team's board distribution
  CounterfactualResult result;
};

struct ReportInputs {
  std::vector<MatchSummary> matches;
  std::vector<MoveLossRecord> losses;
  std::string config_hash;
  std::string pool_id;
  std::string evaluator;
  uint64_t aborted_games = 0;
  std::vector<double> bucket_edges = default_bucket_edges();
  std::vector<double> thresholds = {0, 2, 5, 10, 15, 20, 30, 40, 50};
  std::vector<CounterfactualRow> counterfactual;
};

struct Report {
  std::string text;
  std::map<std::string, std::string> files;  // file name -> contents (CSV, curve data)
};

// Deterministic for identical inputs. Sections without data are omitted
// (HB) or rendered as "n/a (0 moves)".
Report build_report(const ReportInputs& in);

std::string format_metric(const std::optional<MetricValue>& v);

}  // namespace skillcompat::analysis
