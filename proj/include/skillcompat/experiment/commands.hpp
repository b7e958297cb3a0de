#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skillcompat/analysis/report.hpp"
#include "skillcompat/experiment/config.hpp"

namespace skillcompat::experiment {

struct RunOptions {
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<std::string> pool;  // pool file to load (or create)
  bool quiet = true;
};

// Per match: <out>/<label>.records.jsonl, <label>.pgn, <label>.summary.json;
// STT suites also write <out>/pool.txt unless a pool path is given.
std::vector<analysis::MatchSummary> cmd_run(const std::string& config_path, const RunOptions& opts = {});
std::vector<analysis::MatchSummary> run_suite(const ExperimentSuite& suite, const RunOptions& opts = {});

// Pool for a suite: loaded from `path` when it exists, else generated (and
// saved there when a path is given).
frameworks::BitstringPool resolve_pool(const ExperimentSuite& suite, const std::string& path);

// Evaluator from a config's [evaluator] section, a FEN table, or both (the
// table wins). At least one must be given.
agents::EvaluatorSpec evaluator_for(const std::string& config_path, const std::string& table_path);

// Annotates every non-aborted game; returns the number of loss records.
uint64_t cmd_annotate(const std::string& records_path, const agents::EvaluatorSpec& evaluator,
                      const std::string& out_path);

struct ReportOptions {
  std::vector<std::string> loss_paths;
  std::vector<std::string> summary_paths;
  std::string out_dir;
  std::vector<analysis::CounterfactualRow> counterfactual;
};

// Writes report.txt plus CSV and curve files into out_dir; returns the report.
analysis::Report cmd_report(const ReportOptions& opts);

uint64_t cmd_perft(const std::string& fen, int depth);

// Square CSV matrix of argmax agreement rates between the named agents over
// the FEN corpus (one FEN per line).
std::string cmd_agreement(const focal::AgentRegistry& registry, const std::vector<std::string>& agents,
                          const std::string& corpus_path, const agents::EvaluatorSpec& evaluator = {});

std::vector<chess::Position> load_corpus(const std::string& path);

// Positions before each move made by the given role's senior, across games.
std::vector<chess::Position> boards_before(const std::vector<frameworks::GameRecord>& games,
                                           frameworks::TeamRole team);

// Fixed-board counterfactual rows: each senior on the boards faced by the
// focal and by the alter senior. Expectors are wired against the suite's
// alter team with `junior` as partner.
std::vector<analysis::CounterfactualRow> counterfactual_rows(const ExperimentSuite& suite,
                                                             const std::vector<std::string>& seniors,
                                                             const std::string& junior,
                                                             const std::vector<frameworks::GameRecord>& games);

}  // namespace skillcompat::experiment
