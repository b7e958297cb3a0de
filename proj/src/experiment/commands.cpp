#include "skillcompat/experiment/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "skillcompat/analysis/loss.hpp"
#include "skillcompat/frameworks/record_io.hpp"
#include "skillcompat/util/error.hpp"

namespace skillcompat::experiment {

namespace fs = std::filesystem;
using frameworks::Framework;

namespace {

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

bool needs_pool(const ExperimentSuite& suite) {
  for (const auto& e : suite.experiments) {
    if (e.match.framework == Framework::kStt) return true;
  }
  return false;
}

}  // namespace

frameworks::BitstringPool resolve_pool(const ExperimentSuite& suite, const std::string& path) {
  if (!path.empty() && fs::exists(path)) return frameworks::BitstringPool::load(path);
  const PoolSpec& spec = suite.experiments.front().pool;
  uint64_t count = spec.count;
  for (const auto& e : suite.experiments) {
    if (e.match.framework == Framework::kStt) count = std::max(count, e.match.games / 2);
  }
  auto pool = frameworks::BitstringPool::generate(spec.seed, count, spec.length);
  if (!path.empty()) pool.save(path);
  return pool;
}

std::vector<analysis::MatchSummary> run_suite(const ExperimentSuite& suite, const RunOptions& opts) {
  if (suite.experiments.empty()) throw ConfigError("suite has no experiments");
  const std::string out_dir = opts.out.value_or(suite.experiments.front().output_dir.empty()
                                                    ? std::string("out")
                                                    : suite.experiments.front().output_dir);
  fs::create_directories(out_dir);

  std::optional<frameworks::BitstringPool> pool;
  std::string pool_id;
  if (needs_pool(suite)) {
    std::string path = opts.pool.value_or(suite.experiments.front().pool.path);
    if (path.empty()) path = (fs::path(out_dir) / "pool.txt").string();
    pool = resolve_pool(suite, path);
    pool_id = pool->id();
  }

  std::vector<analysis::MatchSummary> summaries;
  for (const auto& exp : suite.experiments) {
    frameworks::MatchConfig cfg = exp.match;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.workers) cfg.workers = *opts.workers;
    const fs::path base = fs::path(out_dir) / exp.label;

    std::ofstream records(base.string() + ".records.jsonl", std::ios::binary);
    std::ofstream pgn(base.string() + ".pgn", std::ios::binary);
    if (!records || !pgn) throw ConfigError("cannot write match output under '" + out_dir + "'");
    auto sink = [&](const frameworks::GameRecord& g) {
      records << frameworks::to_jsonl_line(g) << '\n';
      records.flush();
      pgn << frameworks::to_pgn(g);
      if (!opts.quiet) {
        std::cerr << exp.label << ": game " << g.index << " " << frameworks::to_string(g.result) << " ("
                  << g.termination << ", " << g.plies.size() << " plies)\n";
      }
    };
    const frameworks::MatchResult r =
        frameworks::play_match(cfg, pool && cfg.framework == Framework::kStt ? &*pool : nullptr, sink);

    analysis::MatchSummary s;
    s.label = exp.label;
    s.framework = cfg.framework;
    s.n = r.n;
    s.wins = r.wins;
    s.draws = r.draws;
    s.losses = r.losses;
    s.aborted = r.aborted;
    s.maxply_draws = r.maxply_draws;
    s.win_share = r.n ? r.win_share() : 0.0;
    s.se = r.n ? r.se() : 0.0;
    s.config_hash = suite.hash;
    s.pool_id = cfg.framework == Framework::kStt ? pool_id : "";
    write_file(base.string() + ".summary.json", s.to_json().dump(2) + "\n");
    summaries.push_back(s);
  }
  return summaries;
}

std::vector<analysis::MatchSummary> cmd_run(const std::string& config_path, const RunOptions& opts) {
  return run_suite(load_suite(config_path), opts);
}

agents::EvaluatorSpec evaluator_for(const std::string& config_path, const std::string& table_path) {
  if (config_path.empty() && table_path.empty()) throw ConfigError("annotate needs a config or an evaluator table");
  agents::EvaluatorSpec spec;
  if (!config_path.empty()) spec = load_suite(config_path).experiments.front().match.evaluator;
  if (!table_path.empty()) spec.table_path = table_path;
  return spec;
}

uint64_t cmd_annotate(const std::string& records_path, const agents::EvaluatorSpec& evaluator,
                      const std::string& out_path) {
  const auto games = frameworks::read_records(records_path);
  auto eval = focal::make_evaluator(evaluator);
  analysis::LossFileHeader header;
  header.evaluator = evaluator.describe();
  std::vector<analysis::MoveLossRecord> all;
  for (const auto& g : games) {
    if (header.config_hash.empty()) header.config_hash = g.config_hash;
    if (g.aborted()) {
      ++header.aborted;
      continue;
    }
    ++header.games;
    auto recs = analysis::annotate_losses(g, *eval);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  analysis::write_losses(out_path, header, all);
  return all.size();
}

analysis::Report cmd_report(const ReportOptions& opts) {
  if (opts.loss_paths.empty() && opts.summary_paths.empty()) throw ConfigError("report needs loss or summary inputs");
  analysis::ReportInputs in;
  for (const auto& path : opts.loss_paths) {
    analysis::LossFileHeader h;
    auto recs = analysis::read_losses(path, &h);
    in.losses.insert(in.losses.end(), recs.begin(), recs.end());
    in.aborted_games += h.aborted;
    if (in.config_hash.empty()) in.config_hash = h.config_hash;
    if (in.evaluator.empty()) in.evaluator = h.evaluator;
  }
  for (const auto& path : opts.summary_paths) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open summary '" + path + "'");
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": " + e.what());
    }
    auto s = analysis::MatchSummary::from_json(j);
    if (in.config_hash.empty()) in.config_hash = s.config_hash;
    if (in.pool_id.empty()) in.pool_id = s.pool_id;
    in.matches.push_back(std::move(s));
  }
  in.counterfactual = opts.counterfactual;
  analysis::Report rep = analysis::build_report(in);
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    write_file(fs::path(opts.out_dir) / "report.txt", rep.text);
    for (const auto& [name, body] : rep.files) write_file(fs::path(opts.out_dir) / name, body);
  }
  return rep;
}

uint64_t cmd_perft(const std::string& fen, int depth) {
  if (depth < 0) throw ConfigError("perft depth must be >= 0");
  return chess::perft(chess::Position::from_fen(fen), depth);
}

std::vector<chess::Position> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus '" + path + "'");
  std::vector<chess::Position> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(chess::Position::from_fen(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string cmd_agreement(const focal::AgentRegistry& registry, const std::vector<std::string>& names,
                          const std::string& corpus_path, const agents::EvaluatorSpec& evaluator) {
  const auto corpus = load_corpus(corpus_path);
  std::vector<std::shared_ptr<agents::Agent>> built;
  for (const auto& n : names) built.push_back(focal::build_agent(registry, n, evaluator));
  // Argmax moves once per agent; the matrix compares them pairwise.
  std::vector<std::vector<chess::Move>> moves(built.size());
  for (size_t i = 0; i < built.size(); ++i) {
    Rng unused(0);
    for (const auto& p : corpus) moves[i].push_back(built[i]->select_move(p, unused, agents::SamplingMode::kArgmax));
  }
  if (corpus.empty()) throw EmptySetError("agreement corpus is empty");
  std::ostringstream out;
  out << "agent";
  for (const auto& n : names) out << "," << n;
  out << "\n";
  char buf[32];
  for (size_t i = 0; i < names.size(); ++i) {
    out << names[i];
    for (size_t j = 0; j < names.size(); ++j) {
      size_t same = 0;
      for (size_t k = 0; k < corpus.size(); ++k) same += moves[i][k] == moves[j][k] ? 1 : 0;
      std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(same) / static_cast<double>(corpus.size()));
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::vector<chess::Position> boards_before(const std::vector<frameworks::GameRecord>& games,
                                           frameworks::TeamRole team) {
  std::vector<chess::Position> out;
  for (const auto& g : games) {
    if (g.aborted()) continue;
    const auto positions = g.replay();
    for (size_t i = 0; i < g.plies.size(); ++i) {
      if (g.plies[i].team == team && g.plies[i].actor == frameworks::Actor::kSenior) out.push_back(positions[i]);
    }
  }
  return out;
}

std::vector<analysis::CounterfactualRow> counterfactual_rows(const ExperimentSuite& suite,
                                                             const std::vector<std::string>& seniors,
                                                             const std::string& junior,
                                                             const std::vector<frameworks::GameRecord>& games) {
  const frameworks::MatchConfig& m = suite.experiments.front().match;
  auto eval = focal::make_evaluator(m.evaluator);
  focal::ExpectorWiring wiring{junior, m.alter_senior, m.alter_junior, ""};
  std::vector<analysis::CounterfactualRow> rows;
  for (frameworks::TeamRole team : {frameworks::TeamRole::kFocal, frameworks::TeamRole::kAlter}) {
    const auto boards = boards_before(games, team);
    for (const auto& name : seniors) {
      auto senior = focal::build_agent(m.registry, name, m.evaluator, wiring);
      auto weak = focal::build_agent(m.registry, junior, m.evaluator);
      analysis::CounterfactualRow row;
      row.senior = name;
      row.boards = std::string(frameworks::to_string(team));
      row.result = analysis::induced_loss_counterfactual(boards, *senior, *weak, *eval);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace skillcompat::experiment
