#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "skillcompat/analysis/report.hpp"
#include "skillcompat/experiment/commands.hpp"
#include "skillcompat/frameworks/record_io.hpp"
#include "skillcompat/util/error.hpp"

namespace sx = skillcompat::experiment;
using skillcompat::Error;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team-play experiments with strong and weak chess agents"};
  app.require_subcommand(1);

  std::string config, out, pool, table, fen(skillcompat::chess::kStartFen), corpus, records, agents_csv;
  uint64_t seed = 0;
  int workers = 0, depth = 1;
  bool verbose = false;
  std::vector<std::string> losses, summaries;
  std::string cf_seniors, cf_junior, cf_records;

  auto* run = app.add_subcommand("run", "Play the matches of an experiment config");
  run->add_option("--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Override the master seed");
  auto* workers_opt = run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Output directory");
  run->add_option("--pool", pool, "Bitstring pool file (loaded if present, else written)");
  run->add_flag("-v,--verbose", verbose, "Log each finished game");

  auto* annotate = app.add_subcommand("annotate", "Compute per-move win-probability losses");
  annotate->add_option("--records", records, "Game records (JSON lines)")->required()->check(CLI::ExistingFile);
  annotate->add_option("--config", config, "Config whose [evaluator] section to use");
  annotate->add_option("--table", table, "Evaluator table (FEN<TAB>wp)");
  annotate->add_option("--out", out, "Loss file to write")->required();

  auto* report = app.add_subcommand("report", "Build tables and curve files");
  report->add_option("--losses", losses, "Loss files")->check(CLI::ExistingFile);
  report->add_option("--summaries", summaries, "Match summary files")->check(CLI::ExistingFile);
  report->add_option("--out", out, "Report directory")->required();
  report->add_option("--config", config, "Config for the counterfactual agents");
  report->add_option("--cf-seniors", cf_seniors, "Comma-separated seniors for the fixed-board counterfactual");
  report->add_option("--cf-junior", cf_junior, "Junior for the fixed-board counterfactual");
  report->add_option("--cf-records", cf_records, "STT records supplying the boards");

  auto* perft = app.add_subcommand("perft", "Count leaf nodes of the legal move tree");
  perft->add_option("--fen", fen, "Position (default: start)");
  perft->add_option("depth", depth, "Depth")->required();

  auto* agreement = app.add_subcommand("agreement", "Pairwise argmax agreement matrix");
  agreement->add_option("--config", config, "Config defining the agents")->required()->check(CLI::ExistingFile);
  agreement->add_option("--agents", agents_csv, "Comma-separated agent names")->required();
  agreement->add_option("--corpus", corpus, "FEN corpus, one per line")->required()->check(CLI::ExistingFile);
  agreement->add_option("--out", out, "CSV file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      sx::RunOptions opts;
      if (*seed_opt) opts.seed = seed;
      if (*workers_opt) opts.workers = workers;
      if (!out.empty()) opts.out = out;
      if (!pool.empty()) opts.pool = pool;
      opts.quiet = !verbose;
      for (const auto& s : sx::cmd_run(config, opts)) {
        std::printf("%s: %s n=%llu W=%llu D=%llu L=%llu aborted=%llu win-share=%.2f se=%.2f\n", s.label.c_str(),
                    std::string(skillcompat::frameworks::to_string(s.framework)).c_str(),
                    static_cast<unsigned long long>(s.n), static_cast<unsigned long long>(s.wins),
                    static_cast<unsigned long long>(s.draws), static_cast<unsigned long long>(s.losses),
                    static_cast<unsigned long long>(s.aborted), s.win_share, s.se);
      }
    } else if (*annotate) {
      uint64_t n = sx::cmd_annotate(records, sx::evaluator_for(config, table), out);
      std::printf("%llu move records written to %s\n", static_cast<unsigned long long>(n), out.c_str());
    } else if (*report) {
      sx::ReportOptions opts;
      opts.loss_paths = losses;
      opts.summary_paths = summaries;
      opts.out_dir = out;
      if (!cf_seniors.empty()) {
        if (config.empty() || cf_junior.empty() || cf_records.empty()) {
          throw skillcompat::ConfigError("counterfactual needs --config, --cf-junior and --cf-records");
        }
        opts.counterfactual = sx::counterfactual_rows(sx::load_suite(config), split_csv(cf_seniors), cf_junior,
                                                       skillcompat::frameworks::read_records(cf_records));
      }
      std::fputs(sx::cmd_report(opts).text.c_str(), stdout);
    } else if (*perft) {
      std::printf("%llu\n", static_cast<unsigned long long>(sx::cmd_perft(fen, depth)));
    } else if (*agreement) {
      auto suite = sx::load_suite(config);
      const auto& m = suite.experiments.front().match;
      std::string csv = sx::cmd_agreement(m.registry, split_csv(agents_csv), corpus, m.evaluator);
      if (out.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        std::ofstream(out, std::ios::binary) << csv;
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
