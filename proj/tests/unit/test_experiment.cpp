#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "skillcompat/analysis/loss.hpp"
#include "skillcompat/experiment/commands.hpp"
#include "skillcompat/frameworks/record_io.hpp"
#include "skillcompat/util/error.hpp"

using namespace skillcompat;
using namespace skillcompat::experiment;

namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = fs::path(SKILLCOMPAT_FIXTURE_DIR) / "corpus.fen";

const char* kSmall = R"(schema = skillcompat-config/1

[experiment]
framework = stt
games = 2
seed = 5
workers = 1
max_plies = 24

[pool]
seed = 3
length = 24

[evaluator]
engine = builtin-strong
nodes = 200

[agent.weak]
kind = builtin-weak

[agent.strong]
kind = builtin-strong
nodes = 200

[team.focal]
senior = strong
junior = weak

[team.alter]
senior = strong
junior = weak
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("skillcompat_exp_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* f = ::popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[256];
  while (std::fgets(buf, sizeof(buf), f)) out += buf;
  ::pclose(f);
  return out;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("config parsing and validation") {
    auto suite = parse_suite(kSmall);
    REQUIRE(suite.experiments.size() == 1);
    const auto& m = suite.experiments[0].match;
    CHECK(m.framework == frameworks::Framework::kStt);
    CHECK(m.games == 2);
    CHECK(m.max_plies == 24);
    CHECK(m.focal_senior == "strong");
    CHECK(m.evaluator.nodes == 200);

    CHECK_THROWS_AS(parse_suite(replace(kSmall, "games = 2", "games = 3")), ConfigError);
    CHECK_THROWS_AS(parse_suite(replace(kSmall, "seed = 5", "sede = 5")), ConfigError);
    CHECK_THROWS_AS(parse_suite(replace(kSmall, "skillcompat-config/1", "skillcompat-config/9")), ConfigError);
    CHECK_THROWS_AS(parse_suite(replace(kSmall, "kind = builtin-weak", "kind = oracle")), Error);
    CHECK_THROWS_AS(parse_suite(replace(kSmall, "senior = strong\njunior", "senior = nobody\njunior")), ConfigError);
    CHECK_THROWS_AS(load_suite("/nonexistent/config.ini"), ConfigError);
  }

  TEST_CASE("config hash ignores layout, not content") {
    const std::string base = config_hash(kSmall);
    CHECK(base.size() == 16);
    std::string noisy = std::string("# a comment\n\n") + replace(kSmall, "games = 2", "games=2   ");
    CHECK(config_hash(noisy) == base);
    CHECK(config_hash(replace(kSmall, "seed = 5\nworkers = 1", "workers = 1\nseed = 5")) == base);
    CHECK(config_hash(replace(kSmall, "seed = 5", "seed = 6")) != base);
    CHECK(parse_suite(kSmall).hash == base);
  }

  TEST_CASE("corpus loading") {
    CHECK(load_corpus(kCorpus.string()).size() == 16);
    auto dir = scratch("corpus");
    std::ofstream(dir / "bad.fen") << chess::kStartFen << "\nnot a fen\n";
    try {
      load_corpus((dir / "bad.fen").string());
      FAIL("bad corpus accepted");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }

  TEST_CASE("agreement matrix") {
    auto suite = parse_suite(kSmall);
    const std::string csv = cmd_agreement(suite.experiments[0].match.registry, {"strong", "weak"}, kCorpus.string());
    std::istringstream in(csv);
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(header == "agent,strong,weak");
    CHECK(row1.rfind("strong,1.000000,", 0) == 0);
    CHECK(row2.substr(row2.size() - 9) == ",1.000000");
    const std::string sw = row1.substr(row1.rfind(',') + 1);
    const std::string ws = row2.substr(5, row2.rfind(',') - 5);
    CHECK(sw == ws);
    CHECK(sw == "0.875000");
  }

  TEST_CASE("run, annotate and report reproduce") {
    auto dir = scratch("run");
    std::ofstream(dir / "cfg.ini") << kSmall;
    RunOptions opts;
    opts.out = (dir / "a").string();
    auto summaries = cmd_run((dir / "cfg.ini").string(), opts);
    REQUIRE(summaries.size() == 1);
    const std::string label = summaries[0].label;
    opts.out = (dir / "b").string();
    cmd_run((dir / "cfg.ini").string(), opts);
    const auto records_a = dir / "a" / (label + ".records.jsonl");
    CHECK(slurp(records_a) == slurp(dir / "b" / (label + ".records.jsonl")));
    CHECK(slurp(dir / "a" / "pool.txt") == slurp(dir / "b" / "pool.txt"));

    const auto& evaluator = parse_suite(kSmall).experiments[0].match.evaluator;
    const uint64_t n1 = cmd_annotate(records_a.string(), evaluator, (dir / "l1.jsonl").string());
    const uint64_t n2 = cmd_annotate(records_a.string(), evaluator, (dir / "l2.jsonl").string());
    CHECK(n1 == n2);
    CHECK(slurp(dir / "l1.jsonl") == slurp(dir / "l2.jsonl"));
    uint64_t plies = 0;
    for (const auto& g : frameworks::read_records(records_a.string())) plies += g.aborted() ? 0 : g.plies.size();
    CHECK(n1 == plies);

    ReportOptions ro;
    ro.loss_paths = {(dir / "l1.jsonl").string()};
    ro.summary_paths = {(dir / "a" / (label + ".summary.json")).string()};
    ro.out_dir = (dir / "r1").string();
    auto r1 = cmd_report(ro);
    ro.out_dir = (dir / "r2").string();
    auto r2 = cmd_report(ro);
    CHECK(r1.text == r2.text);
    CHECK(slurp(dir / "r1" / "report.txt") == r1.text);
  }

  TEST_CASE("command line") {
    const std::string cli = SKILLCOMPAT_CLI;
    CHECK(capture(cli + " perft 3") == "8902\n");
    CHECK(capture(cli + " perft --fen '8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1' 2") == "191\n");
    CHECK(std::system((cli + " run --config /nonexistent.ini > /dev/null 2>&1").c_str()) != 0);
    auto dir = scratch("cli");
    std::ofstream(dir / "cfg.ini") << kSmall;
    const std::string csv = capture(cli + " agreement --config " + (dir / "cfg.ini").string() +
                                    " --agents weak,strong --corpus " + kCorpus.string());
    CHECK(csv.rfind("agent,weak,strong\n", 0) == 0);
  }
}
