#include "skillcompat/frameworks/match.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "skillcompat/util/error.hpp"

namespace skillcompat::frameworks {

double win_share(uint64_t wins, uint64_t draws, uint64_t losses) {
  const uint64_t n = wins + draws + losses;
  if (n == 0) throw EmptySetError("win-share of zero games");
  return 100.0 * (static_cast<double>(wins) + 0.5 * static_cast<double>(draws)) / static_cast<double>(n);
}

double win_share_se(uint64_t wins, uint64_t draws, uint64_t losses) {
  const uint64_t n = wins + draws + losses;
  if (n == 0) throw EmptySetError("standard error of zero games");
  const double nn = static_cast<double>(n);
  const double w = static_cast<double>(wins) / nn;
  const double l = static_cast<double>(losses) / nn;
  const double var = std::max(0.0, w + l - (w - l) * (w - l));
  return 100.0 * 0.5 * std::sqrt(var / nn);
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 1 ? static_cast<int>(hw) - 1 : 1;
}

void MatchConfig::validate() const {
  if (games == 0) throw ConfigError("game count must be >= 1");
  if (framework == Framework::kStt && games % 2 != 0) throw ConfigError("STT game count must be even");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (max_plies < 1) throw ConfigError("max_plies must be >= 1");
  if (opening_plies < 0) throw ConfigError("opening_plies must be >= 0");
  if (opening_plies > 0 && opener.empty()) throw ConfigError("opening_plies needs an opener agent");
  if (framework == Framework::kStt && opening_plies > 0) throw ConfigError("STT games take no opening plies");
  registry.validate();
  registry.get(focal_senior);
  registry.get(alter_senior);
  if (framework != Framework::kPlain) {
    registry.get(focal_junior);
    registry.get(alter_junior);
  }
  if (!opener.empty()) registry.get(opener);
  evaluator.validate();
}

MatchResult aggregate(std::vector<GameRecord> records) {
  MatchResult out;
  for (const auto& r : records) {
    if (r.aborted()) {
      ++out.aborted;
      continue;
    }
    ++out.n;
    const int s = r.focal_score();
    if (s > 0) ++out.wins;
    if (s == 0) ++out.draws;
    if (s < 0) ++out.losses;
    if (r.termination == chess::to_string(chess::GameStatus::kDrawMaxPly)) ++out.maxply_draws;
  }
  out.records = std::move(records);
  return out;
}

namespace {

// One worker's agents, built once and reused across its games.
struct Roster {
  Team focal;
  Team alter;
  std::shared_ptr<Agent> opener;
};

Roster build_roster(const MatchConfig& cfg) {
  auto build = [&](const std::string& name, const focal::ExpectorWiring& w) -> std::shared_ptr<Agent> {
    if (name.empty()) return nullptr;
    return focal::build_agent(cfg.registry, name, cfg.evaluator, w);
  };
  const bool hb = cfg.framework == Framework::kHb;
  focal::ExpectorWiring focal_w{cfg.focal_junior, cfg.alter_senior, cfg.alter_junior, hb ? cfg.focal_junior : ""};
  focal::ExpectorWiring alter_w{cfg.alter_junior, cfg.focal_senior, cfg.focal_junior, hb ? cfg.alter_junior : ""};
  Roster r;
  r.focal.role = TeamRole::kFocal;
  r.alter.role = TeamRole::kAlter;
  r.focal.senior = build(cfg.focal_senior, focal_w);
  r.alter.senior = build(cfg.alter_senior, alter_w);
  if (cfg.framework != Framework::kPlain) {
    r.focal.junior = build(cfg.focal_junior, focal_w);
    r.alter.junior = build(cfg.alter_junior, alter_w);
  }
  r.opener = build(cfg.opener, {});
  return r;
}

GameRecord play_one(const MatchConfig& cfg, const BitstringPool* pool, Roster& roster, uint64_t index) {
  const uint64_t seed = derive_seed(cfg.seed, index);
  const bool focal_white = index % 2 == 0;
  Team& white = focal_white ? roster.focal : roster.alter;
  Team& black = focal_white ? roster.alter : roster.focal;
  GameOptions opts;
  opts.max_plies = cfg.max_plies;
  opts.opening_plies = cfg.opening_plies;
  opts.opener = roster.opener;
  GameRecord rec;
  switch (cfg.framework) {
    case Framework::kStt:
      rec = play_stt_game(white, black, pool->at(index / 2), seed, opts);
      break;
    case Framework::kHb:
      rec = play_hb_game(white, black, seed, opts);
      break;
    case Framework::kPlain:
      rec = play_plain_game(white, black, seed, opts);
      break;
  }
  rec.index = index;
  rec.config_hash = cfg.config_hash;
  return rec;
}

}  // namespace

MatchResult play_match(const MatchConfig& cfg, const BitstringPool* pool, const RecordSink& sink) {
  cfg.validate();
  if (cfg.framework == Framework::kStt) {
    if (!pool) throw ConfigError("STT matches need a bitstring pool");
    if (pool->size() < cfg.games / 2) {
      throw ConfigError("bitstring pool holds " + std::to_string(pool->size()) + " bitstrings, need " +
                        std::to_string(cfg.games / 2));
    }
    if (pool->length() < static_cast<size_t>(cfg.max_plies)) throw ConfigError("bitstrings shorter than max_plies");
  }

  const int workers = static_cast<int>(std::min<uint64_t>(static_cast<uint64_t>(cfg.workers), cfg.games));
  std::vector<GameRecord> records(cfg.games);
  std::atomic<uint64_t> next{0};
  std::mutex mutex;
  std::map<uint64_t, bool> done;
  uint64_t emitted = 0;
  std::exception_ptr failure;

  auto finish = [&](uint64_t index, GameRecord rec) {
    std::lock_guard lock(mutex);
    records[index] = std::move(rec);
    done[index] = true;
    while (done.count(emitted)) {
      done.erase(emitted);
      if (sink) sink(records[emitted]);
      ++emitted;
    }
  };

  auto work = [&] {
    try {
      Roster roster = build_roster(cfg);
      for (uint64_t i = next++; i < cfg.games; i = next++) finish(i, play_one(cfg, pool, roster, i));
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!failure) failure = std::current_exception();
      next = cfg.games;
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(std::move(records));
}

}  // namespace skillcompat::frameworks
