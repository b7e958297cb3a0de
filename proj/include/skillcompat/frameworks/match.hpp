#pragma once

#include <functional>
#include <string>
#include <vector>

#include "skillcompat/agents/evaluator.hpp"
#include "skillcompat/focal/factory.hpp"
#include "skillcompat/frameworks/bitstring.hpp"
#include "skillcompat/frameworks/game.hpp"

namespace skillcompat::frameworks {

// Win-share (W + D/2)/n in percent.
double win_share(uint64_t wins, uint64_t draws, uint64_t losses);
// Trinomial standard error in percent: 100 * 0.5 * sqrt((w + l - (w - l)^2) / n)
// with w, l the win and loss fractions.
double win_share_se(uint64_t wins, uint64_t draws, uint64_t losses);

struct MatchConfig {
  Framework framework = Framework::kStt;
  // Agent names in `registry`. Plain games use only the seniors.
  std::string focal_senior, focal_junior, alter_senior, alter_junior;
  focal::AgentRegistry registry;
  agents::EvaluatorSpec evaluator;
  uint64_t games = 0;
  uint64_t seed = 0;
  int workers = 1;
  int max_plies = chess::kDefaultMaxPlies;
  int opening_plies = 0;
  std::string opener;  // agent name; required when opening_plies > 0
  std::string config_hash;

  void validate() const;
};

struct MatchResult {
  uint64_t n = 0;  // scored games (aborted ones excluded)
  uint64_t wins = 0, draws = 0, losses = 0;
  uint64_t aborted = 0;
  uint64_t maxply_draws = 0;
  std::vector<GameRecord> records;  // every game, in index order

  double win_share() const { return frameworks::win_share(wins, draws, losses); }
  double se() const { return win_share_se(wins, draws, losses); }
};

MatchResult aggregate(std::vector<GameRecord> records);

// Called once per finished game, in index order, from the calling thread's
// perspective serialized (never concurrently).
using RecordSink = std::function<void(const GameRecord&)>;

// STT: game 2i and 2i+1 share pool bitstring i, focal white then black.
// HB and plain: focal plays white on even indices. Game i is seeded with
// derive_seed(seed, i). Each worker builds its own agents.
MatchResult play_match(const MatchConfig& cfg, const BitstringPool* pool = nullptr, const RecordSink& sink = {});

// Number of workers used when none is configured.
int default_workers();

}  // namespace skillcompat::frameworks
