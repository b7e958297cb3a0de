#pragma once

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/agents/search.hpp"

namespace skillcompat::agents {

// Per-thread searcher; builtin agents share nothing across threads.
Searcher& thread_searcher();

// Alpha-beta stand-in for a strong engine. Policy is a low-temperature
// softmax over exact root scores, so mass sits on the search's best line.
class BuiltinStrongAgent final : public Agent {
 public:
  explicit BuiltinStrongAgent(AgentSpec spec);

  MoveDistribution policy(const Position& p) override;
  WinProb value(const Position& p) override;
  Move select_move(const Position& p, Rng& rng, SamplingMode mode) override;

  RootAnalysis analyze(const Position& p) const;
};

// One ply plus quiescence, softmaxed at a temperature (default 100 cp).
class BuiltinWeakAgent final : public Agent {
 public:
  explicit BuiltinWeakAgent(AgentSpec spec);

  MoveDistribution policy(const Position& p) override;
  WinProb value(const Position& p) override;
  std::pair<MoveDistribution, WinProb> policy_and_value(const Position& p) override;
};

}  // namespace skillcompat::agents
