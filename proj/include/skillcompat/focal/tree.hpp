#pragma once

#include <memory>

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/focal/mcts.hpp"

namespace skillcompat::focal {

using agents::Agent;
using agents::AgentSpec;
using agents::MoveDistribution;
using agents::WinProb;
using chess::Move;
using chess::Position;

struct TreeConfig {
  uint32_t budget = 1500;
  double c_puct = 1.25;
  uint64_t seed = 0;
};

// Chess as seen through a (weak) model: priors from its policy, leaf values
// from its value head, exact values at decided boards.
class AgentSearchModel {
 public:
  using State = Position;
  using Action = Move;

  explicit AgentSearchModel(Agent& model) : model_(model) {}

  std::optional<double> terminal_value(const Position& p);
  LeafEvaluation<Move> evaluate(const Position& p);
  Position apply(const Position& p, const Move& m) { return p.apply_unchecked(m); }
  bool action_less(const Move& a, const Move& b) { return chess::uci_less(a, b); }

 private:
  Agent& model_;
};

SearchSummary<Move> tree_search(Agent& weak_model, const TreeConfig& cfg, const Position& p);

// Root child with the most visits (ties: higher Q, higher prior, UCI order).
Move tree_move(Agent& weak_model, const TreeConfig& cfg, const Position& p);

// MCTS over a weak model's policy and value.
class TreeAgent final : public Agent {
 public:
  TreeAgent(AgentSpec spec, std::shared_ptr<Agent> weak_model);

  // Normalized root visit counts (the prior when the budget allows no visits).
  MoveDistribution policy(const Position& p) override;
  WinProb value(const Position& p) override;
  Move select_move(const Position& p, Rng& rng, agents::SamplingMode mode) override;

  TreeConfig config() const;

 private:
  std::shared_ptr<Agent> weak_;
};

}  // namespace skillcompat::focal
