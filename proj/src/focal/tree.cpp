#include "skillcompat/focal/tree.hpp"

#include "skillcompat/util/error.hpp"

namespace skillcompat::focal {

std::optional<double> AgentSearchModel::terminal_value(const Position& p) {
  if (auto t = agents::terminal_winprob(p)) return t->value / 50.0 - 1.0;
  return std::nullopt;
}

LeafEvaluation<Move> AgentSearchModel::evaluate(const Position& p) {
  auto [dist, value] = model_.policy_and_value(p);
  LeafEvaluation<Move> out;
  out.priors.reserve(dist.size());
  for (const auto& e : dist.entries()) out.priors.emplace_back(e.move, e.prob);
  out.value = value.value / 50.0 - 1.0;
  return out;
}

SearchSummary<Move> tree_search(Agent& weak_model, const TreeConfig& cfg, const Position& p) {
  if (p.legal_moves().empty()) throw AgentError("tree search from a terminal position");
  if (cfg.budget < 1) throw ConfigError("tree budget must be >= 1");
  if (!(cfg.c_puct > 0.0)) throw ConfigError("c_puct must be > 0");
  AgentSearchModel model(weak_model);
  Mcts<AgentSearchModel> mcts(model, cfg.c_puct);
  return mcts.run(p, cfg.budget);
}

Move tree_move(Agent& weak_model, const TreeConfig& cfg, const Position& p) {
  auto summary = tree_search(weak_model, cfg, p);
  return summary.children[summary.best].action;
}

TreeAgent::TreeAgent(AgentSpec spec, std::shared_ptr<Agent> weak_model)
    : Agent(std::move(spec)), weak_(std::move(weak_model)) {
  this->spec().validate();
  if (!weak_) throw ConfigError("tree agent '" + name() + "' has no weak model");
}

TreeConfig TreeAgent::config() const {
  return TreeConfig{static_cast<uint32_t>(spec().effective_nodes()), spec().c_puct, spec().seed};
}

MoveDistribution TreeAgent::policy(const Position& p) {
  require_nonterminal(p);
  auto summary = tree_search(*weak_, config(), p);
  std::vector<agents::MoveProb> entries;
  const double total = summary.root_visits > 1 ? summary.root_visits - 1.0 : 0.0;
  for (const auto& c : summary.children) {
    entries.push_back({c.action, total > 0.0 ? c.visits / total : c.prior});
  }
  return MoveDistribution(std::move(entries));
}

WinProb TreeAgent::value(const Position& p) {
  if (auto t = agents::terminal_winprob(p)) return *t;
  auto summary = tree_search(*weak_, config(), p);
  return WinProb{(summary.root_q + 1.0) * 50.0};
}

Move TreeAgent::select_move(const Position& p, Rng& rng, agents::SamplingMode mode) {
  if (mode == agents::SamplingMode::kSample) return Agent::select_move(p, rng, mode);
  require_nonterminal(p);
  return tree_move(*weak_, config(), p);
}

}  // namespace skillcompat::focal
