#include "skillcompat/agents/builtin.hpp"

#include <algorithm>

#include "skillcompat/util/error.hpp"

namespace skillcompat::agents {

Searcher& thread_searcher() {
  thread_local Searcher searcher;
  return searcher;
}

BuiltinStrongAgent::BuiltinStrongAgent(AgentSpec spec) : Agent(std::move(spec)) {
  if (this->spec().kind != AgentKind::kBuiltinStrong) throw ConfigError("BuiltinStrongAgent given another kind");
  this->spec().validate();
}

RootAnalysis BuiltinStrongAgent::analyze(const Position& p) const {
  return thread_searcher().analyze(p, spec().effective_nodes());
}

MoveDistribution BuiltinStrongAgent::policy(const Position& p) {
  require_nonterminal(p);
  RootAnalysis a = analyze(p);
  std::vector<Move> moves;
  std::vector<double> scores;
  for (const auto& rs : a.scores) {
    moves.push_back(rs.move);
    scores.push_back(rs.score);
  }
  return MoveDistribution::softmax(moves, scores, spec().effective_temperature());
}

WinProb BuiltinStrongAgent::value(const Position& p) {
  if (auto t = terminal_winprob(p)) return *t;
  return WinProb{logistic_winprob(analyze(p).best_score(), spec().slope)};
}

Move BuiltinStrongAgent::select_move(const Position& p, Rng& rng, SamplingMode mode) {
  if (mode == SamplingMode::kSample) return Agent::select_move(p, rng, mode);
  require_nonterminal(p);
  // Scores are sorted best first with UCI tie-break, matching policy().argmax().
  return analyze(p).scores.front().move;
}

BuiltinWeakAgent::BuiltinWeakAgent(AgentSpec spec) : Agent(std::move(spec)) {
  if (this->spec().kind != AgentKind::kBuiltinWeak) throw ConfigError("BuiltinWeakAgent given another kind");
  this->spec().validate();
}

MoveDistribution BuiltinWeakAgent::policy(const Position& p) { return policy_and_value(p).first; }

WinProb BuiltinWeakAgent::value(const Position& p) {
  if (auto t = terminal_winprob(p)) return *t;
  return policy_and_value(p).second;
}

std::pair<MoveDistribution, WinProb> BuiltinWeakAgent::policy_and_value(const Position& p) {
  require_nonterminal(p);
  std::vector<Move> moves;
  std::vector<double> scores;
  int best = -kInfinity;
  for (const auto& rs : thread_searcher().shallow_scores(p)) {
    moves.push_back(rs.move);
    scores.push_back(rs.score);
    best = std::max(best, rs.score);
  }
  WinProb v = terminal_winprob(p).value_or(WinProb{logistic_winprob(best, spec().slope)});
  return {MoveDistribution::softmax(moves, scores, spec().effective_temperature()), v};
}

}  // namespace skillcompat::agents
