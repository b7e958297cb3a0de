#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/agents/evaluator.hpp"
#include "skillcompat/focal/expector.hpp"
#include "skillcompat/focal/mcts.hpp"

namespace skillcompat::testing {

// Perft over a self-contained 0x88 move generator that shares no code with
// the library's board.
uint64_t reference_perft(const std::string& fen, int depth);

// Agent whose policy weights are hashes of (seed, position, move).
class StubAgent final : public agents::Agent {
 public:
  StubAgent(std::string name, uint64_t seed);

  // Integer weight in [1, 1000] of move m in p.
  uint64_t weight(const chess::Position& p, const chess::Move& m) const;

  agents::MoveDistribution policy(const chess::Position& p) override;
  agents::WinProb value(const chess::Position& p) override;

 private:
  uint64_t seed_;
};

// Fixed distributions at listed positions; elsewhere all mass on `fallback`.
class ScriptedAgent final : public agents::Agent {
 public:
  ScriptedAgent(std::string name, std::string fallback,
                std::optional<agents::SamplingMode> sampling = std::nullopt);

  void at(const chess::Position& p, std::vector<std::pair<std::string, double>> probs);

  agents::MoveDistribution policy(const chess::Position& p) override;
  agents::WinProb value(const chess::Position&) override { return agents::WinProb{50.0}; }

 private:
  std::string fallback_;
  std::map<std::string, std::vector<std::pair<std::string, double>>> table_;
};

// White-perspective win probability hashed from the position.
class StubEvaluator final : public agents::WinProbEvaluator {
 public:
  explicit StubEvaluator(uint64_t seed) : seed_(seed) {}
  double white_wp(const chess::Position& p) const;
  agents::WinProb evaluate(const chess::Position& p, chess::Color perspective) override;

 private:
  uint64_t seed_;
};

struct StubWorld {
  chess::Position position = chess::Position::start();
  std::shared_ptr<StubAgent> base_strong, opponent_senior, opponent_junior, partner_junior, own_hand;
  std::shared_ptr<StubEvaluator> evaluator;
  int width = 5;

  focal::ExpectorConfig config(agents::ExpectorMode mode) const;
};

// Random reachable position and fresh stub models, all from `seed`.
StubWorld make_stub_world(uint64_t seed);

// Brute-force enumeration of the expector's decision rules.
chess::Move brute_force_stt(const StubWorld& w, agents::ExpectorMode mode);
chess::PieceType brute_force_hb(const StubWorld& w);

// Explicit game tree: leaves carry exact values, inner nodes a prior per
// child and a value estimate; values are for the side to move at the node.
struct StubTree {
  struct Node {
    std::vector<int> children;
    std::vector<double> priors;
    double value = 0.0;
    bool terminal = false;
  };
  std::vector<Node> nodes;  // nodes[0] is the root

  using State = int;
  using Action = int;  // index of the child node

  std::optional<double> terminal_value(const int& s) {
    return nodes[static_cast<size_t>(s)].terminal ? std::optional<double>(nodes[static_cast<size_t>(s)].value)
                                                  : std::nullopt;
  }
  focal::LeafEvaluation<int> evaluate(const int& s);
  int apply(const int&, const int& a) { return a; }
  bool action_less(const int& a, const int& b) { return a < b; }
};

// Depth <= 2 tree whose best root move beats the runner-up by at least `gap`.
StubTree make_stub_tree(uint64_t seed, double gap = 0.1);

// Exact negamax over the tree; returns the best root child node.
int negamax_best_child(const StubTree& t);

}  // namespace skillcompat::testing
