#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "skillcompat/chess/position.hpp"

namespace skillcompat::agents {

using chess::Move;
using chess::Position;

inline constexpr int kMateScore = 30000;
inline constexpr int kInfinity = 32000;

constexpr bool is_mate_score(int s) { return s > kMateScore - 1000 || s < -kMateScore + 1000; }

// Material + piece-square evaluation, side-to-move perspective, centipawns.
int static_eval(const Position& p);

struct RootScore {
  Move move;
  int score = 0;
};

struct RootAnalysis {
  // Every legal root move with its score at the deepest completed iteration,
  // best first (ties in UCI order).
  std::vector<RootScore> scores;
  int depth = 0;
  uint64_t nodes = 0;

  int best_score() const { return scores.empty() ? 0 : scores.front().score; }
};

// Alpha-beta searcher with quiescence and a generation-stamped transposition
// table. Results depend only on the position and the node budget, never on
// earlier searches run by the same instance.
class Searcher {
 public:
  Searcher();

  // Iterative deepening. Root moves within 200 cp of the best get exact
  // scores at each depth; the rest get an upper bound below that margin.
  // Depth 1 always completes; deeper iterations are discarded if the node
  // budget runs out mid-iteration.
  RootAnalysis analyze(const Position& p, uint64_t node_budget, int max_depth = 64);

  // Capture-only search from p, side-to-move perspective.
  int quiesce(const Position& p, int alpha, int beta);

  // Score of each legal move after a quiescence search of the reply
  // (one ply plus quiescence), mover perspective. Mates are scored exactly.
  std::vector<RootScore> shallow_scores(const Position& p);

  uint64_t nodes() const { return nodes_; }

 private:
  struct Entry {
    uint64_t key = 0;
    uint32_t generation = 0;
    int16_t score = 0;
    int8_t depth = 0;
    uint8_t flag = 0;
    Move best{};
  };

  int negamax(const Position& p, int depth, int alpha, int beta, int ply);
  int quiesce_impl(const Position& p, int alpha, int beta, int ply);
  void order_moves(const Position& p, std::vector<Move>& moves, const Move* tt_move, int ply) const;
  Entry* probe(uint64_t key);

  std::vector<Entry> table_;
  uint32_t generation_ = 0;
  uint64_t nodes_ = 0;
  uint64_t budget_ = 0;
  bool aborted_ = false;
  bool may_abort_ = false;
  std::vector<std::array<Move, 2>> killers_;
};

}  // namespace skillcompat::agents
