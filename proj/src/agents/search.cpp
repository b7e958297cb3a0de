#include "skillcompat/agents/search.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace skillcompat::agents {

using chess::Color;
using chess::Piece;
using chess::PieceType;
using chess::Square;

namespace {

constexpr std::array<int, 6> kMaterial = {100, 320, 330, 500, 900, 0};
constexpr std::array<int, 6> kPhaseWeight = {0, 1, 1, 2, 4, 0};
constexpr int kMaxPhase = 24;

// Tables are written rank 8 first, as seen from white's side of the board.
constexpr std::array<std::array<int, 64>, 6> kPst = {{
    {0,  0,  0,  0,   0,   0,  0,  0,  50, 50, 50,  50, 50, 50,  50, 50, 10, 10, 20, 30, 30, 20,
     10, 10, 5,  5,  10,  25,  25, 10, 5,  5,  0,  0,   0,  20, 20,  0,  0,  0,  5,  -5, -10, 0,
     0,  -10, -5, 5, 5,   10,  10, -20, -20, 10, 10, 5,  0,  0,  0,  0,  0,  0,  0,  0},
    {-50, -40, -30, -30, -30, -30, -40, -50, -40, -20, 0,   0,   0,   0,   -20, -40,
     -30, 0,   10,  15,  15,  10,  0,   -30, -30, 5,   15,  20,  20,  15,  5,   -30,
     -30, 0,   15,  20,  20,  15,  0,   -30, -30, 5,   10,  15,  15,  10,  5,   -30,
     -40, -20, 0,   5,   5,   0,   -20, -40, -50, -40, -30, -30, -30, -30, -40, -50},
    {-20, -10, -10, -10, -10, -10, -10, -20, -10, 0,   0,   0,   0,   0,   0,   -10,
     -10, 0,   5,   10,  10,  5,   0,   -10, -10, 5,   5,   10,  10,  5,   5,   -10,
     -10, 0,   10,  10,  10,  10,  0,   -10, -10, 10,  10,  10,  10,  10,  10,  -10,
     -10, 5,   0,   0,   0,   0,   5,   -10, -20, -10, -10, -10, -10, -10, -10, -20},
    {0,  0,  0,  0,  0,  0,  0,  0,  5,  10, 10, 10, 10, 10, 10, 5,  -5, 0,  0,  0,  0,  0,
     0,  -5, -5, 0,  0,  0,  0,  0,  0,  -5, -5, 0,  0,  0,  0,  0,  0,  -5, -5, 0,  0,  0,
     0,  0,  0,  -5, -5, 0,  0,  0,  0,  0,  0,  -5, 0,  0,  0,  5,  5,  0,  0,  0},
    {-20, -10, -10, -5, -5, -10, -10, -20, -10, 0,  0,   0,  0,  0,   0,   -10,
     -10, 0,   5,   5,  5,  5,   0,   -10, -5,  0,  5,   5,  5,  5,   0,   -5,
     0,   0,   5,   5,  5,  5,   0,   -5,  -10, 5,  5,   5,  5,  5,   0,   -10,
     -10, 0,   5,   0,  0,  0,   0,   -10, -20, -10, -10, -5, -5, -10, -10, -20},
    {-30, -40, -40, -50, -50, -40, -40, -30, -30, -40, -40, -50, -50, -40, -40, -30,
     -30, -40, -40, -50, -50, -40, -40, -30, -30, -40, -40, -50, -50, -40, -40, -30,
     -20, -30, -30, -40, -40, -30, -30, -20, -10, -20, -20, -20, -20, -20, -20, -10,
     20,  20,  0,   0,   0,   0,   20,  20,  20,  30,  10,  0,   0,   10,  30,  20},
}};

constexpr std::array<int, 64> kKingEndgame = {
    -50, -40, -30, -20, -20, -30, -40, -50, -30, -20, -10, 0,   0,   -10, -20, -30,
    -30, -10, 20,  30,  30,  20,  -10, -30, -30, -10, 30,  40,  40,  30,  -10, -30,
    -30, -10, 30,  40,  40,  30,  -10, -30, -30, -10, 20,  30,  30,  20,  -10, -30,
    -30, -30, 0,   0,   0,   0,   -30, -30, -50, -30, -30, -30, -30, -30, -30, -50};

constexpr int table_index(Square s, Color c) {
  int file = chess::file_of(s), rank = chess::rank_of(s);
  return c == Color::kWhite ? (7 - rank) * 8 + file : rank * 8 + file;
}

int center_distance(Square s) {
  int f = chess::file_of(s), r = chess::rank_of(s);
  return std::max(3 - f, f - 4) + std::max(3 - r, r - 4);
}

constexpr uint8_t kExact = 0, kLower = 1, kUpper = 2;
constexpr size_t kTableSize = 1 << 16;
constexpr int kMaxPly = 128;
constexpr int kRootMargin = 200;
constexpr int kDeltaMargin = 200;

int victim_value(const Position& p, const Move& m) {
  Piece target = p.at(m.to);
  int v = target.empty() ? 0 : kMaterial[static_cast<size_t>(target.type())];
  if (target.empty() && p.at(m.from).type() == PieceType::kPawn && m.to == p.en_passant()) v = 100;
  if (m.promotion) v += kMaterial[static_cast<size_t>(*m.promotion)];
  return v;
}

int score_to_tt(int s, int ply) {
  if (s > kMateScore - 1000) return s + ply;
  if (s < -kMateScore + 1000) return s - ply;
  return s;
}

int score_from_tt(int s, int ply) {
  if (s > kMateScore - 1000) return s - ply;
  if (s < -kMateScore + 1000) return s + ply;
  return s;
}

}  // namespace

int static_eval(const Position& p) {
  std::array<int, 2> material{}, mid{}, end{};
  std::array<int, 2> non_pawn{};
  int phase = 0;
  for (Square s = 0; s < 64; ++s) {
    Piece pc = p.at(s);
    if (pc.empty()) continue;
    const size_t c = static_cast<size_t>(chess::index(pc.color()));
    const size_t t = static_cast<size_t>(pc.type());
    const int idx = table_index(s, pc.color());
    material[c] += kMaterial[t];
    phase += kPhaseWeight[t];
    if (pc.type() == PieceType::kKing) {
      mid[c] += kPst[t][static_cast<size_t>(idx)];
      end[c] += kKingEndgame[static_cast<size_t>(idx)];
    } else {
      mid[c] += kPst[t][static_cast<size_t>(idx)];
      end[c] += kPst[t][static_cast<size_t>(idx)];
      if (pc.type() != PieceType::kPawn) non_pawn[c] += kMaterial[t];
    }
  }
  phase = std::min(phase, kMaxPhase);
  int white = material[0] - material[1] +
              ((mid[0] - mid[1]) * phase + (end[0] - end[1]) * (kMaxPhase - phase)) / kMaxPhase;

  // Mop-up: with a decisive material edge, drive the defending king to the
  // edge and bring the attacking king closer.
  const int edge = material[0] - material[1];
  if (std::abs(edge) >= 300 && phase <= 12) {
    const Color strong = edge > 0 ? Color::kWhite : Color::kBlack;
    const Square loser = p.king_square(chess::opposite(strong));
    const Square winner = p.king_square(strong);
    int dist = std::abs(chess::file_of(loser) - chess::file_of(winner)) +
               std::abs(chess::rank_of(loser) - chess::rank_of(winner));
    int bonus = (10 * center_distance(loser) + 4 * (14 - dist)) * (kMaxPhase - phase) / kMaxPhase;
    white += strong == Color::kWhite ? bonus : -bonus;
  }
  return p.side_to_move() == Color::kWhite ? white : -white;
}

Searcher::Searcher() : table_(kTableSize), killers_(kMaxPly + 1) {}

Searcher::Entry* Searcher::probe(uint64_t key) { return &table_[key & (kTableSize - 1)]; }

void Searcher::order_moves(const Position& p, std::vector<Move>& moves, const Move* tt_move, int ply) const {
  std::vector<std::pair<int, Move>> keyed;
  keyed.reserve(moves.size());
  for (const Move& m : moves) {
    int k = 0;
    if (tt_move && m == *tt_move) {
      k = 1 << 20;
    } else {
      int victim = victim_value(p, m);
      if (victim > 0) {
        k = (1 << 16) + victim * 16 - kMaterial[static_cast<size_t>(p.at(m.from).type())] / 10;
      } else if (ply <= kMaxPly && (m == killers_[static_cast<size_t>(ply)][0] ||
                                    m == killers_[static_cast<size_t>(ply)][1])) {
        k = 1 << 12;
      }
    }
    keyed.emplace_back(k, m);
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t i = 0; i < moves.size(); ++i) moves[i] = keyed[i].second;
}

int Searcher::quiesce(const Position& p, int alpha, int beta) {
  aborted_ = false;
  may_abort_ = false;
  return quiesce_impl(p, alpha, beta, 0);
}

int Searcher::quiesce_impl(const Position& p, int alpha, int beta, int ply) {
  ++nodes_;
  int stand_pat = static_eval(p);
  if (stand_pat >= beta || ply >= kMaxPly) return stand_pat;
  alpha = std::max(alpha, stand_pat);

  std::vector<Move> moves;
  moves.reserve(16);
  p.pseudo_moves(moves, /*captures_only=*/true);
  order_moves(p, moves, nullptr, kMaxPly + 1);
  for (const Move& m : moves) {
    const int gain = victim_value(p, m);
    if (stand_pat + gain + kDeltaMargin < alpha) continue;
    Position next = p.apply_unchecked(m);
    if (next.attacked(next.king_square(p.side_to_move()), next.side_to_move())) continue;
    // Skip captures that hand a defended square to a cheaper victim.
    const int attacker = kMaterial[static_cast<size_t>(p.at(m.from).type())];
    if (!m.promotion && gain < attacker && next.attacked(m.to, next.side_to_move())) continue;
    int score = -quiesce_impl(next, -beta, -alpha, ply + 1);
    if (aborted_) return 0;
    if (score >= beta) return score;
    alpha = std::max(alpha, score);
  }
  return alpha;
}

int Searcher::negamax(const Position& p, int depth, int alpha, int beta, int ply) {
  if (may_abort_ && nodes_ >= budget_) {
    aborted_ = true;
    return 0;
  }
  if (p.halfmove_clock() >= 100) return 0;
  const bool in_check = p.in_check();
  if (in_check) ++depth;
  if (depth <= 0 || ply >= kMaxPly) return quiesce_impl(p, alpha, beta, ply);
  ++nodes_;

  const int original_alpha = alpha;
  Entry* entry = probe(p.key());
  const Move* tt_move = nullptr;
  if (entry->key == p.key() && entry->generation == generation_) {
    tt_move = &entry->best;
    if (entry->depth >= depth) {
      int s = score_from_tt(entry->score, ply);
      if (entry->flag == kExact) return s;
      if (entry->flag == kLower && s >= beta) return s;
      if (entry->flag == kUpper && s <= alpha) return s;
    }
  }

  std::vector<Move> moves;
  moves.reserve(48);
  p.pseudo_moves(moves);
  Move tt_copy = tt_move ? *tt_move : Move{};
  order_moves(p, moves, tt_move ? &tt_copy : nullptr, ply);

  int best = -kInfinity;
  Move best_move{};
  int legal = 0;
  for (const Move& m : moves) {
    Position next = p.apply_unchecked(m);
    if (next.attacked(next.king_square(p.side_to_move()), next.side_to_move())) continue;
    ++legal;
    int score;
    if (legal == 1) {
      score = -negamax(next, depth - 1, -beta, -alpha, ply + 1);
    } else {
      score = -negamax(next, depth - 1, -alpha - 1, -alpha, ply + 1);
      if (!aborted_ && score > alpha && score < beta) score = -negamax(next, depth - 1, -beta, -alpha, ply + 1);
    }
    if (aborted_) return 0;
    if (score > best) {
      best = score;
      best_move = m;
    }
    if (score > alpha) alpha = score;
    if (alpha >= beta) {
      if (victim_value(p, m) == 0 && ply <= kMaxPly) {
        auto& k = killers_[static_cast<size_t>(ply)];
        if (!(k[0] == m)) {
          k[1] = k[0];
          k[0] = m;
        }
      }
      break;
    }
  }
  if (legal == 0) return in_check ? -kMateScore + ply : 0;

  entry->key = p.key();
  entry->generation = generation_;
  entry->depth = static_cast<int8_t>(std::min(depth, 127));
  entry->score = static_cast<int16_t>(score_to_tt(best, ply));
  entry->flag = best <= original_alpha ? kUpper : (best >= beta ? kLower : kExact);
  entry->best = best_move;
  return best;
}

RootAnalysis Searcher::analyze(const Position& p, uint64_t node_budget, int max_depth) {
  ++generation_;
  for (auto& k : killers_) k = {};
  nodes_ = 0;
  budget_ = std::max<uint64_t>(node_budget, 1);
  aborted_ = false;
  may_abort_ = false;

  RootAnalysis result;
  std::vector<RootScore> current;
  for (const Move& m : p.legal_moves()) current.push_back({m, 0});
  if (current.empty()) return result;

  for (int depth = 1; depth <= max_depth; ++depth) {
    std::vector<RootScore> scored;
    scored.reserve(current.size());
    int best = -kInfinity;
    for (const RootScore& rs : current) {
      Position next = p.apply_unchecked(rs.move);
      // Moves more than kRootMargin below the best only get an upper bound.
      const int floor = best == -kInfinity ? -kInfinity : std::max(-kInfinity, best - kRootMargin);
      int score = -negamax(next, depth - 1, -kInfinity, -floor, 1);
      if (aborted_) break;
      best = std::max(best, score);
      scored.push_back({rs.move, score});
    }
    if (aborted_) break;
    std::stable_sort(scored.begin(), scored.end(), [](const RootScore& a, const RootScore& b) {
      if (a.score != b.score) return a.score > b.score;
      return chess::uci_less(a.move, b.move);
    });
    result.scores = scored;
    result.depth = depth;
    current = std::move(scored);
    may_abort_ = true;
    if (nodes_ >= budget_) break;
    // A forced mate cannot improve with depth.
    if (is_mate_score(result.best_score())) break;
  }
  result.nodes = nodes_;
  return result;
}

std::vector<RootScore> Searcher::shallow_scores(const Position& p) {
  aborted_ = false;
  may_abort_ = false;
  std::vector<RootScore> out;
  for (const Move& m : p.legal_moves()) {
    Position next = p.apply_unchecked(m);
    int score;
    if (next.legal_moves().empty()) {
      score = next.in_check() ? kMateScore - 1 : 0;
    } else {
      score = -quiesce_impl(next, -kInfinity, kInfinity, 1);
    }
    out.push_back({m, score});
  }
  return out;
}

}  // namespace skillcompat::agents
