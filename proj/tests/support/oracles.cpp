#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "skillcompat/util/error.hpp"
#include "skillcompat/util/random.hpp"

namespace skillcompat::testing {

// ---------------------------------------------------------------------------
// 0x88 reference move generator.

namespace {

constexpr int kEmpty = 0, kPawn = 1, kKnight = 2, kBishop = 3, kRook = 4, kQueen = 5, kKing = 6;
constexpr int kBlackBit = 8;

struct Board {
  std::array<int, 128> sq{};
  bool white = true;
  int castle = 0;  // 1 K, 2 Q, 4 k, 8 q
  int ep = -1;
};

struct RefMove {
  int from, to, promo;
};

bool on_board(int s) { return (s & 0x88) == 0; }
bool is_white(int pc) { return pc != kEmpty && !(pc & kBlackBit); }
bool is_black(int pc) { return pc != kEmpty && (pc & kBlackBit); }
int kind(int pc) { return pc & 7; }

Board parse(const std::string& fen) {
  Board b;
  std::istringstream in(fen);
  std::string placement, side, castle, ep;
  in >> placement >> side >> castle >> ep;
  int rank = 7, file = 0;
  for (char c : placement) {
    if (c == '/') {
      --rank;
      file = 0;
    } else if (c >= '1' && c <= '8') {
      file += c - '0';
    } else {
      const std::string letters = "pnbrqk";
      size_t i = letters.find(static_cast<char>(std::tolower(c)));
      int pc = static_cast<int>(i) + 1;
      if (std::isupper(static_cast<unsigned char>(c)) == 0) pc |= kBlackBit;
      b.sq[static_cast<size_t>(rank * 16 + file)] = pc;
      ++file;
    }
  }
  b.white = side == "w";
  for (char c : castle) {
    if (c == 'K') b.castle |= 1;
    if (c == 'Q') b.castle |= 2;
    if (c == 'k') b.castle |= 4;
    if (c == 'q') b.castle |= 8;
  }
  if (ep != "-") b.ep = (ep[1] - '1') * 16 + (ep[0] - 'a');
  return b;
}

bool attacked(const Board& b, int s, bool by_white) {
  auto own = [&](int pc) { return by_white ? is_white(pc) : is_black(pc); };
  // Pawns attack diagonally forward, so look backward from s.
  const int back = by_white ? -16 : 16;
  for (int d : {back - 1, back + 1}) {
    int t = s + d;
    if (on_board(t) && own(b.sq[static_cast<size_t>(t)]) && kind(b.sq[static_cast<size_t>(t)]) == kPawn) return true;
  }
  for (int d : {33, 31, 18, 14, -33, -31, -18, -14}) {
    int t = s + d;
    if (on_board(t) && own(b.sq[static_cast<size_t>(t)]) && kind(b.sq[static_cast<size_t>(t)]) == kKnight) return true;
  }
  for (int d : {1, -1, 16, -16, 15, 17, -15, -17}) {
    int t = s + d;
    if (on_board(t) && own(b.sq[static_cast<size_t>(t)]) && kind(b.sq[static_cast<size_t>(t)]) == kKing) return true;
  }
  for (int d : {1, -1, 16, -16, 15, 17, -15, -17}) {
    const bool diagonal = d == 15 || d == 17 || d == -15 || d == -17;
    for (int t = s + d; on_board(t); t += d) {
      int pc = b.sq[static_cast<size_t>(t)];
      if (pc == kEmpty) continue;
      if (own(pc) && (kind(pc) == kQueen || kind(pc) == (diagonal ? kBishop : kRook))) return true;
      break;
    }
  }
  return false;
}

std::vector<RefMove> pseudo_moves(const Board& b) {
  std::vector<RefMove> out;
  auto mine = [&](int pc) { return b.white ? is_white(pc) : is_black(pc); };
  auto theirs = [&](int pc) { return b.white ? is_black(pc) : is_white(pc); };
  for (int s = 0; s < 128; ++s) {
    if (!on_board(s)) continue;
    const int pc = b.sq[static_cast<size_t>(s)];
    if (!mine(pc)) continue;
    switch (kind(pc)) {
      case kPawn: {
        const int fwd = b.white ? 16 : -16;
        const int start_rank = b.white ? 1 : 6;
        const int last_rank = b.white ? 7 : 0;
        auto push = [&](int to) {
          if (to / 16 == last_rank) {
            for (int pr : {kQueen, kRook, kBishop, kKnight}) out.push_back({s, to, pr});
          } else {
            out.push_back({s, to, 0});
          }
        };
        int one = s + fwd;
        if (on_board(one) && b.sq[static_cast<size_t>(one)] == kEmpty) {
          push(one);
          int two = one + fwd;
          if (s / 16 == start_rank && b.sq[static_cast<size_t>(two)] == kEmpty) out.push_back({s, two, 0});
        }
        for (int d : {fwd - 1, fwd + 1}) {
          int t = s + d;
          if (!on_board(t)) continue;
          if (theirs(b.sq[static_cast<size_t>(t)]) || t == b.ep) push(t);
        }
        break;
      }
      case kKnight:
      case kKing: {
        const std::vector<int> dirs = kind(pc) == kKnight ? std::vector<int>{33, 31, 18, 14, -33, -31, -18, -14}
                                                           : std::vector<int>{1, -1, 16, -16, 15, 17, -15, -17};
        for (int d : dirs) {
          int t = s + d;
          if (on_board(t) && !mine(b.sq[static_cast<size_t>(t)])) out.push_back({s, t, 0});
        }
        break;
      }
      default: {
        std::vector<int> dirs;
        if (kind(pc) != kRook) dirs.insert(dirs.end(), {15, 17, -15, -17});
        if (kind(pc) != kBishop) dirs.insert(dirs.end(), {1, -1, 16, -16});
        for (int d : dirs) {
          for (int t = s + d; on_board(t); t += d) {
            int q = b.sq[static_cast<size_t>(t)];
            if (mine(q)) break;
            out.push_back({s, t, 0});
            if (q != kEmpty) break;
          }
        }
      }
    }
  }
  // Castling: squares between empty, king's path not attacked.
  const int base = b.white ? 0 : 0x70;
  const bool them = !b.white;
  auto empty = [&](int s) { return b.sq[static_cast<size_t>(s)] == kEmpty; };
  if (b.castle & (b.white ? 1 : 4)) {
    if (empty(base + 5) && empty(base + 6) && !attacked(b, base + 4, them) && !attacked(b, base + 5, them) &&
        !attacked(b, base + 6, them)) {
      out.push_back({base + 4, base + 6, 0});
    }
  }
  if (b.castle & (b.white ? 2 : 8)) {
    if (empty(base + 3) && empty(base + 2) && empty(base + 1) && !attacked(b, base + 4, them) &&
        !attacked(b, base + 3, them) && !attacked(b, base + 2, them)) {
      out.push_back({base + 4, base + 2, 0});
    }
  }
  return out;
}

Board make(const Board& b, const RefMove& m) {
  Board n = b;
  const int pc = n.sq[static_cast<size_t>(m.from)];
  n.sq[static_cast<size_t>(m.from)] = kEmpty;
  if (kind(pc) == kPawn && m.to == b.ep) n.sq[static_cast<size_t>(m.to + (b.white ? -16 : 16))] = kEmpty;
  n.sq[static_cast<size_t>(m.to)] = m.promo ? (m.promo | (pc & kBlackBit)) : pc;
  if (kind(pc) == kKing && std::abs(m.to - m.from) == 2) {
    const int rook_from = m.to > m.from ? m.from + 3 : m.from - 4;
    const int rook_to = m.to > m.from ? m.from + 1 : m.from - 1;
    n.sq[static_cast<size_t>(rook_to)] = n.sq[static_cast<size_t>(rook_from)];
    n.sq[static_cast<size_t>(rook_from)] = kEmpty;
  }
  n.ep = kind(pc) == kPawn && std::abs(m.to - m.from) == 32 ? (m.from + m.to) / 2 : -1;
  for (int s : {m.from, m.to}) {
    if (s == 0x04) n.castle &= ~3;
    if (s == 0x74) n.castle &= ~12;
    if (s == 0x00) n.castle &= ~2;
    if (s == 0x07) n.castle &= ~1;
    if (s == 0x70) n.castle &= ~8;
    if (s == 0x77) n.castle &= ~4;
  }
  n.white = !b.white;
  return n;
}

bool king_safe(const Board& after, bool white_king) {
  for (int s = 0; s < 128; ++s) {
    if (!on_board(s)) continue;
    int pc = after.sq[static_cast<size_t>(s)];
    if (kind(pc) == kKing && is_white(pc) == white_king) return !attacked(after, s, !white_king);
  }
  return false;
}

uint64_t perft_impl(const Board& b, int depth) {
  if (depth == 0) return 1;
  uint64_t n = 0;
  for (const auto& m : pseudo_moves(b)) {
    Board next = make(b, m);
    if (king_safe(next, b.white)) n += perft_impl(next, depth - 1);
  }
  return n;
}

uint64_t hash3(uint64_t a, uint64_t b, uint64_t c) { return derive_seed(derive_seed(a, b), c); }

}  // namespace

uint64_t reference_perft(const std::string& fen, int depth) { return perft_impl(parse(fen), depth); }

// ---------------------------------------------------------------------------
// Stub agents and evaluator.

namespace {

agents::AgentSpec stub_spec(std::string name) {
  agents::AgentSpec s;
  s.name = std::move(name);
  s.kind = agents::AgentKind::kBuiltinWeak;
  return s;
}

}  // namespace

ScriptedAgent::ScriptedAgent(std::string name, std::string fallback, std::optional<agents::SamplingMode> sampling)
    : Agent([&] {
        agents::AgentSpec s = stub_spec(std::move(name));
        s.sampling = sampling;
        return s;
      }()),
      fallback_(std::move(fallback)) {}

void ScriptedAgent::at(const chess::Position& p, std::vector<std::pair<std::string, double>> probs) {
  table_[p.fen()] = std::move(probs);
}

agents::MoveDistribution ScriptedAgent::policy(const chess::Position& p) {
  require_nonterminal(p);
  std::vector<agents::MoveProb> out;
  auto it = table_.find(p.fen());
  for (const chess::Move& m : p.legal_moves()) {
    double pr = 0.0;
    if (it != table_.end()) {
      for (const auto& [u, q] : it->second) pr = u == m.uci() ? q : pr;
    } else {
      pr = m.uci() == fallback_ ? 1.0 : 0.0;
    }
    out.push_back({m, pr});
  }
  return agents::MoveDistribution(std::move(out));
}

StubAgent::StubAgent(std::string name, uint64_t seed) : Agent(stub_spec(std::move(name))), seed_(seed) {}

uint64_t StubAgent::weight(const chess::Position& p, const chess::Move& m) const {
  return 1 + hash3(seed_, p.key(), fnv1a(m.uci())) % 1000;
}

agents::MoveDistribution StubAgent::policy(const chess::Position& p) {
  require_nonterminal(p);
  const auto legal = p.legal_moves();
  double total = 0.0;
  for (const auto& m : legal) total += static_cast<double>(weight(p, m));
  std::vector<agents::MoveProb> entries;
  for (const auto& m : legal) entries.push_back({m, static_cast<double>(weight(p, m)) / total});
  return agents::MoveDistribution(std::move(entries));
}

agents::WinProb StubAgent::value(const chess::Position& p) {
  return agents::WinProb{static_cast<double>(hash3(seed_, p.key(), 7) % 10001) / 100.0};
}

double StubEvaluator::white_wp(const chess::Position& p) const {
  return static_cast<double>(hash3(seed_, p.key(), 11) % 10001) / 100.0;
}

agents::WinProb StubEvaluator::evaluate(const chess::Position& p, chess::Color perspective) {
  const double w = white_wp(p);
  return agents::WinProb{perspective == chess::Color::kWhite ? w : 100.0 - w};
}

focal::ExpectorConfig StubWorld::config(agents::ExpectorMode mode) const {
  focal::ExpectorConfig c;
  c.mode = mode;
  c.width = width;
  c.models = {base_strong, opponent_senior, opponent_junior, partner_junior, own_hand};
  c.evaluator = evaluator;
  return c;
}

StubWorld make_stub_world(uint64_t seed) {
  Rng rng(seed);
  StubWorld w;
  // Random playout; restart whenever it reaches a finished game.
  while (true) {
    chess::Position p = chess::Position::start();
    const int plies = 4 + static_cast<int>(rng.next_u64() % 40);
    bool ok = true;
    for (int i = 0; i < plies && ok; ++i) {
      auto moves = p.legal_moves();
      if (moves.empty()) {
        ok = false;
        break;
      }
      p = p.apply(moves[rng.next_u64() % moves.size()]);
    }
    if (ok && !p.legal_moves().empty()) {
      w.position = p;
      break;
    }
  }
  w.base_strong = std::make_shared<StubAgent>("base", rng.next_u64());
  w.opponent_senior = std::make_shared<StubAgent>("opp-senior", rng.next_u64());
  w.opponent_junior = std::make_shared<StubAgent>("opp-junior", rng.next_u64());
  w.partner_junior = std::make_shared<StubAgent>("partner", rng.next_u64());
  w.own_hand = std::make_shared<StubAgent>("hand", rng.next_u64());
  w.evaluator = std::make_shared<StubEvaluator>(rng.next_u64());
  w.width = 1 + static_cast<int>(rng.next_u64() % 6);
  return w;
}

// ---------------------------------------------------------------------------
// Expector brute force.

namespace {

bool game_over(const chess::Position& p) {
  return p.legal_moves().empty() || p.insufficient_material() || p.halfmove_clock() >= 100;
}

// Exact value for decided boards, stub value otherwise; focal perspective.
double leaf_value(const StubWorld& w, const chess::Position& p, chess::Color focal) {
  return w.evaluator->evaluate(p, focal).value;
}

// Highest weight; ties to the smaller UCI string.
chess::Move best_by_weight(const StubAgent& a, const chess::Position& p) {
  std::optional<chess::Move> best;
  uint64_t best_w = 0;
  for (const auto& m : p.legal_moves()) {
    uint64_t wt = a.weight(p, m);
    if (!best || wt > best_w || (wt == best_w && m.uci() < best->uci())) {
      best = m;
      best_w = wt;
    }
  }
  return *best;
}

std::vector<chess::Move> top_by_weight(const StubAgent& a, const chess::Position& p, const std::vector<chess::Move>& pool,
                                       size_t k) {
  std::vector<chess::Move> v = pool;
  std::sort(v.begin(), v.end(), [&](const chess::Move& x, const chess::Move& y) {
    uint64_t wx = a.weight(p, x), wy = a.weight(p, y);
    return wx != wy ? wx > wy : x.uci() < y.uci();
  });
  if (v.size() > k) v.resize(k);
  return v;
}

}  // namespace

chess::Move brute_force_stt(const StubWorld& w, agents::ExpectorMode mode) {
  const chess::Position& p = w.position;
  const chess::Color focal = p.side_to_move();
  std::vector<std::vector<int>> schedules;  // {opp bit, own bit} or {opp bit}
  if (mode == agents::ExpectorMode::kSttFull) schedules = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  if (mode == agents::ExpectorMode::kSttTricking) schedules = {{0}, {1}};
  if (mode == agents::ExpectorMode::kSttHelping) schedules = {{1, 0}, {1, 1}};

  const auto legal = p.legal_moves();
  const auto candidates = top_by_weight(*w.base_strong, p, legal, static_cast<size_t>(w.width));
  std::optional<chess::Move> best;
  double best_value = -1.0;
  for (const auto& m : candidates) {
    double sum = 0.0;
    for (const auto& s : schedules) {
      chess::Position q = p.apply(m);
      if (!game_over(q)) {
        const StubAgent& opp = s[0] ? *w.opponent_senior : *w.opponent_junior;
        q = q.apply(best_by_weight(opp, q));
        if (s.size() == 2 && !game_over(q)) {
          const StubAgent& own = s[1] ? *w.base_strong : *w.partner_junior;
          q = q.apply(best_by_weight(own, q));
        }
      }
      sum += leaf_value(w, q, focal);
    }
    const double value = sum / static_cast<double>(schedules.size());
    if (!best || value > best_value) {
      best = m;
      best_value = value;
    }
  }
  return *best;
}

chess::PieceType brute_force_hb(const StubWorld& w) {
  const chess::Position& p = w.position;
  const chess::Color focal = p.side_to_move();
  const auto legal = p.legal_moves();
  std::optional<chess::PieceType> best;
  double best_e = 0.0, best_peak = 0.0;
  for (chess::PieceType t : chess::kAllPieceTypes) {
    std::vector<chess::Move> mine;
    for (const auto& m : legal) {
      if (p.at(m.from).type() == t) mine.push_back(m);
    }
    if (mine.empty()) continue;
    double piece_total = 0.0;
    for (const auto& m : mine) piece_total += static_cast<double>(w.own_hand->weight(p, m));
    const auto top = top_by_weight(*w.own_hand, p, mine, static_cast<size_t>(w.width));
    double mass = 0.0;
    for (const auto& m : top) mass += static_cast<double>(w.own_hand->weight(p, m)) / piece_total;
    double e = 0.0, peak = -1.0;
    for (const auto& m : top) {
      const double prob = static_cast<double>(w.own_hand->weight(p, m)) / piece_total / mass;
      const double wp = leaf_value(w, p.apply(m), focal);
      e += prob * wp;
      peak = std::max(peak, wp);
    }
    if (!best || e > best_e || (e == best_e && peak > best_peak)) {
      best = t;
      best_e = e;
      best_peak = peak;
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Stub trees.

focal::LeafEvaluation<int> StubTree::evaluate(const int& s) {
  const Node& n = nodes[static_cast<size_t>(s)];
  focal::LeafEvaluation<int> out;
  for (size_t i = 0; i < n.children.size(); ++i) out.priors.emplace_back(n.children[i], n.priors[i]);
  out.value = n.value;
  return out;
}

namespace {

double negamax(const StubTree& t, int s) {
  const auto& n = t.nodes[static_cast<size_t>(s)];
  if (n.terminal) return n.value;
  double best = -2.0;
  for (int c : n.children) best = std::max(best, -negamax(t, c));
  return best;
}

std::vector<double> root_values(const StubTree& t) {
  std::vector<double> v;
  for (int c : t.nodes[0].children) v.push_back(-negamax(t, c));
  return v;
}

}  // namespace

StubTree make_stub_tree(uint64_t seed, double gap) {
  Rng rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  while (true) {
    StubTree t;
    auto add = [&](bool terminal) {
      StubTree::Node n;
      n.terminal = terminal;
      n.value = uniform(-1.0, 1.0);
      t.nodes.push_back(n);
      return static_cast<int>(t.nodes.size() - 1);
    };
    auto attach = [&](int parent, int child) {
      t.nodes[static_cast<size_t>(parent)].children.push_back(child);
      t.nodes[static_cast<size_t>(parent)].priors.push_back(uniform(0.05, 1.0));
    };
    add(false);
    const int width = 2 + static_cast<int>(rng.next_u64() % 4);
    for (int i = 0; i < width; ++i) {
      const bool leaf = rng.next_u64() % 3 == 0;
      int c = add(leaf);
      attach(0, c);
      if (leaf) continue;
      const int grand = 1 + static_cast<int>(rng.next_u64() % 4);
      for (int j = 0; j < grand; ++j) attach(c, add(true));
    }
    for (auto& n : t.nodes) {
      double total = 0.0;
      for (double pr : n.priors) total += pr;
      for (double& pr : n.priors) pr /= total;
    }
    auto v = root_values(t);
    std::vector<double> sorted = v;
    std::sort(sorted.rbegin(), sorted.rend());
    if (sorted[0] - sorted[1] >= gap) return t;
  }
}

int negamax_best_child(const StubTree& t) {
  const auto v = root_values(t);
  size_t best = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return t.nodes[0].children[best];
}

}  // namespace skillcompat::testing
