#include "skillcompat/agents/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skillcompat/util/error.hpp"

namespace skillcompat::agents {

double logistic_winprob(double centipawns, double slope) {
  return 100.0 / (1.0 + std::exp(-slope * centipawns));
}

MoveDistribution::MoveDistribution(std::vector<MoveProb> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const MoveProb& a, const MoveProb& b) { return chess::uci_less(a.move, b.move); });
}

MoveDistribution MoveDistribution::softmax(std::span<const Move> moves, std::span<const double> scores, double tau) {
  if (moves.size() != scores.size()) throw Error("softmax: moves and scores differ in length");
  if (moves.empty()) return {};
  std::vector<MoveProb> out(moves.size());
  const double best = *std::max_element(scores.begin(), scores.end());
  if (std::isinf(tau)) return uniform(moves);
  if (tau <= 0.0) {
    size_t ties = static_cast<size_t>(std::count(scores.begin(), scores.end(), best));
    for (size_t i = 0; i < moves.size(); ++i) {
      out[i] = {moves[i], scores[i] == best ? 1.0 / static_cast<double>(ties) : 0.0};
    }
    return MoveDistribution(std::move(out));
  }
  double total = 0.0;
  for (size_t i = 0; i < moves.size(); ++i) {
    double w = std::exp((scores[i] - best) / tau);
    out[i] = {moves[i], w};
    total += w;
  }
  for (auto& e : out) e.prob /= total;
  return MoveDistribution(std::move(out));
}

MoveDistribution MoveDistribution::uniform(std::span<const Move> moves) {
  std::vector<MoveProb> out;
  out.reserve(moves.size());
  for (const Move& m : moves) out.push_back({m, 1.0 / static_cast<double>(moves.size())});
  return MoveDistribution(std::move(out));
}

MoveDistribution MoveDistribution::delta(const Move& m) { return MoveDistribution({{m, 1.0}}); }

MoveDistribution MoveDistribution::concentrated(std::span<const Move> moves, const Move& chosen) {
  std::vector<MoveProb> entries;
  entries.reserve(moves.size());
  for (const auto& m : moves) entries.push_back({m, m == chosen ? 1.0 : 0.0});
  return MoveDistribution(std::move(entries));
}

double MoveDistribution::probability(const Move& m) const {
  for (const auto& e : entries_) {
    if (e.move == m) return e.prob;
  }
  return 0.0;
}

double MoveDistribution::total() const {
  double t = 0.0;
  for (const auto& e : entries_) t += e.prob;
  return t;
}

const Move& MoveDistribution::argmax() const {
  if (entries_.empty()) throw Error("argmax of an empty distribution");
  // Entries are in UCI order, so the first maximum wins ties.
  const MoveProb* best = &entries_.front();
  for (const auto& e : entries_) {
    if (e.prob > best->prob) best = &e;
  }
  return best->move;
}

const Move& MoveDistribution::sample(Rng& rng) const {
  if (entries_.empty()) throw Error("sample from an empty distribution");
  const double u = rng.uniform() * total();
  double acc = 0.0;
  for (const auto& e : entries_) {
    acc += e.prob;
    if (u < acc) return e.move;
  }
  // Rounding can leave u just above the final cumulative sum.
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->prob > 0.0) return it->move;
  }
  return entries_.back().move;
}

std::vector<MoveProb> MoveDistribution::top(size_t k) const {
  std::vector<MoveProb> sorted = entries_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const MoveProb& a, const MoveProb& b) { return a.prob > b.prob; });
  if (sorted.size() > k) sorted.resize(k);
  return sorted;
}

MoveDistribution MoveDistribution::normalized() const {
  const double t = total();
  if (!(t > 0.0)) throw Error("cannot normalize a distribution with zero mass");
  std::vector<MoveProb> out = entries_;
  for (auto& e : out) e.prob /= t;
  return MoveDistribution(std::move(out));
}

bool MoveDistribution::valid_for(const Position& p, double tol) const {
  auto legal = p.legal_moves();
  if (legal.size() != entries_.size()) return false;
  for (const auto& e : entries_) {
    if (!(e.prob >= 0.0 && e.prob <= 1.0)) return false;
    if (std::find(legal.begin(), legal.end(), e.move) == legal.end()) return false;
  }
  return std::abs(total() - 1.0) <= tol;
}

MoveDistribution conditional_policy(const MoveDistribution& d, const Position& p, PieceType t) {
  std::vector<MoveProb> kept;
  for (const auto& e : d.entries()) {
    if (p.at(e.move.from).type() == t) kept.push_back(e);
  }
  if (kept.empty()) {
    throw EmptySetError("no legal " + std::string(chess::to_string(t)) + " move in " + p.fen());
  }
  double mass = 0.0;
  for (const auto& e : kept) mass += e.prob;
  if (mass > 0.0) {
    for (auto& e : kept) e.prob /= mass;
  } else {
    // All mass underflowed; fall back to uniform over the piece's moves.
    for (auto& e : kept) e.prob = 1.0 / static_cast<double>(kept.size());
  }
  return MoveDistribution(std::move(kept));
}

}  // namespace skillcompat::agents
