#pragma once

#include <span>
#include <vector>

#include "skillcompat/chess/position.hpp"
#include "skillcompat/util/random.hpp"

namespace skillcompat::agents {

using chess::Move;
using chess::PieceType;
using chess::Position;

// Win probability in percent, from a stated side's perspective.
struct WinProb {
  double value = 50.0;

  WinProb flipped() const { return WinProb{100.0 - value}; }
  friend bool operator==(WinProb, WinProb) = default;
};

// Logistic mapping from centipawns to percent.
double logistic_winprob(double centipawns, double slope);

struct MoveProb {
  Move move;
  double prob = 0.0;
};

// Probability distribution over moves, kept in canonical UCI order.
class MoveDistribution {
 public:
  MoveDistribution() = default;
  explicit MoveDistribution(std::vector<MoveProb> entries);

  // Softmax of scores (centipawns) at temperature tau. tau <= 0 puts all mass
  // on the best score (split evenly between exact ties); an infinite tau
  // yields the uniform distribution.
  static MoveDistribution softmax(std::span<const Move> moves, std::span<const double> scores, double tau);
  static MoveDistribution uniform(std::span<const Move> moves);
  static MoveDistribution delta(const Move& m);
  // All of `moves` in the support, with mass 1 on `chosen`.
  static MoveDistribution concentrated(std::span<const Move> moves, const Move& chosen);

  const std::vector<MoveProb>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  double probability(const Move& m) const;
  double total() const;

  // Highest probability; exact ties go to the lexicographically smallest UCI string.
  const Move& argmax() const;
  const Move& sample(Rng& rng) const;

  // Entries sorted by probability (desc) then UCI, truncated to k.
  std::vector<MoveProb> top(size_t k) const;

  // Divides by the total; throws if the total is not positive.
  MoveDistribution normalized() const;

  // True when probabilities sum to 1 within tol and the support is exactly
  // the legal move set of p.
  bool valid_for(const Position& p, double tol = 1e-9) const;

 private:
  std::vector<MoveProb> entries_;
};

// Restricts d to moves of piece type t in p and renormalizes. Throws
// EmptySetError if no move of that type is in the support.
MoveDistribution conditional_policy(const MoveDistribution& d, const Position& p, PieceType t);

}  // namespace skillcompat::agents
