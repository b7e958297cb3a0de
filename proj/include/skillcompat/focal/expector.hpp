#pragma once

#include <memory>
#include <string>
#include <vector>

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/agents/evaluator.hpp"

namespace skillcompat::focal {

using agents::Agent;
using agents::AgentSpec;
using agents::ExpectorMode;
using agents::MoveDistribution;
using agents::WinProb;
using agents::WinProbEvaluator;
using chess::Move;
using chess::PieceType;
using chess::Position;

// Models the expector consults. Which ones are required depends on the mode.
struct ExpectorModels {
  std::shared_ptr<Agent> base_strong;      // candidate generation + own senior
  std::shared_ptr<Agent> opponent_senior;  // STT
  std::shared_ptr<Agent> opponent_junior;  // STT
  std::shared_ptr<Agent> partner_junior;   // STT full / helping
  std::shared_ptr<Agent> own_hand;         // HB
};

struct ExpectorConfig {
  ExpectorMode mode = ExpectorMode::kSttFull;
  int width = 5;
  ExpectorModels models;
  std::shared_ptr<WinProbEvaluator> evaluator;

  // Throws ConfigError if a model the mode needs is missing.
  void validate() const;
};

// A two-bit schedule: first = opponent's next ply, second = own ply after it
// (1 = senior, 0 = junior). Tricking uses one bit.
std::vector<std::string> schedules_for(ExpectorMode mode);

struct SttCandidate {
  Move move;
  std::vector<double> outcomes;  // w(m, s), one per schedule, focal perspective
  double expectation = 0.0;
};

struct SttDecision {
  Move move;
  std::vector<std::string> schedules;
  std::vector<SttCandidate> candidates;  // base-strong top-k order
};

// argmax over the top-k moves of base-strong of the uniform mean of w over
// the mode's schedules. Simulated juniors play their policy's argmax,
// simulated seniors their argmax move. Lines that end early use the exact
// outcome. Ties keep the earlier candidate.
SttDecision expector_stt_decide(const ExpectorConfig& cfg, const Position& p);
Move expector_stt_move(const ExpectorConfig& cfg, const Position& p);

struct HbOutcome {
  Move move;
  double prob = 0.0;  // renormalized over the truncated D_p
  double wp = 0.0;
};

struct HbPieceEvaluation {
  PieceType piece = PieceType::kPawn;
  std::vector<HbOutcome> outcomes;
  double expectation = 0.0;
  double best_wp = 0.0;
};

struct HbDecision {
  PieceType piece = PieceType::kPawn;
  Move intended;  // highest-wp evaluated move of the chosen piece
  bool forced = false;
  std::vector<HbPieceEvaluation> pieces;
};

// argmax over piece types of E_{m in D_p}[w | m], D_p the own hand's policy
// restricted to the piece and truncated to its top-j moves. Ties: higher
// single-best w, then piece enum order.
HbDecision expector_hb_decide(const ExpectorConfig& cfg, const Position& p);
PieceType expector_hb_piece(const ExpectorConfig& cfg, const Position& p);

class ExpectorSttAgent final : public Agent {
 public:
  ExpectorSttAgent(AgentSpec spec, ExpectorConfig cfg);

  MoveDistribution policy(const Position& p) override;
  WinProb value(const Position& p) override;
  Move select_move(const Position& p, Rng& rng, agents::SamplingMode mode) override;

  const ExpectorConfig& config() const { return cfg_; }

 private:
  ExpectorConfig cfg_;
};

class ExpectorHbAgent final : public Agent {
 public:
  ExpectorHbAgent(AgentSpec spec, ExpectorConfig cfg);

  MoveDistribution policy(const Position& p) override;
  WinProb value(const Position& p) override;
  Move select_move(const Position& p, Rng& rng, agents::SamplingMode mode) override;
  agents::BrainChoice choose_piece(const Position& p, Rng& rng) override;

  const ExpectorConfig& config() const { return cfg_; }

 private:
  ExpectorConfig cfg_;
};

}  // namespace skillcompat::focal
