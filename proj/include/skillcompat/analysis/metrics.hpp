#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/agents/evaluator.hpp"
#include "skillcompat/analysis/loss.hpp"

namespace skillcompat::analysis {

struct MetricValue {
  double mean = 0.0;
  double se = 0.0;
  uint64_t count = 0;
};

// Sample mean with standard error sd/sqrt(n), sd using n - 1 (0 when n = 1).
// Throws EmptySetError on empty input.
MetricValue summarize(std::span<const double> values);

// Conjunction of filters; unset fields match everything.
struct Condition {
  std::optional<ActorRole> role;
  // Matches records whose preceding labels end with this string.
  std::optional<std::string> preceded_by;
  std::optional<int> bucket;
  std::optional<InteractionType> interaction;

  bool matches(const MoveLossRecord& r) const;
  static Condition any() { return {}; }
};

std::vector<const MoveLossRecord*> select(std::span<const MoveLossRecord> records, const Condition& c);

// L(A, C). Throws EmptySetError when nothing matches.
MetricValue mean_loss(std::span<const MoveLossRecord> records, ActorRole a, Condition c = {});
std::optional<MetricValue> try_mean_loss(std::span<const MoveLossRecord> records, ActorRole a, Condition c = {});

// L(A1, C) - L(A2, C), standard errors combined in quadrature.
MetricValue delta_loss(std::span<const MoveLossRecord> records, ActorRole a1, ActorRole a2, Condition c = {});
std::optional<MetricValue> try_delta_loss(std::span<const MoveLossRecord> records, ActorRole a1, ActorRole a2,
                                          Condition c = {});

// I(A, s) = L(A, "1" + s) - L(A, "0" + s).
MetricValue influence(std::span<const MoveLossRecord> records, ActorRole a, const std::string& s);
std::optional<MetricValue> try_influence(std::span<const MoveLossRecord> records, ActorRole a, const std::string& s);

// Mechanism panel. Any cell may be empty.
struct MechanismPanel {
  std::optional<MetricValue> tricking;               // I(alter-junior, "")
  std::optional<MetricValue> helping_after_senior;   // I(focal-junior, "1")
  std::optional<MetricValue> helping_after_junior;   // I(focal-junior, "0")
  std::optional<MetricValue> indirect;               // delta(alter-junior, focal-junior, "00")
};
MechanismPanel mechanism_panel(std::span<const MoveLossRecord> records);

struct CurvePoint {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::optional<MetricValue> value;
};

// delta(alter-junior, focal-junior) within each [edges[i], edges[i+1])
// interval of focal-perspective wp_before; the last interval is closed.
std::vector<CurvePoint> bucketed_delta(std::span<const MoveLossRecord> records, std::span<const double> edges);
std::vector<double> default_bucket_edges();

struct RatioPoint {
  double threshold = 0.0;
  std::optional<double> ratio;
};

// P(loss >= t | alter-junior) / P(loss >= t | focal-junior); gaps where
// either side is empty or the denominator is zero.
std::vector<RatioPoint> exceedance_ratio(std::span<const MoveLossRecord> records, std::span<const double> thresholds);

struct CounterfactualResult {
  std::optional<MetricValue> loss;
  uint64_t skipped = 0;
};

// For each board: senior plays its argmax move, the weak agent answers with
// its argmax move, and the weak agent's loss is recorded.
CounterfactualResult induced_loss_counterfactual(std::span<const chess::Position> boards, agents::Agent& senior,
                                                 agents::Agent& weak, agents::WinProbEvaluator& e);

struct SavingsTable {
  MetricValue true_loss;
  MetricValue hypothetical_loss;
  MetricValue savings;
};

// Over HB moves that carry a hypothetical loss, optionally one team's only.
// Throws EmptySetError when there are none.
SavingsTable hb_savings(std::span<const MoveLossRecord> records, std::optional<ActorRole> team = std::nullopt);

struct InteractionRow {
  InteractionType type = InteractionType::kAgreement;
  uint64_t count = 0;
  double share = 0.0;  // percent of the team's moves
  std::optional<MetricValue> savings;
  std::optional<MetricValue> next_opponent_loss;
};

struct InteractionTable {
  ActorRole team = ActorRole::kFocalTeam;
  uint64_t moves = 0;
  std::array<InteractionRow, 4> rows;
};

InteractionTable hb_interaction_table(std::span<const MoveLossRecord> records, ActorRole team);

// Fraction of records whose raw delta was clamped.
double clamp_rate(std::span<const MoveLossRecord> records);

}  // namespace skillcompat::analysis
