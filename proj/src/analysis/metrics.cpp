#include "skillcompat/analysis/metrics.hpp"

#include <cmath>

#include "skillcompat/util/error.hpp"

namespace skillcompat::analysis {

MetricValue summarize(std::span<const double> values) {
  if (values.empty()) throw EmptySetError("no values to summarize");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  return MetricValue{mean, se, values.size()};
}

bool Condition::matches(const MoveLossRecord& r) const {
  if (role && r.role != *role) return false;
  if (bucket && r.bucket != *bucket) return false;
  if (interaction && r.interaction != *interaction) return false;
  if (preceded_by) {
    const std::string& s = *preceded_by;
    if (r.preceding.size() < s.size()) return false;
    if (r.preceding.compare(r.preceding.size() - s.size(), s.size(), s) != 0) return false;
  }
  return true;
}

std::vector<const MoveLossRecord*> select(std::span<const MoveLossRecord> records, const Condition& c) {
  std::vector<const MoveLossRecord*> out;
  for (const auto& r : records) {
    if (c.matches(r)) out.push_back(&r);
  }
  return out;
}

std::optional<MetricValue> try_mean_loss(std::span<const MoveLossRecord> records, ActorRole a, Condition c) {
  c.role = a;
  std::vector<double> losses;
  for (const auto* r : select(records, c)) losses.push_back(r->loss);
  if (losses.empty()) return std::nullopt;
  return summarize(losses);
}

MetricValue mean_loss(std::span<const MoveLossRecord> records, ActorRole a, Condition c) {
  auto v = try_mean_loss(records, a, c);
  if (!v) throw EmptySetError("no moves by " + std::string(to_string(a)) + " under the condition");
  return *v;
}

namespace {

MetricValue difference(const MetricValue& x, const MetricValue& y) {
  return MetricValue{x.mean - y.mean, std::sqrt(x.se * x.se + y.se * y.se), x.count + y.count};
}

}  // namespace

std::optional<MetricValue> try_delta_loss(std::span<const MoveLossRecord> records, ActorRole a1, ActorRole a2,
                                          Condition c) {
  auto x = try_mean_loss(records, a1, c);
  auto y = try_mean_loss(records, a2, c);
  if (!x || !y) return std::nullopt;
  return difference(*x, *y);
}

MetricValue delta_loss(std::span<const MoveLossRecord> records, ActorRole a1, ActorRole a2, Condition c) {
  return difference(mean_loss(records, a1, c), mean_loss(records, a2, c));
}

std::optional<MetricValue> try_influence(std::span<const MoveLossRecord> records, ActorRole a, const std::string& s) {
  Condition one;
  one.preceded_by = "1" + s;
  Condition zero;
  zero.preceded_by = "0" + s;
  auto x = try_mean_loss(records, a, one);
  auto y = try_mean_loss(records, a, zero);
  if (!x || !y) return std::nullopt;
  return difference(*x, *y);
}

MetricValue influence(std::span<const MoveLossRecord> records, ActorRole a, const std::string& s) {
  auto v = try_influence(records, a, s);
  if (!v) throw EmptySetError("influence of " + std::string(to_string(a)) + " after '" + s + "' has an empty side");
  return *v;
}

MechanismPanel mechanism_panel(std::span<const MoveLossRecord> records) {
  MechanismPanel p;
  p.tricking = try_influence(records, ActorRole::kAlterJunior, "");
  p.helping_after_senior = try_influence(records, ActorRole::kFocalJunior, "1");
  p.helping_after_junior = try_influence(records, ActorRole::kFocalJunior, "0");
  Condition c;
  c.preceded_by = "00";
  p.indirect = try_delta_loss(records, ActorRole::kAlterJunior, ActorRole::kFocalJunior, c);
  return p;
}

std::vector<double> default_bucket_edges() {
  std::vector<double> e;
  for (int i = 0; i <= kDefaultBuckets; ++i) e.push_back(10.0 * i);
  return e;
}

std::vector<CurvePoint> bucketed_delta(std::span<const MoveLossRecord> records, std::span<const double> edges) {
  if (edges.size() < 2) throw ConfigError("need at least two bucket edges");
  for (size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ConfigError("bucket edges must increase");
  }
  if (edges.front() > 0.0 || edges.back() < 100.0) throw ConfigError("bucket edges must cover [0, 100]");
  const size_t n = edges.size() - 1;
  std::vector<std::vector<double>> alter(n), focal(n);
  for (const auto& r : records) {
    if (r.role != ActorRole::kAlterJunior && r.role != ActorRole::kFocalJunior) continue;
    const double x = r.focal_wp_before;
    for (size_t b = 0; b < n; ++b) {
      const bool last = b + 1 == n;
      if (x >= edges[b] && (x < edges[b + 1] || (last && x <= edges[b + 1]))) {
        (r.role == ActorRole::kAlterJunior ? alter : focal)[b].push_back(r.loss);
        break;
      }
    }
  }
  std::vector<CurvePoint> out;
  for (size_t b = 0; b < n; ++b) {
    CurvePoint p{edges[b], edges[b + 1], std::nullopt};
    if (!alter[b].empty() && !focal[b].empty()) p.value = difference(summarize(alter[b]), summarize(focal[b]));
    out.push_back(p);
  }
  return out;
}

std::vector<RatioPoint> exceedance_ratio(std::span<const MoveLossRecord> records, std::span<const double> thresholds) {
  for (size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) throw ConfigError("thresholds must increase");
  }
  std::vector<double> alter, focal;
  for (const auto& r : records) {
    if (r.role == ActorRole::kAlterJunior) alter.push_back(r.loss);
    if (r.role == ActorRole::kFocalJunior) focal.push_back(r.loss);
  }
  auto tail = [](const std::vector<double>& v, double t) {
    uint64_t k = 0;
    for (double x : v) k += x >= t ? 1 : 0;
    return static_cast<double>(k) / static_cast<double>(v.size());
  };
  std::vector<RatioPoint> out;
  for (double t : thresholds) {
    RatioPoint p{t, std::nullopt};
    if (!alter.empty() && !focal.empty()) {
      const double den = tail(focal, t);
      if (den > 0.0) p.ratio = tail(alter, t) / den;
    }
    out.push_back(p);
  }
  return out;
}

CounterfactualResult induced_loss_counterfactual(std::span<const chess::Position> boards, agents::Agent& senior,
                                                 agents::Agent& weak, agents::WinProbEvaluator& e) {
  CounterfactualResult out;
  std::vector<double> losses;
  Rng unused(0);
  for (const auto& board : boards) {
    try {
      const chess::Position after_senior =
          board.apply(senior.select_move(board, unused, agents::SamplingMode::kArgmax));
      if (after_senior.legal_moves().empty()) {
        ++out.skipped;
        continue;
      }
      const chess::Color weak_side = after_senior.side_to_move();
      const chess::Position after_weak =
          after_senior.apply(weak.select_move(after_senior, unused, agents::SamplingMode::kArgmax));
      losses.push_back(clamp_loss(e.evaluate(after_senior, weak_side).value - e.evaluate(after_weak, weak_side).value));
    } catch (const AgentError&) {
      ++out.skipped;
    }
  }
  if (!losses.empty()) out.loss = summarize(losses);
  return out;
}

SavingsTable hb_savings(std::span<const MoveLossRecord> records, std::optional<ActorRole> team) {
  std::vector<double> actual, hypothetical, savings;
  for (const auto& r : records) {
    if (!r.hypothetical_loss) continue;
    if (team && r.role != *team) continue;
    actual.push_back(r.loss);
    hypothetical.push_back(*r.hypothetical_loss);
    savings.push_back(*r.savings());
  }
  if (savings.empty()) throw EmptySetError("no HB moves with hypothetical losses");
  return SavingsTable{summarize(actual), summarize(hypothetical), summarize(savings)};
}

InteractionTable hb_interaction_table(std::span<const MoveLossRecord> records, ActorRole team) {
  InteractionTable t;
  t.team = team;
  std::array<std::vector<double>, 4> savings, next;
  for (const auto& r : records) {
    if (r.role != team || !r.interaction) continue;
    const size_t k = static_cast<size_t>(*r.interaction);
    ++t.rows[k].count;
    ++t.moves;
    if (auto s = r.savings()) savings[k].push_back(*s);
    if (r.next_opponent_loss) next[k].push_back(*r.next_opponent_loss);
  }
  for (size_t k = 0; k < 4; ++k) {
    auto& row = t.rows[k];
    row.type = frameworks::kAllInteractionTypes[k];
    row.share = t.moves ? 100.0 * static_cast<double>(row.count) / static_cast<double>(t.moves) : 0.0;
    if (!savings[k].empty()) row.savings = summarize(savings[k]);
    if (!next[k].empty()) row.next_opponent_loss = summarize(next[k]);
  }
  return t;
}

double clamp_rate(std::span<const MoveLossRecord> records) {
  if (records.empty()) return 0.0;
  uint64_t k = 0;
  for (const auto& r : records) k += r.clamped() ? 1 : 0;
  return static_cast<double>(k) / static_cast<double>(records.size());
}

}  // namespace skillcompat::analysis
