#include "skillcompat/focal/expector.hpp"

#include <algorithm>

#include "skillcompat/util/error.hpp"

namespace skillcompat::focal {

using agents::SamplingMode;

namespace {

bool decided(const Position& p) { return agents::terminal_winprob(p).has_value(); }

// Simulated play: juniors and seniors both take their argmax move.
Move simulate(Agent& model, const Position& p) {
  Rng unused(0);
  return model.select_move(p, unused, SamplingMode::kArgmax);
}

}  // namespace

void ExpectorConfig::validate() const {
  if (width < 1) throw ConfigError("expector width must be >= 1");
  if (!evaluator) throw ConfigError("expector needs an evaluator");
  if (!models.base_strong && mode != ExpectorMode::kHb) throw ConfigError("expector needs a base-strong model");
  switch (mode) {
    case ExpectorMode::kSttFull:
      if (!models.opponent_senior || !models.opponent_junior || !models.partner_junior) {
        throw ConfigError("stt-full expector needs opponent senior/junior and partner junior models");
      }
      break;
    case ExpectorMode::kSttTricking:
      if (!models.opponent_senior || !models.opponent_junior) {
        throw ConfigError("stt-tricking expector needs opponent senior/junior models");
      }
      break;
    case ExpectorMode::kSttHelping:
      if (!models.opponent_senior || !models.partner_junior) {
        throw ConfigError("stt-helping expector needs opponent senior and partner junior models");
      }
      break;
    case ExpectorMode::kHb:
      if (!models.own_hand) throw ConfigError("hb expector needs an own-hand model");
      break;
  }
}

std::vector<std::string> schedules_for(ExpectorMode mode) {
  switch (mode) {
    case ExpectorMode::kSttFull: return {"00", "01", "10", "11"};
    case ExpectorMode::kSttTricking: return {"0", "1"};
    case ExpectorMode::kSttHelping: return {"10", "11"};
    case ExpectorMode::kHb: break;
  }
  throw ConfigError("hb mode has no STT schedules");
}

SttDecision expector_stt_decide(const ExpectorConfig& cfg, const Position& p) {
  cfg.validate();
  if (p.legal_moves().empty()) throw AgentError("expector asked to move in a terminal position");
  const chess::Color focal = p.side_to_move();
  WinProbEvaluator& eval = *cfg.evaluator;

  SttDecision out;
  out.schedules = schedules_for(cfg.mode);
  const MoveDistribution base = cfg.models.base_strong->policy(p);

  for (const auto& entry : base.top(static_cast<size_t>(cfg.width))) {
    SttCandidate cand{entry.move, {}, 0.0};
    const Position after_own = p.apply(entry.move);
    if (decided(after_own)) {
      cand.outcomes.assign(out.schedules.size(), eval.evaluate(after_own, focal).value);
    } else {
      // Opponent replies and the own follow-ups they lead to, computed once each.
      std::optional<Position> after_opp[2];
      std::optional<double> leaf[2][2];
      for (const std::string& s : out.schedules) {
        const int opp_bit = s[0] - '0';
        if (!after_opp[opp_bit]) {
          Agent& opp = opp_bit ? *cfg.models.opponent_senior : *cfg.models.opponent_junior;
          after_opp[opp_bit] = after_own.apply(simulate(opp, after_own));
        }
        const Position& mid = *after_opp[opp_bit];
        if (s.size() == 1 || decided(mid)) {
          cand.outcomes.push_back(eval.evaluate(mid, focal).value);
          continue;
        }
        const int own_bit = s[1] - '0';
        if (!leaf[opp_bit][own_bit]) {
          Agent& own = own_bit ? *cfg.models.base_strong : *cfg.models.partner_junior;
          leaf[opp_bit][own_bit] = eval.evaluate(mid.apply(simulate(own, mid)), focal).value;
        }
        cand.outcomes.push_back(*leaf[opp_bit][own_bit]);
      }
    }
    double sum = 0.0;
    for (double w : cand.outcomes) sum += w;
    cand.expectation = sum / static_cast<double>(cand.outcomes.size());
    out.candidates.push_back(std::move(cand));
  }

  const SttCandidate* best = &out.candidates.front();
  for (const auto& c : out.candidates) {
    if (c.expectation > best->expectation) best = &c;
  }
  out.move = best->move;
  return out;
}

Move expector_stt_move(const ExpectorConfig& cfg, const Position& p) { return expector_stt_decide(cfg, p).move; }

HbDecision expector_hb_decide(const ExpectorConfig& cfg, const Position& p) {
  cfg.validate();
  const auto legal = p.legal_moves();
  if (legal.empty()) throw AgentError("expector asked to move in a terminal position");
  const chess::Color focal = p.side_to_move();

  std::vector<PieceType> available;
  for (PieceType t : chess::kAllPieceTypes) {
    if (std::any_of(legal.begin(), legal.end(), [&](const Move& m) { return p.at(m.from).type() == t; })) {
      available.push_back(t);
    }
  }
  const MoveDistribution hand = cfg.models.own_hand->policy(p);

  HbDecision out;
  if (available.size() == 1) {
    out.piece = available.front();
    out.forced = true;
    out.intended = agents::conditional_policy(hand, p, out.piece).argmax();
    return out;
  }

  for (PieceType t : available) {
    HbPieceEvaluation pe;
    pe.piece = t;
    auto top = agents::conditional_policy(hand, p, t).top(static_cast<size_t>(cfg.width));
    double mass = 0.0;
    for (const auto& e : top) mass += e.prob;
    for (const auto& e : top) {
      double prob = mass > 0.0 ? e.prob / mass : 1.0 / static_cast<double>(top.size());
      double wp = cfg.evaluator->evaluate(p.apply(e.move), focal).value;
      pe.outcomes.push_back({e.move, prob, wp});
      pe.expectation += prob * wp;
    }
    pe.best_wp = pe.outcomes.front().wp;
    for (const auto& o : pe.outcomes) pe.best_wp = std::max(pe.best_wp, o.wp);
    out.pieces.push_back(std::move(pe));
  }

  const HbPieceEvaluation* best = &out.pieces.front();
  for (const auto& pe : out.pieces) {
    if (pe.expectation > best->expectation ||
        (pe.expectation == best->expectation && pe.best_wp > best->best_wp)) {
      best = &pe;
    }
  }
  out.piece = best->piece;
  // Outcomes are in hand-probability order, so the first max wins ties.
  const HbOutcome* pick = &best->outcomes.front();
  for (const auto& o : best->outcomes) {
    if (o.wp > pick->wp) pick = &o;
  }
  out.intended = pick->move;
  return out;
}

PieceType expector_hb_piece(const ExpectorConfig& cfg, const Position& p) { return expector_hb_decide(cfg, p).piece; }

ExpectorSttAgent::ExpectorSttAgent(AgentSpec spec, ExpectorConfig cfg) : Agent(std::move(spec)), cfg_(std::move(cfg)) {
  this->spec().validate();
  cfg_.validate();
}

MoveDistribution ExpectorSttAgent::policy(const Position& p) {
  return MoveDistribution::concentrated(p.legal_moves(), expector_stt_move(cfg_, p));
}

WinProb ExpectorSttAgent::value(const Position& p) { return cfg_.evaluator->evaluate(p, p.side_to_move()); }

Move ExpectorSttAgent::select_move(const Position& p, Rng&, SamplingMode) { return expector_stt_move(cfg_, p); }

ExpectorHbAgent::ExpectorHbAgent(AgentSpec spec, ExpectorConfig cfg) : Agent(std::move(spec)), cfg_(std::move(cfg)) {
  this->spec().validate();
  cfg_.validate();
}

MoveDistribution ExpectorHbAgent::policy(const Position& p) {
  return MoveDistribution::concentrated(p.legal_moves(), expector_hb_decide(cfg_, p).intended);
}

WinProb ExpectorHbAgent::value(const Position& p) { return cfg_.evaluator->evaluate(p, p.side_to_move()); }

Move ExpectorHbAgent::select_move(const Position& p, Rng&, SamplingMode) { return expector_hb_decide(cfg_, p).intended; }

agents::BrainChoice ExpectorHbAgent::choose_piece(const Position& p, Rng&) {
  HbDecision d = expector_hb_decide(cfg_, p);
  return agents::BrainChoice{d.piece, d.intended};
}

}  // namespace skillcompat::focal
