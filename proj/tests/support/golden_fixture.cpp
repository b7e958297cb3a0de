#include "golden_fixture.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <sstream>

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/analysis/loss.hpp"
#include "skillcompat/focal/factory.hpp"
#include "skillcompat/frameworks/record_io.hpp"
#include "skillcompat/util/error.hpp"

namespace skillcompat::testing {

using chess::Color;
using chess::Move;
using chess::PieceType;
using chess::Position;
using frameworks::Actor;
using frameworks::GameRecord;
using frameworks::HbPly;
using frameworks::InteractionType;
using frameworks::PlyRecord;
using frameworks::TeamRole;

namespace {

struct PlySpec {
  Actor actor = Actor::kSenior;
  double raw = 0.0;  // wp_before - wp_after
  std::optional<InteractionType> hb;
  double hypothetical = 0.0;
};

class Builder {
 public:
  explicit Builder(GoldenFixture& fx) : fx_(fx) {}

  GameRecord play(const std::vector<PlySpec>& plies, Color focal, uint64_t index, frameworks::Framework fw) {
    GameRecord g;
    g.index = index;
    g.framework = fw;
    g.focal_color = focal;
    g.focal_senior = fw == frameworks::Framework::kHb ? "brain" : "expector";
    g.focal_junior = "weak";
    g.alter_senior = "strong";
    g.alter_junior = "weak";
    g.seed = index;
    g.config_hash = "golden";
    Position p = Position::start();
    double wp = 50.0;  // mover perspective
    if (!used_.count(p.key())) claim(p, wp);
    for (const auto& spec : plies) {
      PlyRecord rec;
      rec.actor = spec.actor;
      rec.team = p.side_to_move() == focal ? TeamRole::kFocal : TeamRole::kAlter;
      const double next = 100.0 - wp + spec.raw;
      if (spec.hb) {
        HbPly hb;
        hb.interaction = *spec.hb;
        pick_hb(p, *spec.hb, wp - spec.hypothetical, next, rec.move, hb);
        rec.hb = hb;
      } else {
        rec.move = pick(p, next, {});
      }
      if (spec.actor == Actor::kSenior || spec.actor == Actor::kJunior) {
        g.bitstring += spec.actor == Actor::kSenior ? '1' : '0';
      }
      g.plies.push_back(rec);
      p = p.apply(rec.move);
      wp = next;
    }
    if (!g.bitstring.empty()) g.bitstring_id = "golden";
    g.result = frameworks::GameResult::kDraw;
    g.termination = "draw-maxply";
    return g;
  }

 private:
  static std::string rounded(double wp) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", wp);
    return buf;
  }

  bool usable(const Position& q) const {
    return !agents::terminal_winprob(q) && !used_.count(q.key());
  }

  void claim(const Position& q, double mover_wp) {
    used_.insert(q.key());
    const double white = q.side_to_move() == Color::kWhite ? mover_wp : 100.0 - mover_wp;
    fx_.table.emplace_back(q.fen(), std::stod(rounded(white)));
  }

  // First legal move (UCI order) reaching an unused, undecided board,
  // optionally restricted by `accept`.
  template <class F>
  Move pick(const Position& p, double next_wp, F accept) {
    for (const Move& m : sorted(p)) {
      if constexpr (!std::is_same_v<F, std::nullptr_t>) {
        if (!accept(m)) continue;
      }
      Position q = p.apply(m);
      if (!usable(q)) continue;
      claim(q, next_wp);
      return m;
    }
    throw Error("golden fixture: no usable move at " + p.fen());
  }
  Move pick(const Position& p, double next_wp, std::initializer_list<int>) {
    return pick(p, next_wp, [](const Move&) { return true; });
  }

  static std::vector<Move> sorted(const Position& p) {
    auto moves = p.legal_moves();
    std::sort(moves.begin(), moves.end(), chess::uci_less);
    return moves;
  }

  PieceType type_of(const Position& p, const Move& m) const { return p.at(m.from).type(); }

  // hyp_after: mover-perspective wp after the hand's own sample.
  void pick_hb(const Position& p, InteractionType kind, double hyp_after, double next_wp, Move& played, HbPly& hb) {
    const auto moves = sorted(p);
    auto count_of = [&](PieceType t) {
      return std::count_if(moves.begin(), moves.end(), [&](const Move& m) { return type_of(p, m) == t; });
    };
    switch (kind) {
      case InteractionType::kAgreement:
        played = pick(p, next_wp, [](const Move&) { return true; });
        hb.piece = type_of(p, played);
        hb.intended = played;
        hb.hand_sample = played;
        return;
      case InteractionType::kBlindsiding: {
        played = pick(p, next_wp, [&](const Move& m) { return count_of(type_of(p, m)) >= 2; });
        hb.piece = type_of(p, played);
        for (const Move& m : moves) {
          if (type_of(p, m) == hb.piece && !(m == played)) {
            hb.intended = m;
            break;
          }
        }
        hb.hand_sample = played;
        return;
      }
      case InteractionType::kCorrection:
      case InteractionType::kDisagreement: {
        const bool disagree = kind == InteractionType::kDisagreement;
        played = pick(p, next_wp, [&](const Move& m) {
          if (disagree && count_of(type_of(p, m)) < 2) return false;
          return std::any_of(moves.begin(), moves.end(), [&](const Move& h) {
            return type_of(p, h) != type_of(p, m) && usable(p.apply(h));
          });
        });
        hb.piece = type_of(p, played);
        if (disagree) {
          for (const Move& m : moves) {
            if (type_of(p, m) == hb.piece && !(m == played)) {
              hb.intended = m;
              break;
            }
          }
        } else {
          hb.intended = played;
        }
        hb.hand_sample = pick(p, 100.0 - hyp_after, [&](const Move& h) { return type_of(p, h) != hb.piece; });
        return;
      }
    }
  }

  GoldenFixture& fx_;
  std::set<uint64_t> used_;
};

// Bits 1000100011: alter juniors at plies 1, 3, 5, 7 (after 1, 0, 1, 0),
// focal juniors at plies 2 and 6. The last senior move gains.
std::vector<PlySpec> stt_plies(const std::array<double, 4>& alter, const std::array<double, 2>& focal) {
  const Actor S = Actor::kSenior, J = Actor::kJunior;
  return {{S, 0.0},      {J, alter[0]}, {J, focal[0]}, {J, alter[1]}, {S, 0.0},
          {J, alter[2]}, {J, focal[1]}, {J, alter[3]}, {S, 0.0},      {S, -1.00}};
}

// Twenty focal moves per game; the alter team always agrees.
std::vector<PlySpec> hb_plies(Color focal, const std::vector<InteractionType>& kinds) {
  std::vector<PlySpec> out;
  auto savings = [](InteractionType t) {
    switch (t) {
      case InteractionType::kCorrection: return golden::kCorrectionSavings;
      case InteractionType::kDisagreement: return golden::kDisagreementSavings;
      default: return 0.0;
    }
  };
  // The alter reply to focal move i is the next ply; it loses more after a disagreement.
  auto alter_reply = [&](std::optional<InteractionType> prev) {
    const double loss = prev == InteractionType::kDisagreement ? golden::kAlterLossAfterDisagreement
                                                               : golden::kAlterLoss;
    return PlySpec{Actor::kTeam, loss, InteractionType::kAgreement, loss};
  };
  for (size_t i = 0; i < kinds.size(); ++i) {
    PlySpec f{Actor::kTeam, golden::kHbTrueLoss, kinds[i], golden::kHbTrueLoss + savings(kinds[i])};
    if (focal == Color::kWhite) {
      out.push_back(f);
      out.push_back(alter_reply(kinds[i]));
    } else {
      out.push_back(alter_reply(i > 0 ? std::optional<InteractionType>(kinds[i - 1]) : std::nullopt));
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace

GoldenFixture make_golden_fixture() {
  GoldenFixture fx;
  Builder builder(fx);
  fx.stt_expector.push_back(
      builder.play(stt_plies({4.00, 4.00, 4.92, 4.92}, {3.00, 4.14}), Color::kWhite, 0, frameworks::Framework::kStt));
  fx.stt_tree.push_back(
      builder.play(stt_plies({1.50, 1.00, 2.50, 1.92}, {1.00, 1.00}), Color::kWhite, 0, frameworks::Framework::kStt));
  fx.stt_tree.back().focal_senior = "tree";

  using I = InteractionType;
  const I A = I::kAgreement, B = I::kBlindsiding, C = I::kCorrection, D = I::kDisagreement;
  const std::vector<I> first = {A, B, A, C, A, D, A, A, B, A, C, A, D, A, A, B, A, A, D, A};
  const std::vector<I> second = {A, C, A, B, A, D, A, B, A, A, C, A, D, B, A, A, A, A, A, A};
  fx.hb.push_back(builder.play(hb_plies(Color::kWhite, first), Color::kWhite, 0, frameworks::Framework::kHb));
  fx.hb.push_back(builder.play(hb_plies(Color::kBlack, second), Color::kBlack, 1, frameworks::Framework::kHb));
  return fx;
}

std::string GoldenFixture::jsonl(const std::vector<frameworks::GameRecord>& games) {
  std::string out;
  for (const auto& g : games) out += frameworks::to_jsonl_line(g) + "\n";
  return out;
}

std::string GoldenFixture::table_tsv() const {
  std::ostringstream out;
  char buf[32];
  for (const auto& [fen, wp] : table) {
    std::snprintf(buf, sizeof buf, "%.2f", wp);
    out << fen << '\t' << buf << '\n';
  }
  return out.str();
}

std::vector<analysis::MoveLossRecord> golden_losses(const std::filesystem::path& dir, const std::string& file) {
  agents::EvaluatorSpec table;
  table.table_path = (dir / "eval_table.tsv").string();
  auto eval = focal::make_evaluator(table);
  std::vector<analysis::MoveLossRecord> out;
  for (const auto& g : frameworks::read_records((dir / file).string())) {
    auto r = analysis::annotate_losses(g, *eval);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

analysis::Report golden_report(const std::filesystem::path& dir) {
  analysis::ReportInputs in;
  in.losses = golden_losses(dir, "stt_expector.jsonl");
  const auto hb = golden_losses(dir, "hb.jsonl");
  in.losses.insert(in.losses.end(), hb.begin(), hb.end());
  in.config_hash = "golden";
  in.pool_id = "golden";
  in.evaluator = "table:eval_table.tsv";
  return analysis::build_report(in);
}

}  // namespace skillcompat::testing
