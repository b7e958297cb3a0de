#include "skillcompat/analysis/report.hpp"

#include <cstdio>
#include <sstream>

#include "skillcompat/util/error.hpp"

namespace skillcompat::analysis {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0.00" || s == "-0.000000") s.erase(0, 1);
  return s;
}

std::string csv_metric(const std::optional<MetricValue>& v) {
  if (!v) return ",,0";
  return fixed(v->mean, 6) + "," + fixed(v->se, 6) + "," + std::to_string(v->count);
}

std::string pad(const std::string& s, size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

bool has_role(const std::vector<MoveLossRecord>& r, ActorRole a) {
  for (const auto& x : r) {
    if (x.role == a) return true;
  }
  return false;
}

}  // namespace

std::string format_metric(const std::optional<MetricValue>& v) {
  if (!v) return "n/a (0 moves)";
  return fixed(v->mean, 2) + " +/- " + fixed(v->se, 2) + " (n=" + std::to_string(v->count) + ")";
}

json MatchSummary::to_json() const {
  return json{{"label", label},       {"framework", frameworks::to_string(framework)},
              {"n", n},               {"wins", wins},
              {"draws", draws},       {"losses", losses},
              {"aborted", aborted},   {"maxply_draws", maxply_draws},
              {"win_share", win_share}, {"se", se},
              {"config_hash", config_hash}, {"pool_id", pool_id}};
}

MatchSummary MatchSummary::from_json(const json& j) {
  try {
    MatchSummary m;
    m.label = j.at("label").get<std::string>();
    m.framework = frameworks::framework_from_string(j.at("framework").get<std::string>());
    m.n = j.at("n").get<uint64_t>();
    m.wins = j.at("wins").get<uint64_t>();
    m.draws = j.at("draws").get<uint64_t>();
    m.losses = j.at("losses").get<uint64_t>();
    m.aborted = j.at("aborted").get<uint64_t>();
    m.maxply_draws = j.at("maxply_draws").get<uint64_t>();
    m.win_share = j.at("win_share").get<double>();
    m.se = j.at("se").get<double>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.pool_id = j.at("pool_id").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad match summary: ") + e.what());
  }
}

Report build_report(const ReportInputs& in) {
  Report rep;
  std::ostringstream t;
  const auto& L = in.losses;

  t << "skillcompat report\n";
  t << "config hash: " << (in.config_hash.empty() ? "-" : in.config_hash) << "\n";
  t << "bitstring pool: " << (in.pool_id.empty() ? "-" : in.pool_id) << "\n";
  t << "evaluator: " << (in.evaluator.empty() ? "-" : in.evaluator) << "\n";
  t << "aborted games: " << in.aborted_games << "\n";
  t << "annotated moves: " << L.size() << "\n";
  uint64_t clamped = 0;
  for (const auto& r : L) clamped += r.clamped() ? 1 : 0;
  t << "clamp rate: " << fixed(100.0 * clamp_rate(L), 2) << "% (" << clamped << " of " << L.size() << " moves)\n";

  // Match results.
  if (!in.matches.empty()) {
    t << "\n== Match results ==\n";
    std::ostringstream csv;
    csv << "label,framework,n,wins,draws,losses,aborted,maxply_draws,win_share,se,config_hash,pool_id\n";
    for (const auto& m : in.matches) {
      t << pad(m.label, 24) << " " << pad(std::string(frameworks::to_string(m.framework)), 6) << " win-share "
        << fixed(m.win_share, 2) << " +/- " << fixed(m.se, 2) << "  (W" << m.wins << " D" << m.draws << " L"
        << m.losses << ", n=" << m.n << ", aborted " << m.aborted << ", max-ply draws " << m.maxply_draws << ")\n";
      csv << m.label << "," << frameworks::to_string(m.framework) << "," << m.n << "," << m.wins << "," << m.draws
          << "," << m.losses << "," << m.aborted << "," << m.maxply_draws << "," << fixed(m.win_share, 6) << ","
          << fixed(m.se, 6) << "," << m.config_hash << "," << m.pool_id << "\n";
    }
    rep.files["matches.csv"] = csv.str();
  }

  const bool stt = has_role(L, ActorRole::kFocalJunior) || has_role(L, ActorRole::kAlterJunior) ||
                   has_role(L, ActorRole::kFocalSenior) || has_role(L, ActorRole::kAlterSenior);
  if (stt) {
    t << "\n== Mean loss by actor ==\n";
    std::ostringstream csv;
    csv << "metric,mean,se,count\n";
    for (ActorRole a : {ActorRole::kFocalSenior, ActorRole::kFocalJunior, ActorRole::kAlterSenior,
                        ActorRole::kAlterJunior}) {
      auto v = try_mean_loss(L, a);
      t << pad("L(" + std::string(to_string(a)) + ", *)", 40) << format_metric(v) << "\n";
      csv << "L(" << to_string(a) << " *)," << csv_metric(v) << "\n";
    }
    auto d = try_delta_loss(L, ActorRole::kAlterJunior, ActorRole::kFocalJunior);
    t << pad("delta(alter-junior, focal-junior, *)", 40) << format_metric(d) << "\n";
    csv << "delta(alter-junior focal-junior *)," << csv_metric(d) << "\n";

    const MechanismPanel p = mechanism_panel(L);
    t << "\n== Mechanisms ==\n";
    const std::pair<const char*, const std::optional<MetricValue>*> cells[] = {
        {"tricking I(alter-junior, \"\")", &p.tricking},
        {"helping I(focal-junior, \"1\")", &p.helping_after_senior},
        {"helping I(focal-junior, \"0\")", &p.helping_after_junior},
        {"indirect delta(.., \"00\")", &p.indirect},
    };
    for (const auto& [name, v] : cells) {
      t << pad(name, 40) << format_metric(*v) << "\n";
      csv << name << "," << csv_metric(*v) << "\n";
    }
    rep.files["losses.csv"] = csv.str();

    // Curves.
    const auto curve = bucketed_delta(L, in.bucket_edges);
    std::ostringstream dat;
    dat << "# focal-perspective win probability bucket vs delta(alter-junior, focal-junior)\n";
    dat << "# lo hi mean se count\n";
    t << "\n== Delta by board win probability ==\n";
    for (const auto& pt : curve) {
      const std::string label = "[" + fixed(pt.x_lo, 0) + ", " + fixed(pt.x_hi, 0) + ")";
      t << pad(label, 12) << format_metric(pt.value) << "\n";
      if (pt.value) {
        dat << fixed(pt.x_lo, 2) << " " << fixed(pt.x_hi, 2) << " " << fixed(pt.value->mean, 6) << " "
            << fixed(pt.value->se, 6) << " " << pt.value->count << "\n";
      } else {
        dat << "\n";  // gap
      }
    }
    rep.files["bucketed_delta.dat"] = dat.str();

    const auto ratio = exceedance_ratio(L, in.thresholds);
    std::ostringstream rdat;
    rdat << "# loss threshold vs P(loss>=t | alter-junior) / P(loss>=t | focal-junior) (interpretation)\n";
    t << "\n== Loss exceedance ratio (alter-junior over focal-junior) ==\n";
    for (const auto& pt : ratio) {
      t << pad("t=" + fixed(pt.threshold, 1), 12) << (pt.ratio ? fixed(*pt.ratio, 3) : "n/a") << "\n";
      if (pt.ratio) {
        rdat << fixed(pt.threshold, 2) << " " << fixed(*pt.ratio, 6) << "\n";
      } else {
        rdat << "\n";
      }
    }
    rep.files["exceedance_ratio.dat"] = rdat.str();
  }

  const bool hb = has_role(L, ActorRole::kFocalTeam) || has_role(L, ActorRole::kAlterTeam);
  if (hb) {
    t << "\n== Hand-and-Brain savings ==\n";
    std::ostringstream csv;
    csv << "team,true_loss,true_se,hypothetical_loss,hypothetical_se,savings,savings_se,count\n";
    for (ActorRole team : {ActorRole::kFocalTeam, ActorRole::kAlterTeam}) {
      if (!has_role(L, team)) {
        t << pad(std::string(to_string(team)), 12) << "n/a (0 moves)\n";
        continue;
      }
      const SavingsTable s = hb_savings(L, team);
      t << pad(std::string(to_string(team)), 12) << "true " << fixed(s.true_loss.mean, 2) << "  hypothetical "
        << fixed(s.hypothetical_loss.mean, 2) << "  savings " << fixed(s.savings.mean, 2) << " +/- "
        << fixed(s.savings.se, 2) << " (n=" << s.savings.count << ")\n";
      csv << to_string(team) << "," << fixed(s.true_loss.mean, 6) << "," << fixed(s.true_loss.se, 6) << ","
          << fixed(s.hypothetical_loss.mean, 6) << "," << fixed(s.hypothetical_loss.se, 6) << ","
          << fixed(s.savings.mean, 6) << "," << fixed(s.savings.se, 6) << "," << s.savings.count << "\n";
    }
    rep.files["hb_savings.csv"] = csv.str();

    t << "\n== Interaction types ==\n";
    std::ostringstream icsv;
    icsv << "team,type,count,share,savings,savings_se,next_opponent_loss,next_opponent_loss_se\n";
    for (ActorRole team : {ActorRole::kFocalTeam, ActorRole::kAlterTeam}) {
      const InteractionTable tab = hb_interaction_table(L, team);
      t << to_string(team) << " (" << tab.moves << " moves)\n";
      for (const auto& row : tab.rows) {
        t << "  " << pad(std::string(frameworks::to_string(row.type)), 14) << pad(fixed(row.share, 1) + "%", 8)
          << " savings " << pad(format_metric(row.savings), 28) << " next opponent loss "
          << format_metric(row.next_opponent_loss) << "\n";
        icsv << to_string(team) << "," << frameworks::to_string(row.type) << "," << row.count << ","
             << fixed(row.share, 6) << "," << (row.savings ? fixed(row.savings->mean, 6) : "") << ","
             << (row.savings ? fixed(row.savings->se, 6) : "") << ","
             << (row.next_opponent_loss ? fixed(row.next_opponent_loss->mean, 6) : "") << ","
             << (row.next_opponent_loss ? fixed(row.next_opponent_loss->se, 6) : "") << "\n";
      }
    }
    rep.files["hb_interactions.csv"] = icsv.str();
  }

  if (!in.counterfactual.empty()) {
    t << "\n== Junior loss induced by seniors on fixed boards ==\n";
    std::ostringstream csv;
    csv << "senior,boards,mean,se,count,skipped\n";
    for (const auto& row : in.counterfactual) {
      t << pad(row.senior, 20) << pad(row.boards, 20) << format_metric(row.result.loss) << " skipped "
        << row.result.skipped << "\n";
      csv << row.senior << "," << row.boards << "," << csv_metric(row.result.loss) << "," << row.result.skipped << "\n";
    }
    rep.files["counterfactual.csv"] = csv.str();
  }

  const std::string stamp = "# config_hash=" + (in.config_hash.empty() ? std::string("-") : in.config_hash) +
                            " pool=" + (in.pool_id.empty() ? std::string("-") : in.pool_id) + "\n";
  for (auto& [name, body] : rep.files) body = stamp + body;
  rep.text = t.str();
  return rep;
}

}  // namespace skillcompat::analysis
