#include <doctest.h>

#include <cmath>

#include "golden_fixture.hpp"
#include "skillcompat/analysis/report.hpp"
#include "skillcompat/util/error.hpp"
#include "skillcompat/util/random.hpp"

using namespace skillcompat;
using namespace skillcompat::analysis;
using testing::golden_losses;
using testing::golden_report;

namespace {

const std::filesystem::path kGolden = std::filesystem::path(SKILLCOMPAT_FIXTURE_DIR) / "golden";

MoveLossRecord rec(ActorRole role, double loss, std::string preceding = "", double focal_wp = 50.0) {
  MoveLossRecord r;
  r.role = role;
  r.loss = loss;
  r.raw_delta = loss;
  r.preceding = std::move(preceding);
  r.focal_wp_before = focal_wp;
  r.bucket = decile_bucket(focal_wp);
  return r;
}

double plain_mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

std::vector<MoveLossRecord> random_records(uint64_t seed, size_t n) {
  Rng rng(seed);
  std::vector<MoveLossRecord> out;
  const ActorRole roles[] = {ActorRole::kFocalSenior, ActorRole::kFocalJunior, ActorRole::kAlterSenior,
                             ActorRole::kAlterJunior};
  for (size_t i = 0; i < n; ++i) {
    std::string pre;
    for (uint64_t k = rng.below(3); k > 0; --k) pre += rng.coin() ? '1' : '0';
    out.push_back(rec(roles[rng.below(4)], 30.0 * rng.uniform(), pre, 100.0 * rng.uniform()));
  }
  return out;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("clamp and deciles") {
    CHECK(clamp_loss(-3.0) == 0.0);
    CHECK(clamp_loss(5.5) == 5.5);
    CHECK(clamp_loss(140.0) == 100.0);
    CHECK(decile_bucket(0.0) == 0);
    CHECK(decile_bucket(9.999) == 0);
    CHECK(decile_bucket(10.0) == 1);
    CHECK(decile_bucket(99.0) == 9);
    CHECK(decile_bucket(100.0) == 9);
    MoveLossRecord gain = rec(ActorRole::kFocalSenior, 0.0);
    gain.raw_delta = -2.0;
    CHECK(gain.clamped());
  }

  TEST_CASE("summarize") {
    const std::vector<double> xs = {1.0, 2.0, 3.0};
    auto m = summarize(xs);
    CHECK(m.mean == doctest::Approx(2.0));
    CHECK(m.se == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(m.count == 3);
    const std::vector<double> one = {4.0};
    CHECK(summarize(one).se == 0.0);
    CHECK_THROWS_AS(summarize(std::vector<double>{}), EmptySetError);
  }

  TEST_CASE("golden fixture values") {
    auto expector = golden_losses(kGolden, "stt_expector.jsonl");
    auto d = delta_loss(expector, ActorRole::kAlterJunior, ActorRole::kFocalJunior);
    CHECK(std::abs(d.mean - testing::golden::kDelta) < 1e-9);
    CHECK(std::abs(mean_loss(expector, ActorRole::kAlterJunior).mean - testing::golden::kAlterJuniorLoss) < 1e-9);

    auto tree = golden_losses(kGolden, "stt_tree.jsonl");
    CHECK(std::abs(influence(tree, ActorRole::kAlterJunior, "").mean - testing::golden::kTricking) < 1e-9);

    std::vector<MoveLossRecord> both = expector;
    both.insert(both.end(), tree.begin(), tree.end());
    CHECK(std::abs(clamp_rate(both) - testing::golden::kSttClampRate) < 1e-9);

    auto hb = golden_losses(kGolden, "hb.jsonl");
    auto s = hb_savings(hb, ActorRole::kFocalTeam);
    CHECK(std::abs(s.savings.mean - testing::golden::kHbSavings) < 1e-9);
    CHECK(s.savings.count == testing::golden::kHbFocalMoves);
    auto table = hb_interaction_table(hb, ActorRole::kFocalTeam);
    CHECK(table.rows[3].count == testing::golden::kDisagreement);
    CHECK(std::abs(table.rows[3].next_opponent_loss->mean - testing::golden::kAlterLossAfterDisagreement) < 1e-9);
  }

  TEST_CASE("delta is antisymmetric") {
    auto rs = random_records(3, 400);
    auto ab = delta_loss(rs, ActorRole::kAlterJunior, ActorRole::kFocalJunior);
    auto ba = delta_loss(rs, ActorRole::kFocalJunior, ActorRole::kAlterJunior);
    CHECK(ab.mean == doctest::Approx(-ba.mean));
    CHECK(ab.se == doctest::Approx(ba.se));
  }

  TEST_CASE("influence agrees with a direct scan") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      auto rs = random_records(seed, 300);
      for (const std::string s : {"", "0", "1"}) {
        std::vector<double> senior, junior;
        for (const auto& r : rs) {
          if (r.role != ActorRole::kAlterJunior) continue;
          const std::string want1 = "1" + s, want0 = "0" + s;
          auto ends = [&](const std::string& w) {
            return r.preceding.size() >= w.size() && r.preceding.compare(r.preceding.size() - w.size(), w.size(), w) == 0;
          };
          if (ends(want1)) senior.push_back(r.loss);
          if (ends(want0)) junior.push_back(r.loss);
        }
        auto i = try_influence(rs, ActorRole::kAlterJunior, s);
        if (senior.empty() || junior.empty()) {
          CHECK_FALSE(i.has_value());
        } else {
          REQUIRE(i.has_value());
          CHECK(i->mean == doctest::Approx(plain_mean(senior) - plain_mean(junior)).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("single bucket equals the overall delta") {
    auto rs = random_records(8, 300);
    const std::vector<double> edges = {0.0, 100.0};
    auto curve = bucketed_delta(rs, edges);
    REQUIRE(curve.size() == 1);
    auto all = delta_loss(rs, ActorRole::kAlterJunior, ActorRole::kFocalJunior);
    CHECK(curve[0].value->mean == doctest::Approx(all.mean));
    CHECK(curve[0].value->count == all.count);
  }

  TEST_CASE("exceedance ratio of identical distributions is one") {
    std::vector<MoveLossRecord> rs;
    for (double l : {0.5, 3.0, 7.0, 12.0}) {
      rs.push_back(rec(ActorRole::kAlterJunior, l));
      rs.push_back(rec(ActorRole::kFocalJunior, l));
    }
    const std::vector<double> ts = {0, 2, 5, 10, 20};
    auto pts = exceedance_ratio(rs, ts);
    for (size_t i = 0; i < 4; ++i) CHECK(pts[i].ratio == doctest::Approx(1.0));
    CHECK_FALSE(pts[4].ratio.has_value());
  }

  TEST_CASE("report: missing sections and determinism") {
    ReportInputs in;
    in.losses = golden_losses(kGolden, "stt_expector.jsonl");
    in.config_hash = "h";
    in.evaluator = "table";
    auto a = build_report(in);
    CHECK(a.text == build_report(in).text);
    CHECK(a.files == build_report(in).files);
    CHECK(a.text.find("Hand-and-Brain") == std::string::npos);
    CHECK(a.text.find("Interaction types") == std::string::npos);
    CHECK(a.text.find("helping I(focal-junior, \"1\")            n/a (0 moves)") != std::string::npos);
    CHECK(format_metric(std::nullopt) == "n/a (0 moves)");

    const auto golden = golden_report(kGolden);
    CHECK(golden.text.find("Hand-and-Brain savings") != std::string::npos);
  }

  TEST_CASE("loss files round trip") {
    auto rs = golden_losses(kGolden, "hb.jsonl");
    auto path = std::filesystem::temp_directory_path() / "skillcompat_losses.jsonl";
    LossFileHeader h;
    h.evaluator = "table";
    h.games = 2;
    write_losses(path.string(), h, rs);
    LossFileHeader back;
    auto again = read_losses(path.string(), &back);
    REQUIRE(again.size() == rs.size());
    CHECK(back.games == 2);
    for (size_t i = 0; i < rs.size(); ++i) CHECK(to_json(again[i]) == to_json(rs[i]));
  }
}
