#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "skillcompat/agents/evaluator.hpp"
#include "skillcompat/frameworks/game.hpp"

namespace skillcompat::analysis {

using frameworks::Framework;
using frameworks::GameRecord;
using frameworks::InteractionType;

enum class ActorRole { kFocalSenior, kFocalJunior, kAlterSenior, kAlterJunior, kFocalTeam, kAlterTeam, kOpening };
std::string_view to_string(ActorRole r);
ActorRole actor_role_from_string(std::string_view s);

inline constexpr int kDefaultBuckets = 10;

struct MoveLossRecord {
  uint64_t game = 0;
  uint32_t ply = 0;
  Framework framework = Framework::kStt;
  ActorRole role = ActorRole::kFocalSenior;
  double wp_before = 50.0;  // mover's perspective
  double wp_after = 50.0;   // mover's perspective, after its move
  double loss = 0.0;        // clamp(wp_before - wp_after, 0, 100)
  double raw_delta = 0.0;   // wp_before - wp_after
  // Up to two earlier STT labels, oldest first ('1' senior, '0' junior).
  std::string preceding;
  double focal_wp_before = 50.0;
  int bucket = 0;  // decile of focal_wp_before

  // HB only.
  std::optional<InteractionType> interaction;
  std::optional<double> hypothetical_loss;  // of the hand's unconstrained sample
  std::optional<double> next_opponent_loss;

  bool clamped() const { return raw_delta < 0.0; }
  std::optional<double> savings() const {
    if (!hypothetical_loss) return std::nullopt;
    return *hypothetical_loss - loss;
  }
};

double clamp_loss(double raw_delta);
// Index of wp in ten [lo, hi) deciles over [0, 100]; 100 falls in the last.
int decile_bucket(double wp);

// One record per ply of a finished (non-aborted) game. Throws on an
// unreplayable record or evaluator failure.
std::vector<MoveLossRecord> annotate_losses(const GameRecord& g, agents::WinProbEvaluator& e);

// Loss files: a header line, then one JSON object per move.
struct LossFileHeader {
  static constexpr int kSchemaVersion = 1;
  std::string evaluator;
  std::string config_hash;
  uint64_t games = 0;
  uint64_t aborted = 0;
};

nlohmann::json to_json(const MoveLossRecord& r);
MoveLossRecord loss_from_json(const nlohmann::json& j);
void write_losses(const std::string& path, const LossFileHeader& header, const std::vector<MoveLossRecord>& records);
std::vector<MoveLossRecord> read_losses(const std::string& path, LossFileHeader* header = nullptr);

}  // namespace skillcompat::analysis
