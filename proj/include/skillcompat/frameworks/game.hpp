#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/frameworks/bitstring.hpp"

namespace skillcompat::frameworks {

using agents::Agent;
using chess::Color;
using chess::Move;
using chess::PieceType;
using chess::Position;

enum class Framework { kStt, kHb, kPlain };
std::string_view to_string(Framework f);
Framework framework_from_string(std::string_view s);

enum class TeamRole { kFocal, kAlter };
std::string_view to_string(TeamRole r);
TeamRole team_role_from_string(std::string_view s);

// Who produced a ply. kTeam marks HB moves (brain and hand together);
// kOpening marks randomized opening plies.
enum class Actor { kSenior, kJunior, kTeam, kOpening };
std::string_view to_string(Actor a);
Actor actor_from_string(std::string_view s);

enum class InteractionType { kAgreement, kBlindsiding, kCorrection, kDisagreement };
inline constexpr InteractionType kAllInteractionTypes[] = {
    InteractionType::kAgreement, InteractionType::kBlindsiding, InteractionType::kCorrection,
    InteractionType::kDisagreement};
std::string_view to_string(InteractionType t);
InteractionType interaction_type_from_string(std::string_view s);

enum class GameResult { kWhite, kBlack, kDraw, kAborted };
std::string_view to_string(GameResult r);
GameResult game_result_from_string(std::string_view s);

// STT: senior + junior. HB: senior is the brain, junior the hand. Plain:
// only the senior plays.
struct Team {
  std::shared_ptr<Agent> senior;
  std::shared_ptr<Agent> junior;
  TeamRole role = TeamRole::kFocal;
};

struct HbPly {
  PieceType piece = PieceType::kPawn;
  std::optional<Move> intended;
  Move hand_sample;  // the hand's unconstrained draw
  InteractionType interaction = InteractionType::kAgreement;
};

struct PlyRecord {
  Move move;
  Actor actor = Actor::kSenior;
  TeamRole team = TeamRole::kFocal;
  std::optional<HbPly> hb;
};

struct GameRecord {
  static constexpr int kSchemaVersion = 1;

  uint64_t index = 0;
  Framework framework = Framework::kPlain;
  Color focal_color = Color::kWhite;
  // Agent names: focal senior/junior, alter senior/junior (junior empty for plain).
  std::string focal_senior, focal_junior, alter_senior, alter_junior;
  std::string start_fen = std::string(chess::kStartFen);
  std::string bitstring_id;
  std::string bitstring;  // prefix actually consumed (STT)
  uint64_t seed = 0;
  std::string config_hash;
  std::vector<PlyRecord> plies;
  GameResult result = GameResult::kDraw;
  std::string termination;  // a GameStatus name, or "aborted"
  std::string abort_reason;

  bool aborted() const { return result == GameResult::kAborted; }
  TeamRole role_of(Color c) const { return c == focal_color ? TeamRole::kFocal : TeamRole::kAlter; }
  // +1 focal win, 0 draw, -1 focal loss. Not meaningful for aborted games.
  int focal_score() const;
  // Positions before each ply plus the final one; throws IllegalMoveError on a bad record.
  std::vector<Position> replay() const;
};

struct GameOptions {
  int max_plies = chess::kDefaultMaxPlies;
  // Leading plies drawn from `opener`'s policy before the teams take over.
  int opening_plies = 0;
  std::shared_ptr<Agent> opener;
  std::string start_fen = std::string(chess::kStartFen);
};

// The side to move at ply t plays its senior iff b[t] = 1. Seniors argmax,
// juniors sample unless their spec overrides. AgentError aborts the game.
GameRecord play_stt_game(Team& white, Team& black, const Bitstring& b, uint64_t seed,
                         const GameOptions& opts = {});

// Brain names a piece, the hand samples freely and resamples within the
// piece when its draw disagrees.
GameRecord play_hb_game(Team& white, Team& black, uint64_t seed, const GameOptions& opts = {});

// Each side's senior plays every move.
GameRecord play_plain_game(Team& white, Team& black, uint64_t seed, const GameOptions& opts = {});

}  // namespace skillcompat::frameworks
