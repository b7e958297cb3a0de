#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skillcompat/agents/distribution.hpp"

namespace skillcompat::agents {

enum class AgentKind {
  kBuiltinStrong,
  kBuiltinWeak,
  kUci,
  kTree,
  kExpectorStt,
  kExpectorHb,
};

std::string_view to_string(AgentKind k);
AgentKind agent_kind_from_string(std::string_view s);

enum class SamplingMode { kArgmax, kSample };

std::string_view to_string(SamplingMode m);
SamplingMode sampling_mode_from_string(std::string_view s);

// Which simulated schedules the STT expector averages over.
enum class ExpectorMode { kSttFull, kSttTricking, kSttHelping, kHb };

std::string_view to_string(ExpectorMode m);
ExpectorMode expector_mode_from_string(std::string_view s);

inline constexpr uint64_t kDefaultStrongNodes = 50'000;
inline constexpr double kDefaultWeakTemperature = 100.0;
inline constexpr double kDefaultStrongTemperature = 20.0;
inline constexpr double kDefaultSlope = 0.004;

// Declarative description of an agent, as written in experiment configs.
struct AgentSpec {
  std::string name;
  AgentKind kind = AgentKind::kBuiltinWeak;

  // Search budget in nodes; 0 selects the kind's default.
  uint64_t nodes = 0;
  // Softmax temperature in centipawns; negative selects the kind's default.
  double temperature = -1.0;
  // Unset means the role decides (seniors/brains argmax, juniors/hands sample).
  std::optional<SamplingMode> sampling;
  uint64_t seed = 0;
  // Centipawn-to-win-probability slope used by value().
  double slope = kDefaultSlope;

  // kUci
  std::string path;
  std::vector<std::pair<std::string, std::string>> options;
  int multipv = 0;  // 0 = all legal moves
  int timeout_ms = 10'000;

  // kTree
  double c_puct = 1.25;
  std::string weak_model;

  // kExpectorStt / kExpectorHb
  ExpectorMode mode = ExpectorMode::kSttFull;
  int width = 0;  // top-k (STT) or top-j per piece (HB); 0 = default
  uint64_t eval_nodes = 0;
  std::string partner_junior;
  std::string opponent_senior;
  std::string opponent_junior;
  std::string own_hand;
  std::string base_strong;

  uint64_t effective_nodes() const;
  double effective_temperature() const;
  int effective_width() const;
  uint64_t effective_eval_nodes() const;

  // Throws ConfigError when parameters are out of range for the kind.
  void validate() const;
};

// Brain output in Hand-and-Brain. `intended` is the brain's own move when it
// has one; the piece is what the hand is told.
struct BrainChoice {
  PieceType piece = PieceType::kPawn;
  std::optional<Move> intended;
};

// Uniform agent interface. Implementations may hold per-instance state (an
// external process, a search table) and are owned by one game worker at a time.
class Agent {
 public:
  explicit Agent(AgentSpec spec) : spec_(std::move(spec)) {}
  virtual ~Agent() = default;
  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  const AgentSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }

  // Full distribution over the legal moves. Throws AgentError on terminal positions.
  virtual MoveDistribution policy(const Position& p) = 0;

  // Win probability for the side to move. Checkmate = 0, stalemate = 50.
  virtual WinProb value(const Position& p) = 0;

  // Both at once; agents whose policy and value share work override this.
  virtual std::pair<MoveDistribution, WinProb> policy_and_value(const Position& p) {
    return {policy(p), value(p)};
  }

  // Default: argmax or a draw from policy(), per mode.
  virtual Move select_move(const Position& p, Rng& rng, SamplingMode mode);

  // Default: the piece of select_move(argmax).
  virtual BrainChoice choose_piece(const Position& p, Rng& rng);

 protected:
  static void require_nonterminal(const Position& p);

 private:
  AgentSpec spec_;
};

// Exact value for positions decided by the board alone (mate, stalemate,
// insufficient material, fifty-move rule), side-to-move perspective.
std::optional<WinProb> terminal_winprob(const Position& p);

SamplingMode resolve_sampling(const AgentSpec& spec, SamplingMode role_default);

// Fraction of positions on which the argmax moves of a and b coincide.
double agreement_rate(Agent& a, Agent& b, std::span<const Position> corpus);

}  // namespace skillcompat::agents
