#include "skillcompat/agents/agent.hpp"

#include <array>

#include "skillcompat/util/error.hpp"

namespace skillcompat::agents {

namespace {

constexpr std::array<std::pair<AgentKind, std::string_view>, 6> kKindNames = {{
    {AgentKind::kBuiltinStrong, "builtin-strong"},
    {AgentKind::kBuiltinWeak, "builtin-weak"},
    {AgentKind::kUci, "uci"},
    {AgentKind::kTree, "tree"},
    {AgentKind::kExpectorStt, "expector-stt"},
    {AgentKind::kExpectorHb, "expector-hb"},
}};

constexpr std::array<std::pair<ExpectorMode, std::string_view>, 4> kModeNames = {{
    {ExpectorMode::kSttFull, "stt-full"},
    {ExpectorMode::kSttTricking, "stt-tricking"},
    {ExpectorMode::kSttHelping, "stt-helping"},
    {ExpectorMode::kHb, "hb"},
}};

}  // namespace

std::string_view to_string(AgentKind k) {
  for (auto [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

AgentKind agent_kind_from_string(std::string_view s) {
  for (auto [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  throw ConfigError("unknown agent kind '" + std::string(s) + "'");
}

std::string_view to_string(SamplingMode m) { return m == SamplingMode::kArgmax ? "argmax" : "sample"; }

SamplingMode sampling_mode_from_string(std::string_view s) {
  if (s == "argmax") return SamplingMode::kArgmax;
  if (s == "sample") return SamplingMode::kSample;
  throw ConfigError("unknown sampling mode '" + std::string(s) + "'");
}

std::string_view to_string(ExpectorMode m) {
  for (auto [mode, name] : kModeNames) {
    if (mode == m) return name;
  }
  return "?";
}

ExpectorMode expector_mode_from_string(std::string_view s) {
  for (auto [mode, name] : kModeNames) {
    if (name == s) return mode;
  }
  throw ConfigError("unknown expector mode '" + std::string(s) + "'");
}

uint64_t AgentSpec::effective_nodes() const {
  if (nodes > 0) return nodes;
  switch (kind) {
    case AgentKind::kTree: return 1500;
    case AgentKind::kUci: return 1500;
    default: return kDefaultStrongNodes;
  }
}

double AgentSpec::effective_temperature() const {
  if (temperature >= 0.0) return temperature;
  return kind == AgentKind::kBuiltinStrong ? kDefaultStrongTemperature : kDefaultWeakTemperature;
}

int AgentSpec::effective_width() const {
  if (width > 0) return width;
  return kind == AgentKind::kExpectorHb ? 3 : 5;
}

uint64_t AgentSpec::effective_eval_nodes() const {
  if (eval_nodes > 0) return eval_nodes;
  return kind == AgentKind::kExpectorHb ? 50 : 300;
}

void AgentSpec::validate() const {
  auto fail = [this](const std::string& what) {
    throw ConfigError("agent '" + name + "' (" + std::string(to_string(kind)) + "): " + what);
  };
  if (name.empty()) throw ConfigError("agent without a name");
  if (!(slope > 0.0)) fail("slope must be > 0");
  switch (kind) {
    case AgentKind::kBuiltinStrong:
    case AgentKind::kBuiltinWeak:
      break;
    case AgentKind::kUci:
      if (path.empty()) fail("uci agents need a path");
      if (multipv < 0) fail("multipv must be >= 0");
      if (timeout_ms <= 0) fail("timeout must be positive");
      break;
    case AgentKind::kTree:
      if (weak_model.empty()) fail("tree agents need a weak_model");
      if (!(c_puct > 0.0)) fail("c_puct must be > 0");
      break;
    case AgentKind::kExpectorStt:
      if (mode == ExpectorMode::kHb) fail("expector-stt cannot use mode hb");
      break;
    case AgentKind::kExpectorHb:
      if (mode != ExpectorMode::kHb) fail("expector-hb requires mode hb");
      break;
  }
}

Move Agent::select_move(const Position& p, Rng& rng, SamplingMode mode) {
  require_nonterminal(p);
  MoveDistribution d = policy(p);
  return mode == SamplingMode::kArgmax ? d.argmax() : d.sample(rng);
}

BrainChoice Agent::choose_piece(const Position& p, Rng& rng) {
  Move m = select_move(p, rng, SamplingMode::kArgmax);
  return BrainChoice{p.at(m.from).type(), m};
}

void Agent::require_nonterminal(const Position& p) {
  if (p.legal_moves().empty()) throw AgentError("asked to move in a terminal position: " + p.fen());
}

std::optional<WinProb> terminal_winprob(const Position& p) {
  if (p.legal_moves().empty()) return WinProb{p.in_check() ? 0.0 : 50.0};
  if (p.insufficient_material() || p.halfmove_clock() >= 100) return WinProb{50.0};
  return std::nullopt;
}

SamplingMode resolve_sampling(const AgentSpec& spec, SamplingMode role_default) {
  return spec.sampling.value_or(role_default);
}

double agreement_rate(Agent& a, Agent& b, std::span<const Position> corpus) {
  if (corpus.empty()) throw EmptySetError("agreement rate over an empty corpus");
  Rng unused(0);
  size_t same = 0;
  for (const Position& p : corpus) {
    if (a.select_move(p, unused, SamplingMode::kArgmax) == b.select_move(p, unused, SamplingMode::kArgmax)) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(corpus.size());
}

}  // namespace skillcompat::agents
