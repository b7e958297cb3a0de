#include "skillcompat/analysis/loss.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "skillcompat/util/error.hpp"

namespace skillcompat::analysis {

using nlohmann::json;
using frameworks::Actor;
using frameworks::TeamRole;

namespace {

constexpr std::array<std::pair<ActorRole, std::string_view>, 7> kRoles = {{
    {ActorRole::kFocalSenior, "focal-senior"},
    {ActorRole::kFocalJunior, "focal-junior"},
    {ActorRole::kAlterSenior, "alter-senior"},
    {ActorRole::kAlterJunior, "alter-junior"},
    {ActorRole::kFocalTeam, "focal-team"},
    {ActorRole::kAlterTeam, "alter-team"},
    {ActorRole::kOpening, "opening"},
}};

ActorRole role_of(const frameworks::PlyRecord& p) {
  const bool focal = p.team == TeamRole::kFocal;
  switch (p.actor) {
    case Actor::kSenior: return focal ? ActorRole::kFocalSenior : ActorRole::kAlterSenior;
    case Actor::kJunior: return focal ? ActorRole::kFocalJunior : ActorRole::kAlterJunior;
    case Actor::kTeam: return focal ? ActorRole::kFocalTeam : ActorRole::kAlterTeam;
    case Actor::kOpening: return ActorRole::kOpening;
  }
  return ActorRole::kOpening;
}

template <typename T>
T field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string_view to_string(ActorRole r) {
  for (auto [role, name] : kRoles) {
    if (role == r) return name;
  }
  return "?";
}

ActorRole actor_role_from_string(std::string_view s) {
  for (auto [role, name] : kRoles) {
    if (name == s) return role;
  }
  throw ParseError("unknown actor role '" + std::string(s) + "'");
}

double clamp_loss(double raw_delta) { return std::clamp(raw_delta, 0.0, 100.0); }

int decile_bucket(double wp) { return std::clamp(static_cast<int>(wp / 10.0), 0, kDefaultBuckets - 1); }

std::vector<MoveLossRecord> annotate_losses(const GameRecord& g, agents::WinProbEvaluator& e) {
  if (g.aborted()) throw ConfigError("cannot annotate aborted game " + std::to_string(g.index));
  const std::vector<chess::Position> positions = g.replay();
  std::vector<MoveLossRecord> out;
  out.reserve(g.plies.size());
  std::string labels;
  for (size_t i = 0; i < g.plies.size(); ++i) {
    const auto& ply = g.plies[i];
    const chess::Position& before = positions[i];
    const chess::Color mover = before.side_to_move();

    MoveLossRecord r;
    r.game = g.index;
    r.ply = static_cast<uint32_t>(i);
    r.framework = g.framework;
    r.role = role_of(ply);
    r.wp_before = e.evaluate(before, mover).value;
    r.wp_after = e.evaluate(positions[i + 1], mover).value;
    r.raw_delta = r.wp_before - r.wp_after;
    r.loss = clamp_loss(r.raw_delta);
    r.focal_wp_before = mover == g.focal_color ? r.wp_before : 100.0 - r.wp_before;
    r.bucket = decile_bucket(r.focal_wp_before);
    if (g.framework == Framework::kStt) {
      r.preceding = labels.substr(labels.size() > 2 ? labels.size() - 2 : 0);
      labels.push_back(ply.actor == Actor::kSenior ? '1' : '0');
    }
    if (ply.hb) {
      r.interaction = ply.hb->interaction;
      if (ply.hb->hand_sample == ply.move) {
        r.hypothetical_loss = r.loss;
      } else {
        const double hyp_after = e.evaluate(before.apply(ply.hb->hand_sample), mover).value;
        r.hypothetical_loss = clamp_loss(r.wp_before - hyp_after);
      }
    }
    out.push_back(std::move(r));
  }
  if (g.framework == Framework::kHb) {
    for (size_t i = 0; i + 1 < out.size(); ++i) out[i].next_opponent_loss = out[i + 1].loss;
  }
  return out;
}

json to_json(const MoveLossRecord& r) {
  json j = {
      {"game", r.game},
      {"ply", r.ply},
      {"framework", frameworks::to_string(r.framework)},
      {"role", to_string(r.role)},
      {"wp_before", r.wp_before},
      {"wp_after", r.wp_after},
      {"loss", r.loss},
      {"raw_delta", r.raw_delta},
      {"preceding", r.preceding},
      {"focal_wp_before", r.focal_wp_before},
      {"bucket", r.bucket},
  };
  if (r.interaction) j["interaction"] = frameworks::to_string(*r.interaction);
  if (r.hypothetical_loss) j["hypothetical_loss"] = *r.hypothetical_loss;
  if (r.next_opponent_loss) j["next_opponent_loss"] = *r.next_opponent_loss;
  return j;
}

MoveLossRecord loss_from_json(const json& j) {
  MoveLossRecord r;
  r.game = field<uint64_t>(j, "game");
  r.ply = field<uint32_t>(j, "ply");
  r.framework = frameworks::framework_from_string(field<std::string>(j, "framework"));
  r.role = actor_role_from_string(field<std::string>(j, "role"));
  r.wp_before = field<double>(j, "wp_before");
  r.wp_after = field<double>(j, "wp_after");
  r.loss = field<double>(j, "loss");
  r.raw_delta = field<double>(j, "raw_delta");
  r.preceding = field<std::string>(j, "preceding");
  r.focal_wp_before = field<double>(j, "focal_wp_before");
  r.bucket = field<int>(j, "bucket");
  if (j.contains("interaction")) {
    r.interaction = frameworks::interaction_type_from_string(field<std::string>(j, "interaction"));
  }
  if (j.contains("hypothetical_loss")) r.hypothetical_loss = field<double>(j, "hypothetical_loss");
  if (j.contains("next_opponent_loss")) r.next_opponent_loss = field<double>(j, "next_opponent_loss");
  if (r.loss < 0.0 || r.loss > 100.0) throw ParseError("loss out of range");
  return r;
}

void write_losses(const std::string& path, const LossFileHeader& header, const std::vector<MoveLossRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write losses to '" + path + "'");
  json h = {{"schema", LossFileHeader::kSchemaVersion},
            {"kind", "loss-header"},
            {"evaluator", header.evaluator},
            {"config_hash", header.config_hash},
            {"games", header.games},
            {"aborted", header.aborted}};
  out << h.dump() << '\n';
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  if (!out) throw ConfigError("failed writing losses to '" + path + "'");
}

std::vector<MoveLossRecord> read_losses(const std::string& path, LossFileHeader* header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open losses '" + path + "'");
  std::vector<MoveLossRecord> out;
  std::string line;
  size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      if (!seen_header) {
        if (field<std::string>(j, "kind") != "loss-header") throw ParseError("missing loss-file header");
        if (field<int>(j, "schema") != LossFileHeader::kSchemaVersion) throw ParseError("unsupported loss schema");
        if (header) {
          header->evaluator = field<std::string>(j, "evaluator");
          header->config_hash = field<std::string>(j, "config_hash");
          header->games = field<uint64_t>(j, "games");
          header->aborted = field<uint64_t>(j, "aborted");
        }
        seen_header = true;
        continue;
      }
      out.push_back(loss_from_json(j));
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!seen_header) throw ParseError(path + ": empty loss file");
  return out;
}

}  // namespace skillcompat::analysis
