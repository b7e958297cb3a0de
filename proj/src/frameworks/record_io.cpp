#include "skillcompat/frameworks/record_io.hpp"

#include <fstream>
#include <sstream>

#include "skillcompat/util/error.hpp"

namespace skillcompat::frameworks {

using nlohmann::json;

namespace {

std::string actor_code(const PlyRecord& p) {
  switch (p.actor) {
    case Actor::kSenior: return "1";
    case Actor::kJunior: return "0";
    case Actor::kTeam: return "T";
    case Actor::kOpening: return "O";
  }
  return "?";
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

std::string pgn_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

json to_json(const GameRecord& rec) {
  json plies = json::array();
  for (const auto& p : rec.plies) {
    json jp = {{"move", p.move.uci()}, {"actor", to_string(p.actor)}, {"team", to_string(p.team)}};
    if (p.hb) {
      jp["piece"] = to_string(p.hb->piece);
      jp["intended"] = p.hb->intended ? json(p.hb->intended->uci()) : json(nullptr);
      jp["hand_sample"] = p.hb->hand_sample.uci();
      jp["interaction"] = to_string(p.hb->interaction);
    }
    plies.push_back(std::move(jp));
  }
  json j = {
      {"schema", GameRecord::kSchemaVersion},
      {"index", rec.index},
      {"framework", to_string(rec.framework)},
      {"focal_color", rec.focal_color == Color::kWhite ? "white" : "black"},
      {"focal", {{"senior", rec.focal_senior}, {"junior", rec.focal_junior}}},
      {"alter", {{"senior", rec.alter_senior}, {"junior", rec.alter_junior}}},
      {"start_fen", rec.start_fen},
      {"seed", rec.seed},
      {"config_hash", rec.config_hash},
      {"plies", std::move(plies)},
      {"result", to_string(rec.result)},
      {"termination", rec.termination},
  };
  if (rec.framework == Framework::kStt) {
    j["bitstring_id"] = rec.bitstring_id;
    j["bitstring"] = rec.bitstring;
  }
  if (!rec.abort_reason.empty()) j["abort_reason"] = rec.abort_reason;
  return j;
}

GameRecord game_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("record is not a JSON object");
  const int schema = field<int>(j, "schema");
  if (schema != GameRecord::kSchemaVersion) {
    throw ParseError("unsupported record schema " + std::to_string(schema));
  }
  GameRecord rec;
  rec.index = field<uint64_t>(j, "index");
  rec.framework = framework_from_string(field<std::string>(j, "framework"));
  const std::string color = field<std::string>(j, "focal_color");
  if (color != "white" && color != "black") throw ParseError("bad focal_color '" + color + "'");
  rec.focal_color = color == "white" ? Color::kWhite : Color::kBlack;
  const json focal = field<json>(j, "focal");
  const json alter = field<json>(j, "alter");
  rec.focal_senior = field<std::string>(focal, "senior");
  rec.focal_junior = field<std::string>(focal, "junior");
  rec.alter_senior = field<std::string>(alter, "senior");
  rec.alter_junior = field<std::string>(alter, "junior");
  rec.start_fen = field<std::string>(j, "start_fen");
  rec.seed = field<uint64_t>(j, "seed");
  rec.config_hash = field<std::string>(j, "config_hash");
  rec.result = game_result_from_string(field<std::string>(j, "result"));
  rec.termination = field<std::string>(j, "termination");
  if (j.contains("abort_reason")) rec.abort_reason = field<std::string>(j, "abort_reason");
  if (rec.framework == Framework::kStt) {
    rec.bitstring_id = field<std::string>(j, "bitstring_id");
    rec.bitstring = field<std::string>(j, "bitstring");
  }

  Position pos = Position::from_fen(rec.start_fen);
  for (const auto& jp : field<json>(j, "plies")) {
    PlyRecord p;
    p.move = pos.parse_uci(field<std::string>(jp, "move"));
    p.actor = actor_from_string(field<std::string>(jp, "actor"));
    p.team = team_role_from_string(field<std::string>(jp, "team"));
    if (jp.contains("interaction")) {
      HbPly hb;
      const std::string piece = field<std::string>(jp, "piece");
      auto type = chess::piece_type_from_string(piece);
      if (!type) throw ParseError("unknown piece type '" + piece + "'");
      hb.piece = *type;
      if (!jp.at("intended").is_null()) hb.intended = pos.parse_uci(field<std::string>(jp, "intended"));
      hb.hand_sample = pos.parse_uci(field<std::string>(jp, "hand_sample"));
      hb.interaction = interaction_type_from_string(field<std::string>(jp, "interaction"));
      p.hb = hb;
    }
    pos = pos.apply(p.move);
    rec.plies.push_back(std::move(p));
  }
  return rec;
}

std::string to_jsonl_line(const GameRecord& rec) { return to_json(rec).dump(); }

void write_records(std::ostream& out, const std::vector<GameRecord>& records) {
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
}

void write_records(const std::string& path, const std::vector<GameRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write records to '" + path + "'");
  write_records(out, records);
  if (!out) throw ConfigError("failed writing records to '" + path + "'");
}

std::vector<GameRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open records '" + path + "'");
  std::vector<GameRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(game_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string to_pgn(const GameRecord& rec) {
  const bool focal_white = rec.focal_color == Color::kWhite;
  auto team_name = [&](bool focal) {
    const std::string& s = focal ? rec.focal_senior : rec.alter_senior;
    const std::string& j = focal ? rec.focal_junior : rec.alter_junior;
    return j.empty() ? s : s + "+" + j;
  };
  std::string result = "1/2-1/2";
  if (rec.result == GameResult::kWhite) result = "1-0";
  if (rec.result == GameResult::kBlack) result = "0-1";
  if (rec.result == GameResult::kAborted) result = "*";

  std::string actors;
  std::string interactions;
  for (const auto& p : rec.plies) {
    actors += actor_code(p);
    if (p.hb) {
      if (!interactions.empty()) interactions += ",";
      interactions += std::string(to_string(p.hb->interaction));
    }
  }

  std::ostringstream out;
  auto tag = [&](const char* k, const std::string& v) { out << '[' << k << " \"" << pgn_escape(v) << "\"]\n"; };
  tag("Event", "skillcompat " + std::string(to_string(rec.framework)) + " game " + std::to_string(rec.index));
  tag("White", team_name(focal_white));
  tag("Black", team_name(!focal_white));
  tag("Result", result);
  tag("Framework", std::string(to_string(rec.framework)));
  if (rec.start_fen != chess::kStartFen) {
    tag("SetUp", "1");
    tag("FEN", rec.start_fen);
  }
  tag("Bitstring", rec.bitstring_id.empty() ? "-" : rec.bitstring_id + ":" + rec.bitstring);
  tag("ActorLabels", actors);
  tag("InteractionTypes", interactions.empty() ? "-" : interactions);
  tag("Seeds", "game=" + std::to_string(rec.seed));
  tag("Termination", rec.termination);
  out << '\n';

  Position pos = Position::from_fen(rec.start_fen);
  std::string line;
  auto emit = [&](const std::string& token) {
    if (!line.empty() && line.size() + 1 + token.size() > 79) {
      out << line << '\n';
      line.clear();
    }
    if (!line.empty()) line += ' ';
    line += token;
  };
  bool first = true;
  for (const auto& p : rec.plies) {
    if (pos.side_to_move() == Color::kWhite) {
      emit(std::to_string(pos.fullmove_number()) + ".");
    } else if (first) {
      emit(std::to_string(pos.fullmove_number()) + "...");
    }
    first = false;
    emit(pos.san(p.move));
    pos = pos.apply(p.move);
  }
  emit(result);
  out << line << "\n\n";
  return out.str();
}

}  // namespace skillcompat::frameworks
