#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "skillcompat/frameworks/game.hpp"

namespace skillcompat::frameworks {

nlohmann::json to_json(const GameRecord& rec);
// Throws ParseError on a schema mismatch or missing field.
GameRecord game_from_json(const nlohmann::json& j);

// One record per line, keys sorted, no trailing spaces.
std::string to_jsonl_line(const GameRecord& rec);
void write_records(std::ostream& out, const std::vector<GameRecord>& records);
void write_records(const std::string& path, const std::vector<GameRecord>& records);
// Errors name the offending line.
std::vector<GameRecord> read_records(const std::string& path);

// PGN with SAN movetext and the Framework, Bitstring, ActorLabels,
// InteractionTypes and Seeds tags.
std::string to_pgn(const GameRecord& rec);

}  // namespace skillcompat::frameworks
