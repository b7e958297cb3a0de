#pragma once

#include <string>
#include <vector>

#include "skillcompat/frameworks/match.hpp"

namespace skillcompat::experiment {

inline constexpr const char* kConfigSchema = "skillcompat-config/1";

struct PoolSpec {
  uint64_t seed = 1;
  uint64_t count = 0;  // 0 = games / 2
  uint64_t length = chess::kDefaultMaxPlies;
  std::string path;  // load from / save to; empty = generate in memory
};

// One match of a suite.
struct ExperimentConfig {
  std::string label;
  frameworks::MatchConfig match;
  PoolSpec pool;
  std::string output_dir;

  void validate() const;
};

// Matches sharing one agent registry, evaluator and bitstring pool.
struct ExperimentSuite {
  std::string hash;  // of the canonical config text
  std::vector<ExperimentConfig> experiments;
};

// Format (INI):
//   schema = skillcompat-config/1
//   [experiment]      framework, games, seed, workers, max_plies,
//                     opening_plies, opener, output
//   [pool]            seed, count, length, path
//   [evaluator]       engine, nodes, slope, cache, path, table
//   [team.focal] / [team.alter]   senior, junior
//   [agent.NAME]      kind and per-kind parameters
//   [match.LABEL]     optional; overrides experiment/team keys per match
// Engine paths may be overridden with SKILLCOMPAT_ENGINE_<NAME>.
ExperimentSuite parse_suite(const std::string& text);
ExperimentSuite load_suite(const std::string& path);

// Stable FNV-1a hash (hex) of the config with comments, blank lines and
// whitespace normalized and keys sorted within sections.
std::string config_hash(const std::string& text);

agents::AgentSpec parse_agent_spec(const std::string& name, const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace skillcompat::experiment
