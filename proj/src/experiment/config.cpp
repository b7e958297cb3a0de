#include "skillcompat/experiment/config.hpp"

#include <unistd.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "skillcompat/util/error.hpp"

namespace skillcompat::experiment {

namespace pt = boost::property_tree;
using agents::AgentKind;
using agents::AgentSpec;
using KeyValues = std::vector<std::pair<std::string, std::string>>;

namespace {

std::string hex64(uint64_t v) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << v;
  return out.str();
}

uint64_t to_u64(const std::string& where, const std::string& v) {
  try {
    size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a non-negative integer, got '" + v + "'");
  }
}

int to_int(const std::string& where, const std::string& v) {
  try {
    size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + v + "'");
  }
}

double to_double(const std::string& where, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + v + "'");
  }
}

KeyValues entries(const pt::ptree& section) {
  KeyValues out;
  for (const auto& [k, v] : section) out.emplace_back(k, v.data());
  return out;
}

std::string env_override(const std::string& agent) {
  std::string var = "SKILLCOMPAT_ENGINE_";
  for (char c : agent) var.push_back(std::isalnum(static_cast<unsigned char>(c)) ? std::toupper(c) : '_');
  const char* v = std::getenv(var.c_str());
  return v ? std::string(v) : std::string();
}

KeyValues parse_options(const std::string& where, const std::string& v) {
  KeyValues out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected name=value, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

void apply_experiment_key(ExperimentConfig& cfg, const std::string& k, const std::string& v) {
  const std::string where = "[experiment] " + k;
  auto& m = cfg.match;
  if (k == "framework") {
    try {
      m.framework = frameworks::framework_from_string(v);
    } catch (const ParseError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  } else if (k == "games") {
    m.games = to_u64(where, v);
  } else if (k == "seed") {
    m.seed = to_u64(where, v);
  } else if (k == "workers") {
    m.workers = v == "auto" ? frameworks::default_workers() : to_int(where, v);
  } else if (k == "max_plies") {
    m.max_plies = to_int(where, v);
  } else if (k == "opening_plies") {
    m.opening_plies = to_int(where, v);
  } else if (k == "opener") {
    m.opener = v;
  } else if (k == "output") {
    cfg.output_dir = v;
  } else {
    throw ConfigError("unknown key '" + k + "' in [experiment]");
  }
}

void apply_team_key(ExperimentConfig& cfg, bool focal, const std::string& k, const std::string& v) {
  std::string& senior = focal ? cfg.match.focal_senior : cfg.match.alter_senior;
  std::string& junior = focal ? cfg.match.focal_junior : cfg.match.alter_junior;
  if (k == "senior" || k == "brain" || k == "agent") {
    senior = v;
  } else if (k == "junior" || k == "hand") {
    junior = v;
  } else {
    throw ConfigError(std::string("unknown key '") + k + "' in [team." + (focal ? "focal" : "alter") + "]");
  }
}

}  // namespace

AgentSpec parse_agent_spec(const std::string& name, const KeyValues& kv) {
  AgentSpec s;
  s.name = name;
  bool has_kind = false;
  for (const auto& [k, v] : kv) {
    if (k == "kind") {
      s.kind = agents::agent_kind_from_string(v);
      has_kind = true;
    }
  }
  if (!has_kind) throw ConfigError("agent '" + name + "' has no kind");
  if (s.kind == AgentKind::kExpectorHb) s.mode = agents::ExpectorMode::kHb;
  for (const auto& [k, v] : kv) {
    const std::string where = "[agent." + name + "] " + k;
    if (k == "kind") continue;
    if (k == "nodes") s.nodes = to_u64(where, v);
    else if (k == "temperature") s.temperature = to_double(where, v);
    else if (k == "sampling") s.sampling = agents::sampling_mode_from_string(v);
    else if (k == "seed") s.seed = to_u64(where, v);
    else if (k == "slope") s.slope = to_double(where, v);
    else if (k == "path") s.path = v;
    else if (k == "options") s.options = parse_options(where, v);
    else if (k == "multipv") s.multipv = to_int(where, v);
    else if (k == "timeout_ms") s.timeout_ms = to_int(where, v);
    else if (k == "c_puct") s.c_puct = to_double(where, v);
    else if (k == "weak_model") s.weak_model = v;
    else if (k == "mode") s.mode = agents::expector_mode_from_string(v);
    else if (k == "width") s.width = to_int(where, v);
    else if (k == "eval_nodes") s.eval_nodes = to_u64(where, v);
    else if (k == "partner_junior") s.partner_junior = v;
    else if (k == "opponent_senior") s.opponent_senior = v;
    else if (k == "opponent_junior") s.opponent_junior = v;
    else if (k == "own_hand") s.own_hand = v;
    else if (k == "base_strong") s.base_strong = v;
    else throw ConfigError("unknown key '" + k + "' in [agent." + name + "]");
  }
  if (s.kind == AgentKind::kUci) {
    if (auto p = env_override(name); !p.empty()) s.path = p;
  }
  s.validate();
  return s;
}

void ExperimentConfig::validate() const {
  match.validate();
  if (match.framework == frameworks::Framework::kStt) {
    const uint64_t needed = match.games / 2;
    if (pool.count != 0 && pool.count < needed) {
      throw ConfigError("pool count " + std::to_string(pool.count) + " is below games/2 = " + std::to_string(needed));
    }
    if (pool.length < static_cast<uint64_t>(match.max_plies)) throw ConfigError("pool length is below max_plies");
  }
  for (const auto& [name, spec] : match.registry.specs()) {
    if (spec.kind != AgentKind::kUci) continue;
    if (::access(spec.path.c_str(), X_OK) != 0) {
      throw ConfigError("agent '" + name + "': engine '" + spec.path + "' is not executable");
    }
  }
}

std::string config_hash(const std::string& text) {
  std::istringstream in(text);
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string section;
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      sections[section][line] = "";
    } else {
      sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
  }
  std::string canon;
  for (const auto& [name, kv] : sections) {
    canon += "[" + name + "]\n";
    for (const auto& [k, v] : kv) canon += k + "=" + v + "\n";
  }
  return hex64(fnv1a(canon));
}

ExperimentSuite parse_suite(const std::string& text) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  std::string schema;
  focal::AgentRegistry registry;
  agents::EvaluatorSpec evaluator;
  evaluator.engine.name = "evaluator";
  evaluator.engine.kind = AgentKind::kBuiltinStrong;
  PoolSpec pool;
  ExperimentConfig base;
  base.label = "main";
  base.match.workers = frameworks::default_workers();
  std::vector<std::pair<std::string, pt::ptree>> matches;

  for (const auto& [key, node] : root) {
    if (node.empty()) {
      if (key == "schema") {
        schema = node.data();
        continue;
      }
      throw ConfigError("unknown top-level key '" + key + "'");
    }
    if (key == "experiment") {
      for (const auto& [k, v] : entries(node)) apply_experiment_key(base, k, v);
    } else if (key == "pool") {
      for (const auto& [k, v] : entries(node)) {
        const std::string where = "[pool] " + k;
        if (k == "seed") pool.seed = to_u64(where, v);
        else if (k == "count") pool.count = to_u64(where, v);
        else if (k == "length") pool.length = to_u64(where, v);
        else if (k == "path") pool.path = v;
        else throw ConfigError("unknown key '" + k + "' in [pool]");
      }
    } else if (key == "evaluator") {
      for (const auto& [k, v] : entries(node)) {
        const std::string where = "[evaluator] " + k;
        if (k == "engine") {
          evaluator.engine.kind = agents::agent_kind_from_string(v);
        } else if (k == "nodes") {
          evaluator.nodes = to_u64(where, v);
        } else if (k == "slope") {
          evaluator.slope = to_double(where, v);
        } else if (k == "cache") {
          evaluator.cache_capacity = to_u64(where, v);
        } else if (k == "path") {
          evaluator.engine.path = v;
        } else if (k == "options") {
          evaluator.engine.options = parse_options(where, v);
        } else if (k == "table") {
          evaluator.table_path = v;
        } else {
          throw ConfigError("unknown key '" + k + "' in [evaluator]");
        }
      }
      if (evaluator.engine.kind == AgentKind::kUci) {
        if (auto p = env_override("evaluator"); !p.empty()) evaluator.engine.path = p;
      }
    } else if (key == "team.focal" || key == "team.alter") {
      for (const auto& [k, v] : entries(node)) apply_team_key(base, key == "team.focal", k, v);
    } else if (key.rfind("agent.", 0) == 0) {
      registry.add(parse_agent_spec(key.substr(6), entries(node)));
    } else if (key.rfind("match.", 0) == 0) {
      matches.emplace_back(key.substr(6), node);
    } else {
      throw ConfigError("unknown section [" + key + "]");
    }
  }
  if (schema != kConfigSchema) {
    throw ConfigError("config schema must be '" + std::string(kConfigSchema) + "', got '" + schema + "'");
  }

  ExperimentSuite suite;
  suite.hash = config_hash(text);
  base.match.registry = registry;
  base.match.evaluator = evaluator;
  base.match.config_hash = suite.hash;
  base.pool = pool;
  if (matches.empty()) {
    suite.experiments.push_back(base);
  } else {
    for (const auto& [label, node] : matches) {
      ExperimentConfig cfg = base;
      cfg.label = label;
      for (const auto& [k, v] : entries(node)) {
        if (k.rfind("focal.", 0) == 0) {
          apply_team_key(cfg, true, k.substr(6), v);
        } else if (k.rfind("alter.", 0) == 0) {
          apply_team_key(cfg, false, k.substr(6), v);
        } else {
          apply_experiment_key(cfg, k, v);
        }
      }
      suite.experiments.push_back(std::move(cfg));
    }
  }
  for (auto& cfg : suite.experiments) {
    if (cfg.match.workers < 1) cfg.match.workers = 1;
    cfg.validate();
  }
  return suite;
}

ExperimentSuite load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_suite(buf.str());
}

}  // namespace skillcompat::experiment
