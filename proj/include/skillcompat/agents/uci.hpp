#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/agents/evaluator.hpp"

namespace skillcompat::agents {

// Child process speaking line-oriented text over stdin/stdout pipes.
class EngineProcess {
 public:
  // Throws AgentError if the executable cannot be spawned.
  explicit EngineProcess(const std::string& path);
  ~EngineProcess();
  EngineProcess(const EngineProcess&) = delete;
  EngineProcess& operator=(const EngineProcess&) = delete;

  void write_line(const std::string& line);
  // nullopt on timeout; throws AgentError on EOF (engine died).
  std::optional<std::string> read_line(int timeout_ms);
  bool alive();

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

struct UciScore {
  double centipawns = 0.0;  // side-to-move perspective; mates mapped near +-kMateScore
  bool mate = false;
};

struct UciLine {
  int multipv = 1;
  int depth = 0;
  UciScore score;
  std::string first_move;
};

struct UciSearchResult {
  std::string bestmove;
  std::vector<UciLine> lines;  // last report per multipv index, ordered by index
};

// Parses one "info ..." line; nullopt if it carries no score or pv.
std::optional<UciLine> parse_info_line(const std::string& line);

// UCI session: handshake on construction (uci/uciok, isready/readyok).
class UciEngine {
 public:
  UciEngine(const std::string& path, const std::vector<std::pair<std::string, std::string>>& options,
            int timeout_ms);
  ~UciEngine();

  void new_game();
  UciSearchResult go_nodes(const Position& p, uint64_t nodes, int multipv);

  // Every line exchanged, prefixed "> " (sent) or "< " (received).
  const std::vector<std::string>& transcript() const { return transcript_; }
  const std::string& engine_name() const { return engine_name_; }

 private:
  void send(const std::string& line);
  std::string expect(const std::string& token);

  EngineProcess process_;
  int timeout_ms_;
  int current_multipv_ = 1;
  std::string engine_name_;
  std::vector<std::string> transcript_;
};

// Agent backed by an external UCI engine. Policy is approximated by a
// softmax over multipv scores; moves the engine does not report get the
// worst reported score minus 200 cp.
class UciAgent final : public Agent {
 public:
  explicit UciAgent(AgentSpec spec);

  MoveDistribution policy(const Position& p) override;
  WinProb value(const Position& p) override;
  Move select_move(const Position& p, Rng& rng, SamplingMode mode) override;

  UciEngine& engine() { return engine_; }

 private:
  UciEngine engine_;
};

class UciCentipawnEngine final : public CentipawnEngine {
 public:
  UciCentipawnEngine(const AgentSpec& spec, uint64_t nodes);
  double centipawns(const Position& p) override;

 private:
  UciEngine engine_;
  uint64_t nodes_;
};

}  // namespace skillcompat::agents
