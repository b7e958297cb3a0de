#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "skillcompat/agents/agent.hpp"

namespace skillcompat::agents {

using chess::Color;

// Win probability of a board from a given side, as judged by a strong engine.
class WinProbEvaluator {
 public:
  virtual ~WinProbEvaluator() = default;
  virtual WinProb evaluate(const Position& p, Color perspective) = 0;
};

// Engine score source for the evaluator: centipawns for the side to move.
class CentipawnEngine {
 public:
  virtual ~CentipawnEngine() = default;
  virtual double centipawns(const Position& p) = 0;
};

class BuiltinCentipawnEngine final : public CentipawnEngine {
 public:
  explicit BuiltinCentipawnEngine(uint64_t nodes) : nodes_(nodes) {}
  double centipawns(const Position& p) override;

 private:
  uint64_t nodes_;
};

// Thread-safe cache of white-perspective win probabilities keyed by
// position hash. Cleared wholesale when full; values are deterministic so
// eviction never changes results.
class EvalCache {
 public:
  explicit EvalCache(size_t capacity = 1 << 20) : capacity_(capacity) {}

  std::optional<double> find(uint64_t key) const;
  void insert(uint64_t key, double white_wp);
  size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<uint64_t, double> map_;
  size_t capacity_;
};

inline AgentSpec default_evaluator_engine() {
  AgentSpec s;
  s.name = "evaluator";
  s.kind = AgentKind::kBuiltinStrong;
  return s;
}

struct EvaluatorSpec {
  // builtin-strong or uci; the engine's own node budget is `nodes`.
  AgentSpec engine = default_evaluator_engine();
  uint64_t nodes = 1500;
  double slope = kDefaultSlope;
  size_t cache_capacity = 1 << 20;
  // Optional FEN -> white win-probability table (kind "table"); takes
  // precedence over the engine when set.
  std::string table_path;

  void validate() const;
  std::string describe() const;
};

// wp = 100 / (1 + exp(-slope * cp)); terminal boards short-circuit to
// 100/0/50 from the requested perspective.
class EngineEvaluator final : public WinProbEvaluator {
 public:
  EngineEvaluator(double slope, std::unique_ptr<CentipawnEngine> engine, std::shared_ptr<EvalCache> cache);

  WinProb evaluate(const Position& p, Color perspective) override;

 private:
  double slope_;
  std::unique_ptr<CentipawnEngine> engine_;
  std::shared_ptr<EvalCache> cache_;
};

// Fixed table of white-perspective win probabilities, keyed by position hash.
// Unknown non-terminal positions raise AgentError.
class TableEvaluator final : public WinProbEvaluator {
 public:
  TableEvaluator() = default;
  explicit TableEvaluator(std::unordered_map<uint64_t, double> white_wp) : table_(std::move(white_wp)) {}

  // File lines: "<fen>\t<white wp>"; '#' starts a comment.
  static TableEvaluator load(const std::string& path);

  void set(const Position& p, double white_wp) { table_[p.key()] = white_wp; }
  WinProb evaluate(const Position& p, Color perspective) override;

 private:
  std::unordered_map<uint64_t, double> table_;
};

WinProb from_white(double white_wp, Color perspective);

}  // namespace skillcompat::agents
