#include "skillcompat/agents/evaluator.hpp"

#include <fstream>
#include <sstream>

#include "skillcompat/agents/builtin.hpp"
#include "skillcompat/util/error.hpp"

namespace skillcompat::agents {

WinProb from_white(double white_wp, Color perspective) {
  return perspective == Color::kWhite ? WinProb{white_wp} : WinProb{100.0 - white_wp};
}

double BuiltinCentipawnEngine::centipawns(const Position& p) {
  return thread_searcher().analyze(p, nodes_).best_score();
}

std::optional<double> EvalCache::find(uint64_t key) const {
  std::lock_guard lock(mutex_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void EvalCache::insert(uint64_t key, double white_wp) {
  std::lock_guard lock(mutex_);
  if (map_.size() >= capacity_) map_.clear();
  map_.emplace(key, white_wp);
}

size_t EvalCache::size() const {
  std::lock_guard lock(mutex_);
  return map_.size();
}

void EvaluatorSpec::validate() const {
  if (!(slope > 0.0)) throw ConfigError("evaluator slope must be > 0");
  if (nodes < 1) throw ConfigError("evaluator nodes must be >= 1");
  if (!table_path.empty()) return;
  if (engine.kind != AgentKind::kBuiltinStrong && engine.kind != AgentKind::kUci) {
    throw ConfigError("evaluator engine must be builtin-strong or uci");
  }
}

std::string EvaluatorSpec::describe() const {
  std::ostringstream out;
  if (!table_path.empty()) {
    out << "table:" << table_path;
  } else {
    out << to_string(engine.kind);
    if (engine.kind == AgentKind::kUci) out << ":" << engine.path;
    out << " nodes=" << nodes << " slope=" << slope;
  }
  return out.str();
}

EngineEvaluator::EngineEvaluator(double slope, std::unique_ptr<CentipawnEngine> engine,
                                 std::shared_ptr<EvalCache> cache)
    : slope_(slope), engine_(std::move(engine)), cache_(std::move(cache)) {
  if (!(slope_ > 0.0)) throw ConfigError("evaluator slope must be > 0");
  if (!cache_) cache_ = std::make_shared<EvalCache>();
}

WinProb EngineEvaluator::evaluate(const Position& p, Color perspective) {
  if (auto t = terminal_winprob(p)) {
    return p.side_to_move() == perspective ? *t : t->flipped();
  }
  const uint64_t key = p.key();
  double white;
  if (auto hit = cache_->find(key)) {
    white = *hit;
  } else {
    double cp = engine_->centipawns(p);
    if (p.side_to_move() == Color::kBlack) cp = -cp;
    white = logistic_winprob(cp, slope_);
    cache_->insert(key, white);
  }
  return from_white(white, perspective);
}

TableEvaluator TableEvaluator::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open evaluator table " + path);
  TableEvaluator out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(path + ":" + std::to_string(line_no) + ": expected <fen>\\t<wp>");
    Position p = Position::from_fen(line.substr(0, tab));
    double wp = std::stod(line.substr(tab + 1));
    if (wp < 0.0 || wp > 100.0) throw ParseError(path + ":" + std::to_string(line_no) + ": wp out of range");
    out.set(p, wp);
  }
  return out;
}

WinProb TableEvaluator::evaluate(const Position& p, Color perspective) {
  if (auto t = terminal_winprob(p)) {
    return p.side_to_move() == perspective ? *t : t->flipped();
  }
  auto it = table_.find(p.key());
  if (it == table_.end()) throw AgentError("evaluator table has no entry for " + p.fen());
  return from_white(it->second, perspective);
}

}  // namespace skillcompat::agents
