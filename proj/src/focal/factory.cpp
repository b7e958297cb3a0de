#include "skillcompat/focal/factory.hpp"

#include <functional>
#include <set>

#include "skillcompat/agents/builtin.hpp"
#include "skillcompat/agents/uci.hpp"
#include "skillcompat/focal/expector.hpp"
#include "skillcompat/focal/tree.hpp"
#include "skillcompat/util/error.hpp"

namespace skillcompat::focal {

using agents::AgentKind;

namespace {

std::vector<std::string> references(const AgentSpec& s) {
  std::vector<std::string> out;
  for (const std::string* r : {&s.weak_model, &s.partner_junior, &s.opponent_senior, &s.opponent_junior,
                               &s.own_hand, &s.base_strong}) {
    if (!r->empty()) out.push_back(*r);
  }
  return out;
}

const std::string& pick(const std::string& own, const std::string& fallback) { return own.empty() ? fallback : own; }

}  // namespace

void AgentRegistry::add(AgentSpec spec) {
  if (spec.name.empty()) throw ConfigError("agent without a name");
  if (contains(spec.name)) throw ConfigError("duplicate agent '" + spec.name + "'");
  std::string name = spec.name;
  specs_.emplace(std::move(name), std::move(spec));
}

const AgentSpec& AgentRegistry::get(const std::string& name) const {
  auto it = specs_.find(name);
  if (it == specs_.end()) throw ConfigError("unknown agent '" + name + "'");
  return it->second;
}

void AgentRegistry::validate() const {
  for (const auto& [name, spec] : specs_) {
    spec.validate();
    for (const auto& ref : references(spec)) get(ref);
  }
  std::set<std::string> done;
  std::set<std::string> active;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    if (done.count(n)) return;
    if (!active.insert(n).second) throw ConfigError("agent reference cycle through '" + n + "'");
    for (const auto& ref : references(get(n))) visit(ref);
    active.erase(n);
    done.insert(n);
  };
  for (const auto& [name, spec] : specs_) visit(name);
}

std::shared_ptr<WinProbEvaluator> make_evaluator(const agents::EvaluatorSpec& spec,
                                                 std::shared_ptr<agents::EvalCache> cache) {
  spec.validate();
  if (!spec.table_path.empty()) {
    return std::make_shared<agents::TableEvaluator>(agents::TableEvaluator::load(spec.table_path));
  }
  std::unique_ptr<agents::CentipawnEngine> engine;
  if (spec.engine.kind == AgentKind::kUci) {
    engine = std::make_unique<agents::UciCentipawnEngine>(spec.engine, spec.nodes);
  } else {
    engine = std::make_unique<agents::BuiltinCentipawnEngine>(spec.nodes);
  }
  if (!cache) cache = std::make_shared<agents::EvalCache>(spec.cache_capacity);
  return std::make_shared<agents::EngineEvaluator>(spec.slope, std::move(engine), std::move(cache));
}

std::shared_ptr<Agent> build_agent(const AgentRegistry& registry, const std::string& name,
                                   const agents::EvaluatorSpec& evaluator, const ExpectorWiring& wiring) {
  const AgentSpec& spec = registry.get(name);
  spec.validate();
  auto dependency = [&](const std::string& ref) -> std::shared_ptr<Agent> {
    if (ref.empty()) return nullptr;
    return build_agent(registry, ref, evaluator);
  };

  switch (spec.kind) {
    case AgentKind::kBuiltinStrong:
      return std::make_shared<agents::BuiltinStrongAgent>(spec);
    case AgentKind::kBuiltinWeak:
      return std::make_shared<agents::BuiltinWeakAgent>(spec);
    case AgentKind::kUci:
      return std::make_shared<agents::UciAgent>(spec);
    case AgentKind::kTree:
      return std::make_shared<TreeAgent>(spec, dependency(spec.weak_model));
    case AgentKind::kExpectorStt:
    case AgentKind::kExpectorHb: {
      ExpectorConfig cfg;
      cfg.mode = spec.mode;
      cfg.width = spec.effective_width();
      const std::string& opp_senior = pick(spec.opponent_senior, wiring.opponent_senior);
      cfg.models.opponent_senior = dependency(opp_senior);
      cfg.models.opponent_junior = dependency(pick(spec.opponent_junior, wiring.opponent_junior));
      cfg.models.partner_junior = dependency(pick(spec.partner_junior, wiring.partner_junior));
      cfg.models.own_hand = dependency(pick(spec.own_hand, wiring.own_hand));
      cfg.models.base_strong = dependency(pick(spec.base_strong, opp_senior));
      agents::EvaluatorSpec own_eval = evaluator;
      own_eval.nodes = spec.effective_eval_nodes();
      cfg.evaluator = make_evaluator(own_eval);
      if (spec.kind == AgentKind::kExpectorStt) return std::make_shared<ExpectorSttAgent>(spec, std::move(cfg));
      return std::make_shared<ExpectorHbAgent>(spec, std::move(cfg));
    }
  }
  throw ConfigError("unhandled agent kind");
}

}  // namespace skillcompat::focal
