#pragma once

#include <map>
#include <memory>
#include <string>

#include "skillcompat/agents/agent.hpp"
#include "skillcompat/agents/evaluator.hpp"

namespace skillcompat::focal {

// Named agent specs. Specs refer to each other by name (tree weak models,
// expector opponent/partner models).
class AgentRegistry {
 public:
  void add(agents::AgentSpec spec);
  bool contains(const std::string& name) const { return specs_.count(name) > 0; }
  const agents::AgentSpec& get(const std::string& name) const;
  const std::map<std::string, agents::AgentSpec>& specs() const { return specs_; }

  // Every spec validates and every reference resolves without cycles.
  void validate() const;

 private:
  std::map<std::string, agents::AgentSpec> specs_;
};

// Roles an expector fills in from its game context when its spec leaves
// the corresponding model unnamed.
struct ExpectorWiring {
  std::string partner_junior;
  std::string opponent_senior;
  std::string opponent_junior;
  std::string own_hand;
};

std::shared_ptr<agents::WinProbEvaluator> make_evaluator(const agents::EvaluatorSpec& spec,
                                                         std::shared_ptr<agents::EvalCache> cache = nullptr);

// Fresh instance of the named agent and of every model it depends on.
std::shared_ptr<agents::Agent> build_agent(const AgentRegistry& registry, const std::string& name,
                                           const agents::EvaluatorSpec& evaluator,
                                           const ExpectorWiring& wiring = {});

}  // namespace skillcompat::focal
