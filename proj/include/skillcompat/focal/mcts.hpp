#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace skillcompat::focal {

template <class Action>
struct LeafEvaluation {
  std::vector<std::pair<Action, double>> priors;
  double value = 0.0;
};

// A game model MCTS can search. Values are in [-1, 1] from the perspective
// of the side to move in the given state.
template <class M>
concept SearchModel = requires(M& m, const typename M::State& s, const typename M::Action& a) {
  { m.terminal_value(s) } -> std::same_as<std::optional<double>>;
  { m.evaluate(s) } -> std::same_as<LeafEvaluation<typename M::Action>>;
  { m.apply(s, a) } -> std::same_as<typename M::State>;
  { m.action_less(a, a) } -> std::same_as<bool>;
};

template <class Action>
struct ChildStats {
  Action action;
  double prior = 0.0;
  uint32_t visits = 0;
  double q = 0.0;  // mean value from the root mover's perspective
};

template <class Action>
struct SearchSummary {
  std::vector<ChildStats<Action>> children;
  uint32_t root_visits = 0;
  double root_q = 0.0;  // root mover's perspective
  size_t best = 0;
};

// PUCT search (AlphaZero style): selection maximizes
// Q + c_puct * P * sqrt(N_parent) / (1 + N_child); unvisited children take
// the parent's Q; no root noise. The first simulation expands the root, so
// root children receive `budget - 1` visits in total.
template <SearchModel M>
class Mcts {
 public:
  using State = typename M::State;
  using Action = typename M::Action;

  Mcts(M& model, double c_puct) : model_(model), c_puct_(c_puct) {}

  SearchSummary<Action> run(const State& root_state, uint32_t budget) {
    Node root;
    root.state = std::make_unique<State>(root_state);
    for (uint32_t i = 0; i < std::max<uint32_t>(budget, 1); ++i) simulate(root);

    SearchSummary<Action> out;
    out.root_visits = root.visits;
    out.root_q = root.visits ? root.value_sum / root.visits : 0.0;
    for (const auto& child : root.children) {
      ChildStats<Action> stats{child.action, child.prior, child.visits, 0.0};
      stats.q = child.visits ? -child.value_sum / child.visits : out.root_q;
      out.children.push_back(stats);
    }
    // Most visits, then higher Q, then higher prior, then canonical action order.
    for (size_t i = 1; i < out.children.size(); ++i) {
      const auto& a = out.children[i];
      const auto& b = out.children[out.best];
      if (a.visits != b.visits ? a.visits > b.visits
          : a.q != b.q         ? a.q > b.q
          : a.prior != b.prior ? a.prior > b.prior
                               : model_.action_less(a.action, b.action)) {
        out.best = i;
      }
    }
    return out;
  }

 private:
  struct Node {
    Action action{};
    double prior = 0.0;
    uint32_t visits = 0;
    double value_sum = 0.0;  // side to move at this node
    bool expanded = false;
    std::optional<double> terminal;
    std::unique_ptr<State> state;
    std::vector<Node> children;
  };

  // Returns the value of `node` for its side to move.
  double simulate(Node& node) {
    double v;
    if (!node.expanded) {
      node.expanded = true;
      node.terminal = model_.terminal_value(*node.state);
      if (node.terminal) {
        v = *node.terminal;
      } else {
        LeafEvaluation<Action> leaf = model_.evaluate(*node.state);
        for (auto& [action, prior] : leaf.priors) {
          Node child;
          child.action = action;
          child.prior = prior;
          node.children.push_back(std::move(child));
        }
        v = leaf.value;
      }
    } else if (node.terminal) {
      v = *node.terminal;
    } else if (node.children.empty()) {
      v = node.value_sum / node.visits;
    } else {
      Node& child = select(node);
      if (!child.state) child.state = std::make_unique<State>(model_.apply(*node.state, child.action));
      v = -simulate(child);
    }
    node.visits += 1;
    node.value_sum += v;
    return v;
  }

  Node& select(Node& node) {
    const double parent_q = node.visits ? node.value_sum / node.visits : 0.0;
    const double sqrt_n = std::sqrt(static_cast<double>(node.visits));
    Node* best = nullptr;
    double best_score = 0.0;
    for (auto& child : node.children) {
      double q = child.visits ? -child.value_sum / child.visits : parent_q;
      double u = c_puct_ * child.prior * sqrt_n / (1.0 + child.visits);
      double score = q + u;
      if (!best || score > best_score) {
        best = &child;
        best_score = score;
      }
    }
    return *best;
  }

  M& model_;
  double c_puct_;
};

}  // namespace skillcompat::focal
