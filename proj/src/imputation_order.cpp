#include <algorithm>
#include <limits>
#include <optional>
#include <set>

#include "cimpute/imputation.hpp"

namespace cimpute {

namespace {

int type_rank(DataType t) {
  switch (t) {
    case DataType::CatText:
    case DataType::CatNum: return 0;
    case DataType::Numeric:
    case DataType::Float: return 1;
    case DataType::Text: return 2;
    case DataType::Date: return 3;
    case DataType::Empty: return 4;
  }
  return 5;
}

using Weights = std::vector<std::vector<std::optional<double>>>;

// Returns the edges of one cycle as (source, target) pairs, or empty when acyclic.
std::vector<std::pair<std::size_t, std::size_t>> find_cycle(const Weights& w) {
  const std::size_t n = w.size();
  enum class Mark { White, Gray, Black };
  std::vector<Mark> mark(n, Mark::White);
  std::vector<std::size_t> parent(n, n);

  for (std::size_t root = 0; root < n; ++root) {
    if (mark[root] != Mark::White) continue;
    // Stack of (node, next neighbour to scan).
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::Gray;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == n) {
        mark[node] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const std::size_t to = next++;
      if (!w[node][to]) continue;
      if (mark[to] == Mark::Gray) {
        std::vector<std::pair<std::size_t, std::size_t>> cycle{{node, to}};
        for (std::size_t v = node; v != to; v = parent[v]) cycle.emplace_back(parent[v], v);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (mark[to] == Mark::White) {
        mark[to] = Mark::Gray;
        parent[to] = node;
        stack.emplace_back(to, 0);
      }
    }
  }
  return {};
}

}  // namespace

ImputationOrder build_imputation_order(const TypeReport& types, std::span<const Association> associations) {
  const std::size_t n = types.size();
  Weights w(n, std::vector<std::optional<double>>(n));
  for (const auto& a : associations) {
    if (a.source >= n || a.target >= n || a.source == a.target) continue;
    auto& e = w[a.source][a.target];
    e = e ? std::min(*e, a.error) : a.error;
  }

  ImputationOrder order;
  for (auto cycle = find_cycle(w); !cycle.empty(); cycle = find_cycle(w)) {
    auto worst = cycle.front();
    for (const auto& edge : cycle) {
      if (*w[edge.first][edge.second] > *w[worst.first][worst.second]) worst = edge;
    }
    order.removed_edges.push_back({worst.first, worst.second, *w[worst.first][worst.second]});
    w[worst.first][worst.second].reset();
  }

  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) indegree[t] += w[s][t] ? 1 : 0;
  }
  std::set<std::pair<int, std::size_t>> ready;
  for (std::size_t c = 0; c < n; ++c) {
    if (indegree[c] == 0) ready.emplace(type_rank(types.datatype(c)), c);
  }
  while (!ready.empty()) {
    const std::size_t c = ready.begin()->second;
    ready.erase(ready.begin());
    order.columns.push_back(c);
    for (std::size_t t = 0; t < n; ++t) {
      if (w[c][t] && --indegree[t] == 0) ready.emplace(type_rank(types.datatype(t)), t);
    }
  }
  return order;
}

}  // namespace cimpute
