// Copyright 2026 The lorentz-ot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lorentz_ot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

namespace lot {

namespace {

// Masses at or below this are treated as zero inside the flow solvers.
constexpr double kMassEpsilon = 1e-14;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols,
                       std::vector<ExtendedReal> values,
                       std::vector<CausalClass> classes, CostParams params)
    : rows_(rows),
      cols_(cols),
      values_(std::move(values)),
      classes_(std::move(classes)),
      params_(params) {
  if (values_.size() != rows * cols || classes_.size() != rows * cols) {
    throw std::invalid_argument("CostMatrix: storage size mismatch");
  }
}

CostMatrix build_cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             const CostParams& params) {
  if (mu.dimension() != nu.dimension()) {
    throw std::invalid_argument("build_cost_matrix: dimension mismatch");
  }
  const std::size_t n = mu.size(), m = nu.size();
  std::vector<ExtendedReal> values(n * m);
  std::vector<CausalClass> classes(n * m);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < m; ++j) {
      classes[ui * m + j] = classify(mu.point(ui), nu.point(j), params.null_tolerance());
      values[ui * m + j] = cost(mu.point(ui), nu.point(j), params);
    }
  }
  return CostMatrix(n, m, std::move(values), std::move(classes), params);
}

std::string_view to_string(TransportStatus s) {
  return s == TransportStatus::kOptimal ? "Optimal" : "InfeasibleNoCausalCoupling";
}

std::string_view to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::kOptimalityGap: return "OptimalityGap";
    case CertificateKind::kMonotonicityCycle: return "MonotonicityCycle";
    case CertificateKind::kFeasibility: return "Feasibility";
  }
  return "?";
}

std::vector<SupportPair> support_of(const Coupling& c) {
  std::vector<SupportPair> out;
  out.reserve(c.entries.size());
  for (const auto& e : c.entries) out.push_back({e.i, e.j});
  return out;
}

double coupling_cost(const Coupling& c, const CostParams& params) {
  double total = 0.0;
  for (const auto& e : c.entries) {
    total += e.mass * cost(c.source.point(e.i), c.target.point(e.j), params);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Successive shortest paths.

namespace {

class ShortestPathSolver {
 public:
  ShortestPathSolver(const CostMatrix& c, const DiscreteMeasure& mu,
                     const DiscreteMeasure& nu)
      : c_(c),
        n_(c.rows()),
        m_(c.cols()),
        supply_(mu.weights()),
        demand_(nu.weights()),
        flow_(n_ * m_, 0.0),
        pot_(n_ + m_, 0.0) {
    for (std::size_t j = 0; j < m_; ++j) {
      double lo = kInf;
      for (std::size_t i = 0; i < n_; ++i) {
        if (c_.finite(i, j)) lo = std::min(lo, c_(i, j));
      }
      pot_[n_ + j] = lo == kInf ? 0.0 : lo;
    }
  }

  bool run() {
    while (true) {
      double remaining = 0.0;
      for (double s : supply_) remaining += s > kMassEpsilon ? s : 0.0;
      if (remaining <= kMassEpsilon) return true;
      if (!augment()) return false;
    }
  }

  const std::vector<double>& flow() const { return flow_; }
  const std::vector<double>& potentials() const { return pot_; }

 private:
  double reduced(std::size_t i, std::size_t j) const {
    return std::max(0.0, c_(i, j) + pot_[i] - pot_[n_ + j]);
  }

  // One Dijkstra pass from every source with supply left, then augmentation
  // along the path to the nearest sink with demand left.
  bool augment() {
    const std::size_t v_count = n_ + m_;
    std::vector<double> dist(v_count, kInf);
    std::vector<std::size_t> pred(v_count, kNone);
    std::vector<char> done(v_count, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (supply_[i] > kMassEpsilon) dist[i] = 0.0;
    }
    std::size_t target = kNone;
    while (true) {
      std::size_t u = kNone;
      double best = kInf;
      for (std::size_t v = 0; v < v_count; ++v) {
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      }
      if (u == kNone) break;
      done[u] = 1;
      if (u >= n_ && demand_[u - n_] > kMassEpsilon) {
        target = u;
        break;
      }
      if (u < n_) {
        for (std::size_t j = 0; j < m_; ++j) {
          if (!c_.finite(u, j) || done[n_ + j]) continue;
          const double d = dist[u] + reduced(u, j);
          if (d < dist[n_ + j]) {
            dist[n_ + j] = d;
            pred[n_ + j] = u;
          }
        }
      } else {
        const std::size_t j = u - n_;
        for (std::size_t i = 0; i < n_; ++i) {
          if (flow_[i * m_ + j] <= kMassEpsilon || done[i]) continue;
          const double rc = std::max(0.0, -c_(i, j) - pot_[i] + pot_[u]);
          const double d = dist[u] + rc;
          if (d < dist[i]) {
            dist[i] = d;
            pred[i] = u;
          }
        }
      }
    }
    if (target == kNone) return false;
    const double dstar = dist[target];
    for (std::size_t v = 0; v < v_count; ++v) pot_[v] += std::min(dist[v], dstar);

    double theta = demand_[target - n_];
    std::size_t v = target;
    while (pred[v] != kNone) {
      const std::size_t u = pred[v];
      if (u >= n_) theta = std::min(theta, flow_[v * m_ + (u - n_)]);
      v = u;
    }
    theta = std::min(theta, supply_[v]);
    supply_[v] -= theta;
    demand_[target - n_] -= theta;
    v = target;
    while (pred[v] != kNone) {
      const std::size_t u = pred[v];
      if (u < n_) {
        flow_[u * m_ + (v - n_)] += theta;
      } else {
        double& f = flow_[v * m_ + (u - n_)];
        f -= theta;
        if (f <= kMassEpsilon) f = 0.0;
      }
      v = u;
    }
    return true;
  }

  const CostMatrix& c_;
  std::size_t n_, m_;
  std::vector<double> supply_, demand_, flow_, pot_;
};

// Repeatedly cancels cycles of the (undirected, bipartite) support graph until
// it is a forest. Flow moves in the direction that does not increase cost.
void reduce_to_forest(const CostMatrix& c, std::vector<CouplingEntry>& entries) {
  const std::size_t n = c.rows();
  while (true) {
    const std::size_t v_count = n + c.cols();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(v_count);
    std::vector<std::size_t> parent(v_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    std::size_t closing = kNone;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::size_t a = entries[k].i, b = n + entries[k].j;
      const std::size_t ra = find(a), rb = find(b);
      if (ra == rb) {
        closing = k;
        break;
      }
      parent[ra] = rb;
      adj[a].push_back({b, k});
      adj[b].push_back({a, k});
    }
    if (closing == kNone) return;

    // Path in the forest from the closing edge's sink back to its source.
    const std::size_t from = n + entries[closing].j, to = entries[closing].i;
    std::vector<std::size_t> via(v_count, kNone), via_edge(v_count, kNone);
    std::deque<std::size_t> queue{from};
    via[from] = from;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      if (u == to) break;
      for (auto [w, k] : adj[u]) {
        if (via[w] == kNone) {
          via[w] = u;
          via_edge[w] = k;
          queue.push_back(w);
        }
      }
    }
    // Cycle edges in order: closing edge (i→j), then the path j … i.
    std::vector<std::size_t> cycle{closing};
    std::vector<std::size_t> path;
    for (std::size_t u = to; u != from; u = via[u]) path.push_back(via_edge[u]);
    std::reverse(path.begin(), path.end());
    cycle.insert(cycle.end(), path.begin(), path.end());

    double even = 0.0, odd = 0.0;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const auto& e = entries[cycle[k]];
      (k % 2 == 0 ? even : odd) += c(e.i, e.j);
    }
    // Decrease the parity class with the larger cost.
    const std::size_t minus = even > odd ? 0 : 1;
    double theta = kInf;
    for (std::size_t k = minus; k < cycle.size(); k += 2) {
      theta = std::min(theta, entries[cycle[k]].mass);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      entries[cycle[k]].mass += (k % 2 == minus) ? -theta : theta;
    }
    std::erase_if(entries, [](const CouplingEntry& e) { return e.mass <= kMassEpsilon; });
  }
}

}  // namespace

TransportResult solve_primal(const CostMatrix& matrix, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu) {
  if (matrix.rows() != mu.size() || matrix.cols() != nu.size()) {
    throw std::invalid_argument("solve_primal: matrix does not match the measures");
  }
  const double total_mu = std::accumulate(mu.weights().begin(), mu.weights().end(), 0.0);
  const double total_nu = std::accumulate(nu.weights().begin(), nu.weights().end(), 0.0);
  if (std::abs(total_mu - total_nu) > kMarginalTolerance) {
    throw std::invalid_argument("solve_primal: marginal masses differ");
  }
  TransportResult result;
  result.coupling.source = mu;
  result.coupling.target = nu;

  ShortestPathSolver solver(matrix, mu, nu);
  if (!solver.run()) {
    result.status = TransportStatus::kInfeasibleNoCausalCoupling;
    return result;
  }
  const std::size_t n = mu.size(), m = nu.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double f = solver.flow()[i * m + j];
      if (f > kMassEpsilon) result.coupling.entries.push_back({i, j, f});
    }
  }
  reduce_to_forest(matrix, result.coupling.entries);
  result.status = TransportStatus::kOptimal;
  result.primal_value = 0.0;
  for (const auto& e : result.coupling.entries) {
    result.primal_value += e.mass * matrix(e.i, e.j);
  }
  const auto& pot = solver.potentials();
  result.duals = DualPair{std::vector<double>(pot.begin(), pot.begin() + n),
                          std::vector<double>(pot.begin() + n, pot.end())};
  return result;
}

// ---------------------------------------------------------------------------
// Monotonicity certificates.

double exchange_delta(std::span<const SupportPair> support,
                      std::span<const std::size_t> cycle, const CostMatrix& matrix) {
  double delta = 0.0;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const auto& a = support[cycle[k]];
    const auto& b = support[cycle[(k + 1) % cycle.size()]];
    delta = add_for_inf(delta, sub_for_inf(matrix(b.row, a.col), matrix(a.row, a.col)));
  }
  return delta;
}

Certificate check_cyclical_monotonicity(std::span<const SupportPair> support,
                                        const CostMatrix& matrix,
                                        double tolerance_per_edge) {
  const std::size_t k_count = support.size();
  for (const auto& s : support) {
    if (s.row >= matrix.rows() || s.col >= matrix.cols()) {
      throw std::invalid_argument("support pair out of range");
    }
    if (!matrix.finite(s.row, s.col)) {
      throw std::invalid_argument("support pair with infinite cost");
    }
  }
  Certificate cert;
  cert.kind = CertificateKind::kMonotonicityCycle;
  cert.feasible = true;
  if (k_count < 2) return cert;

  // Virtual source: every node starts at distance 0.
  std::vector<double> dist(k_count, 0.0);
  std::vector<std::size_t> pred(k_count, kNone);
  std::size_t last_relaxed = kNone;
  for (std::size_t iter = 0; iter < k_count; ++iter) {
    last_relaxed = kNone;
    for (std::size_t a = 0; a < k_count; ++a) {
      const double base = matrix(support[a].row, support[a].col);
      for (std::size_t b = 0; b < k_count; ++b) {
        if (a == b) continue;
        const double swap = matrix(support[b].row, support[a].col);
        if (swap == kInf) continue;
        const double w = swap - base + tolerance_per_edge;
        if (dist[a] + w < dist[b]) {
          dist[b] = dist[a] + w;
          pred[b] = a;
          last_relaxed = b;
        }
      }
    }
    if (last_relaxed == kNone) return cert;
  }

  std::size_t u = last_relaxed;
  for (std::size_t k = 0; k < k_count; ++k) u = pred[u];
  std::vector<std::size_t> cycle{u};
  for (std::size_t v = pred[u]; v != u; v = pred[v]) cycle.push_back(v);
  std::reverse(cycle.begin(), cycle.end());
  cert.feasible = false;
  cert.cycle_delta = exchange_delta(support, cycle, matrix);
  cert.cycle = std::move(cycle);
  return cert;
}

// ---------------------------------------------------------------------------
// Feasibility via max-flow (Dinic) on the bipartite causal graph.

namespace {

class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adj_(nodes) {}

  void add_edge(std::size_t u, std::size_t v, double cap) {
    adj_[u].push_back(edges_.size());
    edges_.push_back({v, cap});
    adj_[v].push_back(edges_.size());
    edges_.push_back({u, 0.0});
  }

  double run(std::size_t s, std::size_t t) {
    double total = 0.0;
    while (bfs(s, t)) {
      it_.assign(adj_.size(), 0);
      while (true) {
        const double f = dfs(s, t, kInf);
        if (f <= kMassEpsilon) break;
        total += f;
      }
    }
    return total;
  }

 private:
  struct Edge {
    std::size_t to;
    double cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(adj_.size(), -1);
    std::deque<std::size_t> q{s};
    level_[s] = 0;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      for (std::size_t id : adj_[u]) {
        const Edge& e = edges_[id];
        if (e.cap > kMassEpsilon && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push_back(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(std::size_t u, std::size_t t, double pushed) {
    if (u == t) return pushed;
    for (; it_[u] < adj_[u].size(); ++it_[u]) {
      const std::size_t id = adj_[u][it_[u]];
      Edge& e = edges_[id];
      if (e.cap <= kMassEpsilon || level_[e.to] != level_[u] + 1) continue;
      const double f = dfs(e.to, t, std::min(pushed, e.cap));
      if (f > kMassEpsilon) {
        e.cap -= f;
        edges_[id ^ 1].cap += f;
        return f;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

template <typename Allowed>
Certificate flow_feasibility(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             Allowed allowed, double null_tolerance) {
  if (mu.dimension() != nu.dimension()) {
    throw std::invalid_argument("feasibility: dimension mismatch");
  }
  const std::size_t n = mu.size(), m = nu.size();
  const std::size_t s = n + m, t = n + m + 1;
  MaxFlow net(n + m + 2);
  for (std::size_t i = 0; i < n; ++i) net.add_edge(s, i, mu.weight(i));
  for (std::size_t j = 0; j < m; ++j) net.add_edge(n + j, t, nu.weight(j));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (allowed(classify(mu.point(i), nu.point(j), null_tolerance))) {
        net.add_edge(i, n + j, kInf);
      }
    }
  }
  Certificate cert;
  cert.kind = CertificateKind::kFeasibility;
  cert.flow_value = net.run(s, t);
  cert.feasible = cert.flow_value >= 1.0 - kMarginalTolerance;
  return cert;
}

}  // namespace

Certificate causal_feasible(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double null_tolerance) {
  return flow_feasibility(mu, nu, is_causal_future, null_tolerance);
}

Certificate strictly_timelike_feasible(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu,
                                       double null_tolerance) {
  return flow_feasibility(mu, nu, is_timelike_future, null_tolerance);
}

// ---------------------------------------------------------------------------
// Dual gap.

DualInfeasibleError::DualInfeasibleError(std::size_t i, std::size_t j, double violation)
    : std::runtime_error("dual pair violates psi(y_j) - phi(x_i) <= c(x_i,y_j) at (" +
                         std::to_string(i) + "," + std::to_string(j) + ") by " +
                         std::to_string(violation)),
      row_(i),
      col_(j),
      violation_(violation) {}

double dual_gap(std::span<const double> phi, std::span<const double> psi,
                const TransportResult& result, const CostMatrix& matrix,
                double tolerance) {
  if (result.status != TransportStatus::kOptimal) {
    throw std::invalid_argument("dual_gap: result carries no coupling");
  }
  if (phi.size() != matrix.rows() || psi.size() != matrix.cols()) {
    throw std::invalid_argument("dual_gap: potential sizes do not match the matrix");
  }
  for (double v : phi) {
    if (!is_finite(v)) throw std::invalid_argument("dual_gap: phi must be finite");
  }
  for (double v : psi) {
    if (!is_finite(v)) throw std::invalid_argument("dual_gap: psi must be finite");
  }
  double worst = -kInf;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      if (!matrix.finite(i, j)) continue;
      const double v = psi[j] - phi[i] - matrix(i, j);
      if (v > worst) {
        worst = v;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > tolerance) throw DualInfeasibleError(wi, wj, worst);
  double dual = 0.0;
  const auto& mu = result.coupling.source;
  const auto& nu = result.coupling.target;
  for (std::size_t j = 0; j < psi.size(); ++j) dual += psi[j] * nu.weight(j);
  for (std::size_t i = 0; i < phi.size(); ++i) dual -= phi[i] * mu.weight(i);
  return result.primal_value - dual;
}

}  // namespace lot
