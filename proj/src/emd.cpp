// Copyright 2026 The CloudJudge Authors
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

#include "cloudjudge/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cloudjudge/efp.hpp"
#include "cloudjudge/error.hpp"
#include "cloudjudge/parallel.hpp"

namespace cloudjudge {
namespace {

constexpr double kCertificateTolerance = 1e-7;

// Transportation simplex on a dense m x n tableau. The basis is a spanning
// tree of the bipartite row/column graph with exactly m + n - 1 cells.
class TransportSimplex {
 public:
  TransportSimplex(std::span<const double> supply,
                   std::span<const double> demand,
                   std::span<const double> cost)
      : m_(supply.size()),
        n_(demand.size()),
        supply_(supply),
        demand_(demand),
        cost_(cost),
        flow_(m_ * n_, 0.0),
        basic_(m_ * n_, false),
        potential_(m_ + n_, 0.0),
        parent_(m_ + n_),
        parent_cell_(m_ + n_),
        depth_(m_ + n_),
        adjacency_(m_ + n_) {
    double cmax = 0.0;
    for (double c : cost_) cmax = std::max(cmax, std::abs(c));
    eps_ = 1e-13 * (1.0 + cmax);
  }

  TransportSolution solve() {
    least_cost_start();
    const std::size_t dantzig_limit = 20 * (m_ + n_) * (m_ + n_) + 100;
    const std::size_t hard_limit = dantzig_limit + 200 * m_ * n_ * (m_ + n_);
    std::size_t pivots = 0;
    for (;;) {
      compute_potentials();
      const bool bland = pivots >= dantzig_limit;
      const std::size_t entering = price(bland);
      if (entering == kNone) break;
      if (++pivots > hard_limit) {
        throw Error(ErrorCode::kSolverFailure,
                    "transportation simplex exceeded its pivot limit");
      }
      pivot(entering, bland);
    }
    return certify(pivots);
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void least_cost_start() {
    std::vector<double> ra(supply_.begin(), supply_.end());
    std::vector<double> rb(demand_.begin(), demand_.end());
    std::vector<bool> row_on(m_, true), col_on(n_, true);
    std::size_t rows_left = m_, cols_left = n_;
    basis_.clear();
    for (std::size_t step = 0; step + 1 < m_ + n_; ++step) {
      std::size_t bi = 0, bj = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_on[i]) continue;
        for (std::size_t j = 0; j < n_; ++j) {
          if (col_on[j] && cost_[i * n_ + j] < best) {
            best = cost_[i * n_ + j];
            bi = i;
            bj = j;
          }
        }
      }
      const double x = std::max(0.0, std::min(ra[bi], rb[bj]));
      const std::size_t cell = bi * n_ + bj;
      flow_[cell] = x;
      basic_[cell] = true;
      basis_.push_back(cell);
      const bool row_exhausted = ra[bi] <= rb[bj];
      ra[bi] -= x;
      rb[bj] -= x;
      if ((row_exhausted && rows_left > 1) || cols_left == 1) {
        row_on[bi] = false;
        --rows_left;
      } else {
        col_on[bj] = false;
        --cols_left;
      }
    }
  }

  void compute_potentials() {
    for (auto& adj : adjacency_) adj.clear();
    for (std::size_t cell : basis_) {
      const std::size_t r = cell / n_;
      const std::size_t c = m_ + cell % n_;
      adjacency_[r].push_back({c, cell});
      adjacency_[c].push_back({r, cell});
    }
    std::fill(depth_.begin(), depth_.end(), kNone);
    std::vector<std::size_t> queue;
    queue.reserve(m_ + n_);
    queue.push_back(0);
    depth_[0] = 0;
    parent_[0] = kNone;
    potential_[0] = 0.0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      for (const auto& [next, cell] : adjacency_[node]) {
        if (depth_[next] != kNone) continue;
        depth_[next] = depth_[node] + 1;
        parent_[next] = node;
        parent_cell_[next] = cell;
        potential_[next] = cost_[cell] - potential_[node];
        queue.push_back(next);
      }
    }
    if (queue.size() != m_ + n_) {
      throw Error(ErrorCode::kSolverFailure, "basis is not a spanning tree");
    }
  }

  double reduced_cost(std::size_t cell) const {
    return cost_[cell] - potential_[cell / n_] - potential_[m_ + cell % n_];
  }

  std::size_t price(bool bland) const {
    std::size_t entering = kNone;
    double most_negative = -eps_;
    for (std::size_t cell = 0; cell < m_ * n_; ++cell) {
      if (basic_[cell]) continue;
      const double d = reduced_cost(cell);
      if (d < most_negative) {
        entering = cell;
        if (bland) break;
        most_negative = d;
      }
    }
    return entering;
  }

  void pivot(std::size_t entering, bool bland) {
    // Tree path from the entering column back to the entering row; cells
    // along it alternate between losing and gaining flow.
    std::size_t a = m_ + entering % n_;
    std::size_t b = entering / n_;
    std::vector<std::size_t> from_col, from_row;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        from_col.push_back(parent_cell_[a]);
        a = parent_[a];
      } else {
        from_row.push_back(parent_cell_[b]);
        b = parent_[b];
      }
    }
    std::vector<std::size_t> path = std::move(from_col);
    path.insert(path.end(), from_row.rbegin(), from_row.rend());

    std::size_t leaving = kNone;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const std::size_t cell = path[k];
      const double f = flow_[cell];
      if (f < theta || (bland && f == theta && cell < leaving)) {
        theta = f;
        leaving = cell;
      }
    }
    theta = std::max(theta, 0.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k % 2 == 0) {
        flow_[path[k]] -= theta;
      } else {
        flow_[path[k]] += theta;
      }
    }
    flow_[entering] += theta;
    flow_[leaving] = 0.0;
    basic_[leaving] = false;
    basic_[entering] = true;
    *std::find(basis_.begin(), basis_.end(), leaving) = entering;
  }

  TransportSolution certify(std::size_t pivots) {
    TransportSolution out;
    out.pivots = pivots;
    out.row_potential.assign(potential_.begin(), potential_.begin() + m_);
    out.col_potential.assign(potential_.begin() + m_, potential_.end());
    double worst = 0.0;
    for (std::size_t cell = 0; cell < m_ * n_; ++cell) {
      if (flow_[cell] < 0.0) flow_[cell] = 0.0;
      out.primal += flow_[cell] * cost_[cell];
      if (!basic_[cell]) worst = std::max(worst, -reduced_cost(cell));
    }
    for (std::size_t i = 0; i < m_; ++i) out.dual += potential_[i] * supply_[i];
    for (std::size_t j = 0; j < n_; ++j) {
      out.dual += potential_[m_ + j] * demand_[j];
    }
    out.max_negative_reduced_cost = worst;
    out.flow = std::move(flow_);
    const double gap = std::abs(out.primal - out.dual);
    if (worst > kCertificateTolerance || gap > kCertificateTolerance) {
      throw Error(ErrorCode::kSolverFailure,
                  "optimality certificate failed (reduced-cost residual " +
                      std::to_string(worst) + ", duality gap " +
                      std::to_string(gap) + ")");
    }
    return out;
  }

  std::size_t m_;
  std::size_t n_;
  std::span<const double> supply_;
  std::span<const double> demand_;
  std::span<const double> cost_;
  std::vector<double> flow_;
  std::vector<bool> basic_;
  std::vector<std::size_t> basis_;
  std::vector<double> potential_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> parent_cell_;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
  double eps_ = 0.0;
};

void check_config(const EmdConfig& cfg) {
  if (!(cfg.radius > 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "EMD radius must be positive");
  }
}

// Genuine slot indices sorted by the canonical particle order.
std::vector<std::size_t> canonical_slots(const ParticleCloud& cloud) {
  const auto& slots = cloud.slots();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].genuine()) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = slots[x];
    const auto& b = slots[y];
    return std::tie(a.pt_rel, a.eta_rel, a.phi_rel) <
           std::tie(b.pt_rel, b.eta_rel, b.phi_rel);
  });
  return idx;
}

struct UnbalancedSolve {
  TransportSolution solution;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::size_t cols = 0;  // n_b, plus one when a dummy column exists
  double imbalance = 0.0;  // sum a - sum b
  double transport_cost = 0.0;
};

UnbalancedSolve solve_unbalanced(const std::vector<Particle>& a,
                                 const std::vector<Particle>& b,
                                 double radius) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "EMD needs genuine particles on both sides");
  }
  UnbalancedSolve out;
  out.n_a = a.size();
  out.n_b = b.size();
  double sa = 0.0, sb = 0.0;
  for (const auto& p : a) sa += p.pt_rel;
  for (const auto& p : b) sb += p.pt_rel;
  out.imbalance = sa - sb;

  // Surplus on either side is routed to a zero-cost dummy node.
  const bool dummy_col = out.imbalance > 0.0;
  const bool dummy_row = out.imbalance < 0.0;
  const std::size_t rows = out.n_a + (dummy_row ? 1 : 0);
  out.cols = out.n_b + (dummy_col ? 1 : 0);

  std::vector<double> supply(rows), demand(out.cols);
  for (std::size_t i = 0; i < out.n_a; ++i) supply[i] = a[i].pt_rel;
  for (std::size_t j = 0; j < out.n_b; ++j) demand[j] = b[j].pt_rel;
  if (dummy_row) supply[out.n_a] = -out.imbalance;
  if (dummy_col) demand[out.n_b] = out.imbalance;

  std::vector<double> cost(rows * out.cols, 0.0);
  for (std::size_t i = 0; i < out.n_a; ++i) {
    for (std::size_t j = 0; j < out.n_b; ++j) {
      cost[i * out.cols + j] = angular_distance(a[i], b[j]) / radius;
    }
  }
  out.solution = solve_transportation(supply, demand, cost);
  out.transport_cost = out.solution.primal;
  return out;
}

double distance_of(const UnbalancedSolve& s) {
  return std::max(0.0, s.transport_cost) + std::abs(s.imbalance);
}

}  // namespace

TransportSolution solve_transportation(std::span<const double> supply,
                                       std::span<const double> demand,
                                       std::span<const double> cost) {
  if (supply.empty() || demand.empty() ||
      cost.size() != supply.size() * demand.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "transportation problem shape mismatch");
  }
  return TransportSimplex(supply, demand, cost).solve();
}

namespace {

// All-padding clouds pass through so the solver reports them as EmptyCloud.
void require_valid_or_empty(const ParticleCloud& c) {
  const bool any = std::any_of(c.slots().begin(), c.slots().end(),
                               [](const Particle& p) { return p.mask != 0.0; });
  if (any) require_valid(c);
}

}  // namespace

EmdResult emd(const ParticleCloud& a, const ParticleCloud& b,
              const EmdConfig& cfg) {
  check_config(cfg);
  require_valid_or_empty(a);
  require_valid_or_empty(b);
  const auto ia = canonical_slots(a);
  const auto ib = canonical_slots(b);
  std::vector<Particle> pa, pb;
  for (std::size_t i : ia) pa.push_back(a.slots()[i]);
  for (std::size_t j : ib) pb.push_back(b.slots()[j]);
  const UnbalancedSolve s = solve_unbalanced(pa, pb, cfg.radius);

  // Position of each slot among the genuine particles in slot order.
  auto genuine_rank = [](const ParticleCloud& c) {
    std::vector<std::size_t> rank(c.slots().size(), 0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < c.slots().size(); ++i) {
      if (c.slots()[i].genuine()) rank[i] = k++;
    }
    return rank;
  };
  const auto rank_a = genuine_rank(a);
  const auto rank_b = genuine_rank(b);

  EmdResult out;
  out.distance = distance_of(s);
  TransportPlan& plan = out.plan;
  plan.n_source = s.n_a;
  plan.n_target = s.n_b;
  plan.flow.assign(s.n_a * s.n_b, 0.0);
  for (std::size_t i = 0; i < s.n_a; ++i) {
    for (std::size_t j = 0; j < s.n_b; ++j) {
      plan.flow[rank_a[ia[i]] * s.n_b + rank_b[ib[j]]] =
          s.solution.flow[i * s.cols + j];
    }
  }
  plan.objective = out.distance;
  plan.dual_objective = s.solution.dual + std::abs(s.imbalance);
  plan.destroyed_total = std::max(0.0, s.imbalance);
  plan.created_total = std::max(0.0, -s.imbalance);
  return out;
}

double emd_distance(const ParticleCloud& a, const ParticleCloud& b,
                    const EmdConfig& cfg) {
  check_config(cfg);
  return distance_of(
      solve_unbalanced(a.canonical_genuine(), b.canonical_genuine(), cfg.radius));
}

DistanceMatrix emd_matrix(const CloudSample& xs,
                          std::span<const std::size_t> x_index,
                          const CloudSample& ys,
                          std::span<const std::size_t> y_index,
                          const EmdConfig& cfg) {
  check_config(cfg);
  std::vector<std::vector<Particle>> px(x_index.size()), py(y_index.size());
  for (std::size_t i = 0; i < x_index.size(); ++i) {
    px[i] = xs.clouds.at(x_index[i]).canonical_genuine();
  }
  for (std::size_t j = 0; j < y_index.size(); ++j) {
    py[j] = ys.clouds.at(y_index[j]).canonical_genuine();
  }
  DistanceMatrix out{x_index.size(), y_index.size(),
                     std::vector<double>(x_index.size() * y_index.size())};
  parallel_for(out.values.size(), [&](std::size_t k) {
    const std::size_t i = k / out.cols;
    const std::size_t j = k % out.cols;
    try {
      out.values[k] = distance_of(solve_unbalanced(px[i], py[j], cfg.radius));
    } catch (const Error& e) {
      throw Error(e.code(), "pair (" + std::to_string(x_index[i]) + ", " +
                                std::to_string(y_index[j]) + "): " + e.detail());
    }
  });
  return out;
}

DistanceMatrix emd_matrix(const CloudSample& xs, const CloudSample& ys,
                          const EmdConfig& cfg) {
  for (const auto& c : xs.clouds) require_valid_or_empty(c);
  for (const auto& c : ys.clouds) require_valid_or_empty(c);
  std::vector<std::size_t> xi(xs.size()), yi(ys.size());
  std::iota(xi.begin(), xi.end(), std::size_t{0});
  std::iota(yi.begin(), yi.end(), std::size_t{0});
  return emd_matrix(xs, xi, ys, yi, cfg);
}

}  // namespace cloudjudge
