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

#include "cloudjudge/efp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "cloudjudge/error.hpp"
#include "cloudjudge/parallel.hpp"

namespace cloudjudge {
namespace {

constexpr int kMaxVertices = 8;
constexpr double kMaxRawMultisets = 5e7;

struct GroupedEdge {
  int lo;
  int hi;
  int multiplicity;
};

// Edges grouped by vertex pair, sorted by the higher endpoint so the
// summation can close every edge as soon as its later vertex is assigned.
std::vector<GroupedEdge> group_edges(const Multigraph& g) {
  std::map<Edge, int> counts;
  for (const auto& e : g.edges()) ++counts[e];
  std::vector<GroupedEdge> out;
  for (const auto& [e, k] : counts) out.push_back({e.first, e.second, k});
  std::stable_sort(out.begin(), out.end(),
                   [](const GroupedEdge& a, const GroupedEdge& b) {
                     return a.hi < b.hi;
                   });
  return out;
}

struct AngularTable {
  std::size_t n = 0;
  std::vector<double> z;
  std::vector<double> theta;  // n * n

  explicit AngularTable(const ParticleCloud& cloud, bool normalize) {
    const auto particles = cloud.canonical_genuine();
    n = particles.size();
    z.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = particles[i].pt_rel;
      total += z[i];
    }
    if (normalize) {
      for (auto& zi : z) zi = total > 0.0 ? zi / total : 0.0;
    }
    theta.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double t = angular_distance(particles[i], particles[j]);
        theta[i * n + j] = t;
        theta[j * n + i] = t;
      }
    }
  }
};

class EfpSummer {
 public:
  EfpSummer(const AngularTable& table, const Multigraph& g, double beta)
      : table_(table), n_vertices_(g.n_vertices()), edges_(group_edges(g)) {
    std::set<int> multiplicities;
    for (const auto& e : edges_) multiplicities.insert(e.multiplicity);
    const std::size_t n = table.n;
    for (int k : multiplicities) {
      std::vector<double> w(n * n);
      for (std::size_t i = 0; i < n * n; ++i) {
        w[i] = std::pow(table.theta[i], beta * k);
      }
      powers_[k] = std::move(w);
    }
    for (int v = 0; v < n_vertices_; ++v) {
      std::vector<std::pair<int, const std::vector<double>*>> closing;
      for (const auto& e : edges_) {
        if (e.hi == v) closing.emplace_back(e.lo, &powers_.at(e.multiplicity));
      }
      closing_.push_back(std::move(closing));
    }
    index_.assign(static_cast<std::size_t>(n_vertices_), 0);
  }

  double sum() {
    if (table_.n == 0) return 0.0;
    return descend(0, 1.0);
  }

 private:
  double descend(int depth, double weight) {
    const std::size_t n = table_.n;
    const auto& closing = closing_[static_cast<std::size_t>(depth)];
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = weight * table_.z[i];
      for (const auto& [lo, pw] : closing) {
        w *= (*pw)[index_[static_cast<std::size_t>(lo)] * n + i];
      }
      if (depth + 1 == n_vertices_) {
        acc += w;
      } else if (w != 0.0) {
        index_[static_cast<std::size_t>(depth)] = i;
        acc += descend(depth + 1, w);
      }
    }
    return acc;
  }

  const AngularTable& table_;
  int n_vertices_;
  std::vector<GroupedEdge> edges_;
  std::map<int, std::vector<double>> powers_;
  std::vector<std::vector<std::pair<int, const std::vector<double>*>>> closing_;
  std::vector<std::size_t> index_;
};

void check_config(const EfpConfig& cfg) {
  if (!(cfg.beta > 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "EFP beta must be positive");
  }
}

}  // namespace

Multigraph::Multigraph(int n_vertices, std::vector<Edge> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)) {
  if (n_vertices_ < 1) {
    throw Error(ErrorCode::kInvalidArgument, "multigraph needs >= 1 vertex");
  }
  for (auto& e : edges_) {
    if (e.first == e.second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "multigraph edges must be loopless");
    }
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first < 0 || e.second >= n_vertices_) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
  }
  std::sort(edges_.begin(), edges_.end());
}

bool Multigraph::connected() const {
  std::vector<int> parent(static_cast<std::size_t>(n_vertices_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  int components = n_vertices_;
  for (const auto& [u, v] : edges_) {
    const int ru = find(u);
    const int rv = find(v);
    if (ru != rv) {
      parent[static_cast<std::size_t>(ru)] = rv;
      --components;
    }
  }
  return components == 1;
}

Multigraph Multigraph::canonical() const {
  if (n_vertices_ > kMaxVertices) {
    throw Error(ErrorCode::kResourceLimit,
                "canonical labeling limited to " +
                    std::to_string(kMaxVertices) + " vertices");
  }
  std::vector<int> perm(static_cast<std::size_t>(n_vertices_));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Edge> best;
  bool have_best = false;
  std::vector<Edge> relabeled(edges_.size());
  do {
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      int a = perm[static_cast<std::size_t>(edges_[k].first)];
      int b = perm[static_cast<std::size_t>(edges_[k].second)];
      relabeled[k] = a < b ? Edge{a, b} : Edge{b, a};
    }
    std::sort(relabeled.begin(), relabeled.end());
    if (!have_best || relabeled < best) {
      best = relabeled;
      have_best = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Multigraph(n_vertices_, std::move(best));
}

std::string Multigraph::to_string() const {
  std::ostringstream os;
  os << "V=" << n_vertices_ << "; E=[";
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (k) os << ',';
    os << '(' << edges_[k].first << ',' << edges_[k].second << ')';
  }
  os << ']';
  return os.str();
}

Multigraph Multigraph::parse(const std::string& text) {
  static const std::regex kWhole(
      R"(\s*V\s*=\s*(\d+)\s*;\s*E\s*=\s*\[((?:\s*\(\s*\d+\s*,\s*\d+\s*\)\s*,?)*)\s*\]\s*)");
  static const std::regex kEdge(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  std::smatch m;
  if (!std::regex_match(text, m, kWhole)) {
    throw Error(ErrorCode::kParseFailure, "bad multigraph text: " + text);
  }
  const int v = std::stoi(m[1].str());
  std::vector<Edge> edges;
  const std::string body = m[2].str();
  for (auto it = std::sregex_iterator(body.begin(), body.end(), kEdge);
       it != std::sregex_iterator(); ++it) {
    edges.emplace_back(std::stoi((*it)[1].str()), std::stoi((*it)[2].str()));
  }
  return Multigraph(v, std::move(edges));
}

std::vector<Multigraph> enumerate_multigraphs(int n_vertices, int n_edges,
                                              bool connected_only,
                                              std::size_t class_limit) {
  if (n_vertices < 1 || n_edges < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "enumerate_multigraphs needs n_vertices >= 1, n_edges >= 0");
  }
  if (n_vertices > kMaxVertices) {
    throw Error(ErrorCode::kResourceLimit,
                "enumeration limited to " + std::to_string(kMaxVertices) +
                    " vertices");
  }
  std::vector<Edge> pairs;
  for (int u = 0; u < n_vertices; ++u) {
    for (int v = u + 1; v < n_vertices; ++v) pairs.emplace_back(u, v);
  }
  const int p = static_cast<int>(pairs.size());
  if (n_edges > 0 && p == 0) return {};

  // Multisets of size n_edges over p pair types: C(p + E - 1, E).
  double raw = 1.0;
  for (int k = 1; k <= n_edges; ++k) raw = raw * (p + k - 1) / k;
  if (raw > kMaxRawMultisets) {
    throw Error(ErrorCode::kResourceLimit,
                "too many edge multisets to enumerate");
  }

  std::set<Multigraph> classes;
  std::vector<int> choice(static_cast<std::size_t>(n_edges), 0);
  for (;;) {
    std::vector<Edge> edges;
    edges.reserve(choice.size());
    for (int c : choice) edges.push_back(pairs[static_cast<std::size_t>(c)]);
    Multigraph g(n_vertices, std::move(edges));
    if (!connected_only || g.connected()) {
      classes.insert(g.canonical());
      if (classes.size() > class_limit) {
        throw Error(ErrorCode::kResourceLimit,
                    "isomorphism class count exceeds " +
                        std::to_string(class_limit));
      }
    }
    // Next non-decreasing sequence.
    int k = n_edges - 1;
    while (k >= 0 && choice[static_cast<std::size_t>(k)] == p - 1) --k;
    if (k < 0) break;
    const int next = choice[static_cast<std::size_t>(k)] + 1;
    for (int j = k; j < n_edges; ++j) choice[static_cast<std::size_t>(j)] = next;
  }
  return {classes.begin(), classes.end()};
}

double angular_distance(const Particle& a, const Particle& b) noexcept {
  const double deta = a.eta_rel - b.eta_rel;
  const double dphi = wrap_phi(a.phi_rel - b.phi_rel);
  return std::sqrt(deta * deta + dphi * dphi);
}

double efp_value(const ParticleCloud& cloud, const Multigraph& graph,
                 const EfpConfig& cfg) {
  check_config(cfg);
  const AngularTable table(cloud, cfg.normalize_z);
  return EfpSummer(table, graph, cfg.beta).sum();
}

const std::vector<Multigraph>& efp_set_graphs() {
  static const std::vector<Multigraph> graphs =
      enumerate_multigraphs(4, 4, true);
  return graphs;
}

std::vector<double> efp_set_values(const ParticleCloud& cloud,
                                   const EfpConfig& cfg) {
  check_config(cfg);
  const AngularTable table(cloud, cfg.normalize_z);
  std::vector<double> out;
  for (const auto& g : efp_set_graphs()) {
    out.push_back(EfpSummer(table, g, cfg.beta).sum());
  }
  return out;
}

std::vector<FeatureSeries> efp_set_features(const CloudSample& sample,
                                            const EfpConfig& cfg) {
  require_valid(sample);
  const auto& graphs = efp_set_graphs();
  std::vector<FeatureSeries> out(graphs.size());
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    out[g].name = "efp[" + graphs[g].to_string() + "]";
    out[g].values.resize(sample.size());
  }
  parallel_for(sample.size(), [&](std::size_t c) {
    const auto values = efp_set_values(sample[c], cfg);
    for (std::size_t g = 0; g < graphs.size(); ++g) out[g].values[c] = values[g];
  });
  return out;
}

}  // namespace cloudjudge
