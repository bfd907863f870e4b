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

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cloudjudge/model.hpp"

namespace cloudjudge {

using Edge = std::pair<int, int>;

/// Loopless multigraph on vertices 0..n_vertices-1. Edges are stored with
/// u < v and kept sorted, so equal multisets compare equal.
class Multigraph {
 public:
  Multigraph() = default;
  Multigraph(int n_vertices, std::vector<Edge> edges);

  int n_vertices() const noexcept { return n_vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  bool connected() const;

  // Relabeled copy with lexicographically smallest sorted edge list.
  Multigraph canonical() const;

  // "V=4; E=[(0,1),(0,1),(1,2),(2,3)]"
  std::string to_string() const;
  static Multigraph parse(const std::string& text);

  friend bool operator==(const Multigraph&, const Multigraph&) = default;
  friend auto operator<=>(const Multigraph&, const Multigraph&) = default;

 private:
  int n_vertices_ = 0;
  std::vector<Edge> edges_;
};

inline constexpr std::size_t kDefaultGraphClassLimit = 10000;

/// All loopless multigraphs with the given vertex and edge counts, one per
/// isomorphism class, each in canonical labeling, sorted by edge list.
/// With connected_only, only connected graphs spanning every vertex.
std::vector<Multigraph> enumerate_multigraphs(
    int n_vertices, int n_edges, bool connected_only,
    std::size_t class_limit = kDefaultGraphClassLimit);

struct EfpConfig {
  double beta = 1.0;
  bool normalize_z = true;
};

/// Energy-flow polynomial by direct summation:
///   sum over vertex assignments i_1..i_V of prod_k z_{i_k} *
///   prod_{(a,b) in edges} theta_{i_a i_b}^beta,
/// theta_ij = sqrt(deta^2 + dphi^2) with dphi wrapped to (-pi, pi].
double efp_value(const ParticleCloud& cloud, const Multigraph& graph,
                 const EfpConfig& cfg = {});

// The five connected loopless multigraphs with 4 vertices and 4 edges.
const std::vector<Multigraph>& efp_set_graphs();

// Values of all efp_set_graphs() for one cloud, in graph order.
std::vector<double> efp_set_values(const ParticleCloud& cloud,
                                   const EfpConfig& cfg = {});

// One series per graph of efp_set_graphs(), one value per cloud.
std::vector<FeatureSeries> efp_set_features(const CloudSample& sample,
                                            const EfpConfig& cfg = {});

// Angular distance with wrapped azimuth.
double angular_distance(const Particle& a, const Particle& b) noexcept;

}  // namespace cloudjudge
