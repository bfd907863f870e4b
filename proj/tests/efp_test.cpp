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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cloudjudge/efp.hpp"
#include "cloudjudge/error.hpp"
#include "cloudjudge/kinematics.hpp"
#include "cloudjudge/toygen.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace cloudjudge {
namespace {

using testing::genuine;

// Direct transcription of the EFP sum, without tables or canonical order.
double efp_reference(const ParticleCloud& c, const Multigraph& g, double beta,
                     bool normalize) {
  const auto ps = c.genuine();
  double total = 0;
  for (const auto& p : ps) total += p.pt_rel;
  const double scale = normalize ? total : 1.0;
  const int v = g.n_vertices();
  const std::size_t n = ps.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(v), 0);
  double sum = 0;
  while (true) {
    double term = 1;
    for (auto i : idx) term *= ps[i].pt_rel / scale;
    for (auto [a, b] : g.edges()) {
      const auto& pa = ps[idx[static_cast<std::size_t>(a)]];
      const auto& pb = ps[idx[static_cast<std::size_t>(b)]];
      const double de = pa.eta_rel - pb.eta_rel;
      const double dp = std::remainder(pa.phi_rel - pb.phi_rel, 2 * kPi);
      term *= std::pow(std::sqrt(de * de + dp * dp), beta);
    }
    sum += term;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == n) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return sum;
}

TEST(Multigraph, NormalisesAndRejectsLoops) {
  Multigraph g(3, {{2, 1}, {0, 1}});
  EXPECT_EQ(g.to_string(), "V=3; E=[(0,1),(1,2)]");
  EXPECT_THROW(Multigraph(2, {{1, 1}}), Error);
  EXPECT_THROW(Multigraph(2, {{0, 2}}), Error);
}

TEST(Multigraph, TextFormRoundTrips) {
  const auto g = Multigraph::parse("V=4; E=[(0,1),(0,1),(1,2),(2,3)]");
  EXPECT_EQ(g.n_vertices(), 4);
  EXPECT_EQ(g.n_edges(), 4u);
  EXPECT_EQ(g.to_string(), "V=4; E=[(0,1),(0,1),(1,2),(2,3)]");
  EXPECT_EQ(Multigraph::parse(g.to_string()), g);
  EXPECT_THROW(Multigraph::parse("V=4; E=(0,1)"), Error);
}

TEST(Multigraph, CanonicalFormIsALabelInvariant) {
  const Multigraph a(4, {{0, 1}, {0, 1}, {1, 2}, {2, 3}});
  const Multigraph b(4, {{3, 2}, {3, 2}, {2, 0}, {0, 1}});
  EXPECT_EQ(a.canonical(), b.canonical());
  EXPECT_NE(a.canonical(), Multigraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}).canonical());
}

TEST(Enumerate, Examples) {
  const auto one = enumerate_multigraphs(2, 1, true);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].to_string(), "V=2; E=[(0,1)]");
  EXPECT_EQ(enumerate_multigraphs(4, 4, true).size(), 5u);
  // The only connected 3-vertex graph with 2 edges is the path, centred on 0.
  const auto path = enumerate_multigraphs(3, 2, true);
  ASSERT_EQ(path.size(), 1u);
  EXPECT_EQ(path[0].to_string(), "V=3; E=[(0,1),(0,2)]");
}

TEST(Enumerate, MatchesBruteForceForSmallSizes) {
  for (int v = 1; v <= 4; ++v) {
    for (int e = 0; e <= 4; ++e) {
      for (bool conn : {false, true}) {
        EXPECT_EQ(enumerate_multigraphs(v, e, conn).size(),
                  oracle::count_multigraphs(v, e, conn))
            << "V=" << v << " E=" << e << " connected=" << conn;
      }
    }
  }
}

TEST(Enumerate, OrderIsCanonicalAndDeterministic) {
  const auto a = enumerate_multigraphs(4, 4, false);
  const auto b = enumerate_multigraphs(4, 4, false);
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], a[i].canonical());
    if (i > 0) EXPECT_LT(a[i - 1], a[i]);
  }
}

TEST(Enumerate, ResourceLimit) {
  try {
    enumerate_multigraphs(4, 4, false, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceLimit);
  }
  EXPECT_THROW(enumerate_multigraphs(0, 1, false), Error);
}

TEST(EfpSet, IsTheFiveConnectedFourFourGraphs) {
  const auto& g = efp_set_graphs();
  EXPECT_EQ(g, enumerate_multigraphs(4, 4, true));
  for (const auto& x : g) {
    EXPECT_TRUE(x.connected());
    EXPECT_EQ(x.n_vertices(), 4);
    EXPECT_EQ(x.n_edges(), 4u);
  }
}

TEST(EfpValue, Examples) {
  const ParticleCloud single({genuine(0.1, 0.2, 0.7)});
  for (const auto& g : efp_set_graphs()) EXPECT_EQ(efp_value(single, g), 0.0);
  std::mt19937_64 rng(1);
  const auto c = testing::random_cloud(rng, 12);
  for (int v = 1; v <= 4; ++v) {
    EXPECT_NEAR(efp_value(c, Multigraph(v, {})), 1.0, 1e-14);
  }
  const ParticleCloud pair({genuine(0, 0.1, 0.5), genuine(0, -0.1, 0.5)});
  EXPECT_NEAR(efp_value(pair, Multigraph(2, {{0, 1}})), 0.1, 1e-15);
}

TEST(EfpValue, MatchesReferenceSum) {
  std::mt19937_64 rng(2);
  const auto graphs = enumerate_multigraphs(4, 4, false);
  for (int t = 0; t < 20; ++t) {
    const auto c = testing::random_cloud(rng, 1 + t % 7, 30, 0.5);
    for (double beta : {0.5, 1.0, 2.0}) {
      for (bool norm : {true, false}) {
        for (const auto& g : graphs) {
          const double ref = efp_reference(c, g, beta, norm);
          EXPECT_NEAR(efp_value(c, g, {beta, norm}), ref, 1e-13 * std::max(1.0, ref));
        }
      }
    }
  }
}

TEST(EfpValue, WrapsAzimuthalDifferences) {
  const ParticleCloud c({genuine(0, kPi - 0.05, 0.5), genuine(0, -kPi + 0.05, 0.5)});
  EXPECT_NEAR(efp_value(c, Multigraph(2, {{0, 1}})), 2 * 0.25 * 0.1, 1e-13);
}

TEST(EfpValue, PermutationInvariantAndMaskNeutral) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto c = testing::random_cloud(rng, 1 + t % 30);
    const auto p = testing::shuffled(rng, c);
    const auto j = canonicalize(testing::with_junk_padding(rng, p));
    EXPECT_EQ(efp_set_values(c), efp_set_values(p));
    EXPECT_EQ(efp_set_values(c), efp_set_values(j));
  }
}

TEST(EfpValue, InfraredSafe) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto c = testing::random_cloud(rng, 6, 8);
    auto slots = c.slots();
    slots[6] = genuine(0.3, -0.2, 0.0);
    const ParticleCloud soft(slots, 8);
    const auto a = efp_set_values(c), b = efp_set_values(soft);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(EfpValue, CollinearSafe) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> f(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const auto c = testing::random_cloud(rng, 6, 8);
    auto slots = c.slots();
    const double x = f(rng);
    slots[6] = slots[0];
    slots[6].pt_rel = slots[0].pt_rel * x;
    slots[0].pt_rel *= 1 - x;
    const ParticleCloud split(slots, 8);
    const auto a = efp_set_values(c), b = efp_set_values(split);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(EfpValue, DumbbellMatchesMassForNarrowClouds) {
  const Multigraph dumbbell(2, {{0, 1}});
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const auto c = testing::random_cloud(rng, 2 + t % 20, 30, 0.01);
    double max_theta = 0, total = 0;
    const auto ps = c.genuine();
    for (const auto& p : ps) total += p.pt_rel;
    for (const auto& p : ps) {
      for (const auto& q : ps) max_theta = std::max(max_theta, angular_distance(p, q));
    }
    if (max_theta >= 0.1) continue;
    const double efp = efp_value(c, dumbbell, {2.0, true});
    const double m = jet_mass(c) / total;
    EXPECT_LT(std::abs(efp - 2 * m * m) / efp, 1e-2);
  }
}

TEST(EfpSetFeatures, Examples) {
  std::mt19937_64 rng(7);
  const auto c = testing::random_cloud(rng, 9);
  const auto series = efp_set_features(testing::sample_of({c, c, c}));
  ASSERT_EQ(series.size(), 5u);
  for (const auto& s : series) {
    ASSERT_EQ(s.values.size(), 3u);
    EXPECT_EQ(s.values[0], s.values[1]);
    EXPECT_EQ(s.values[1], s.values[2]);
  }
  const auto zero = efp_set_features(
      testing::sample_of({ParticleCloud({genuine(0, 0, 1)}), ParticleCloud({genuine(1, 1, 2)})}));
  for (const auto& s : zero) {
    for (double v : s.values) EXPECT_EQ(v, 0.0);
  }
}

TEST(EfpSetFeatures, ToySampleDumbbellDiagnostic) {
  ToyConfig cfg;
  cfg.n_jets = 300;
  cfg.angle_scale = 0.02;
  cfg.rng_seed = 3;
  const auto sample = generate(cfg);
  const Multigraph dumbbell(2, {{0, 1}});
  std::vector<double> rel;
  for (const auto& c : sample.clouds) {
    const double m = jet_mass(c);
    if (m == 0) continue;
    const double e = efp_value(c, dumbbell, {2.0, true});
    rel.push_back(std::abs(e - 2 * m * m) / e);
  }
  std::sort(rel.begin(), rel.end());
  EXPECT_LT(rel[rel.size() / 2], 1e-2);
}

}  // namespace
}  // namespace cloudjudge
