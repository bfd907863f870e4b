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

// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exits non-zero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>

#include "cloudjudge/covmmd.hpp"
#include "cloudjudge/efp.hpp"
#include "cloudjudge/emd.hpp"
#include "cloudjudge/evaluate.hpp"
#include "cloudjudge/frechet.hpp"
#include "cloudjudge/io.hpp"
#include "cloudjudge/kinematics.hpp"
#include "cloudjudge/mplayer.hpp"
#include "cloudjudge/parallel.hpp"
#include "cloudjudge/toygen.hpp"
#include "cloudjudge/w1.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace cj = cloudjudge;
namespace fs = std::filesystem;
using cj::testing::genuine;

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kFail;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Verdict::kPass : Verdict::kFail, std::move(detail)};
}

cj::CloudSample toy(int prongs, std::size_t n, std::uint64_t seed,
                    double angle_scale = 0.1, double split_prob = 0.8) {
  cj::ToyConfig cfg;
  cfg.n_jets = n;
  cfg.prongs = prongs;
  cfg.rng_seed = seed;
  cfg.angle_scale = angle_scale;
  cfg.split_prob = split_prob;
  return cj::generate(cfg);
}

// 1. evaluate(real, real) is exactly the identity; 1000-jet run under 10 s.
Outcome metric_identity() {
  constexpr double kTol = 1e-9;
  std::string detail;
  bool ok = true;
  auto check = [&](const cj::CloudSample& s, const std::string& name, double* seconds) {
    const auto t = Clock::now();
    const auto r = cj::evaluate(s, s, cj::EvalConfig{}, cj::ActivationProvider::surrogate());
    if (seconds) *seconds = seconds_since(t);
    const bool good = std::abs(r.w1m.mean) <= kTol && std::abs(r.w1p.mean) <= kTol &&
                      std::abs(r.w1efp.mean) <= kTol && std::abs(r.covmmd.mmd) <= kTol &&
                      std::abs(r.covmmd.cov - 1.0) <= kTol && r.frechet &&
                      std::abs(r.frechet->value) <= kTol;
    if (!good) {
      ok = false;
      detail += name + " not identity (w1m " + fmt("%.3g", r.w1m.mean) + ", cov " +
                fmt("%.3g", r.covmmd.cov) + ", mmd " + fmt("%.3g", r.covmmd.mmd) + "); ";
    }
  };
  double seconds = 0;
  check(toy(3, 1000, 1), "toy 3-prong", &seconds);
  check(toy(1, 300, 2), "toy 1-prong", nullptr);
  std::mt19937_64 rng(3);
  cj::CloudSample random;
  for (int i = 0; i < 200; ++i) random.clouds.push_back(cj::testing::random_cloud(rng, 1 + i % 30));
  check(random, "random clouds", nullptr);
  ok = ok && seconds < 10.0;
  return verdict(ok, detail + "1000-jet evaluate " + fmt("%.2f", seconds) + " s (limit 10 s)");
}

// 2. EMD against the polytope-vertex oracle.
Outcome emd_oracle() {
  const auto t = Clock::now();
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> pt(0.01, 1.0);
  std::size_t failures = 0;
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto a = cj::testing::random_cloud(rng, count(rng), 3, 0.4);
    auto b = cj::testing::random_cloud(rng, count(rng), 3, 0.4);
    if (k % 4 == 0) {
      // Equal totals exercise the degenerate balanced case.
      double ta = 0, tb = 0;
      for (const auto& p : a.genuine()) ta += p.pt_rel;
      for (const auto& p : b.genuine()) tb += p.pt_rel;
      std::vector<cj::Particle> slots = b.slots();
      for (auto& p : slots) {
        if (p.genuine()) p.pt_rel *= ta / tb;
      }
      b = cj::ParticleCloud(slots, 3);
    }
    const double radius = k % 2 ? 0.8 : 0.4;
    const double got = cj::emd(a, b, {radius}).distance;
    const double want = cj::oracle::emd_by_vertices(a, b, radius);
    const double err = std::abs(got - want);
    worst = std::max(worst, err);
    if (!(err <= 1e-9)) ++failures;
  }
  const double seconds = seconds_since(t);
  return verdict(failures == 0 && seconds < 30.0,
                 std::to_string(failures) + "/1000 mismatches, max |diff| " + fmt("%.2e", worst) +
                     ", " + fmt("%.2f", seconds) + " s (limit 30 s)");
}

// 3. Multigraph enumeration.
Outcome multigraphs() {
  const std::size_t five = cj::enumerate_multigraphs(4, 4, true).size();
  std::size_t mismatches = 0, cases = 0;
  for (int v = 1; v <= 4; ++v) {
    for (int e = 0; e <= 4; ++e) {
      for (bool conn : {false, true}) {
        ++cases;
        if (cj::enumerate_multigraphs(v, e, conn).size() !=
            cj::oracle::count_multigraphs(v, e, conn)) {
          ++mismatches;
        }
      }
    }
  }
  return verdict(five == 5 && mismatches == 0,
                 "(4,4,connected) -> " + std::to_string(five) + " classes; " +
                     std::to_string(mismatches) + "/" + std::to_string(cases) +
                     " brute-force mismatches");
}

// 4. Dumbbell EFP at beta 2 against 2 m^2 on narrow toy jets.
Outcome efp_mass() {
  const auto sample = toy(1, 10000, 4, 0.02);
  const cj::Multigraph dumbbell(2, {{0, 1}});
  std::vector<double> rel;
  std::size_t single = 0;
  for (const auto& c : sample.clouds) {
    const double m = cj::jet_mass(c);
    const double e = cj::efp_value(c, dumbbell, {2.0, true});
    // A lone particle has m = 0 and EFP = 0; no relative error is defined.
    if (m == 0.0 && e == 0.0) {
      ++single;
      continue;
    }
    rel.push_back(std::abs(e - 2.0 * m * m) / std::abs(e));
  }
  std::nth_element(rel.begin(), rel.begin() + static_cast<long>(rel.size() / 2), rel.end());
  const double median = rel[rel.size() / 2];
  return verdict(median < 0.01, "median relative error " + fmt("%.3e", median) +
                                    " over " + std::to_string(rel.size()) + " jets (" +
                                    std::to_string(single) + " single-particle jets skipped)");
}

// 5. Location shift of the mass distribution moves W1M by delta.
Outcome w1_shift() {
  const auto sample = toy(3, 10000, 5);
  std::vector<double> mass;
  for (const auto& c : sample.clouds) mass.push_back(cj::jet_mass(c));
  cj::W1Protocol proto;
  proto.rng_seed = 5;
  proto.batch_size = 10000;
  proto.n_batches = 5;
  const double zero = cj::w1m(sample, sample, proto).mean;
  bool ok = zero == 0.0;
  std::string detail = "unshifted " + fmt("%.3g", zero);
  // Batches drawn from the same stream agree to rounding, so the stderr is
  // near zero; allow a fixed rounding floor on top of 2 stderr.
  constexpr double kRoundingFloor = 1e-12;
  for (double delta : {1e-3, 1e-2}) {
    std::vector<double> shifted = mass;
    for (double& m : shifted) m += delta;
    const auto s = cj::w1_per_jet(mass, shifted, proto);
    const double diff = std::abs(s.mean - zero - delta);
    const bool good = diff <= 2.0 * s.stddev + kRoundingFloor;
    ok = ok && good;
    detail += "; delta " + fmt("%g", delta) + ": moved " + fmt("%.12g", s.mean - zero) +
              " (stderr " + fmt("%.2e", s.stddev) + ")";
  }
  return verdict(ok, detail);
}

cj::GaussianSummary gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  return {std::move(mean), std::move(cov), 100};
}

// 6. Frechet closed forms.
Outcome frechet_closed_forms() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> mu(-3, 3), var(0.01, 5);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const double m1 = mu(rng), m2 = mu(rng), v1 = var(rng), v2 = var(rng);
    const double one = cj::frechet_distance(
        gaussian(Eigen::VectorXd::Constant(1, m1), Eigen::MatrixXd::Constant(1, 1, v1)),
        gaussian(Eigen::VectorXd::Constant(1, m2), Eigen::MatrixXd::Constant(1, 1, v2)));
    worst = std::max(worst, std::abs(one - (std::pow(m1 - m2, 2) +
                                            std::pow(std::sqrt(v1) - std::sqrt(v2), 2))));
    const int d = 1 + t % 6;
    Eigen::VectorXd a(d), b(d), ma(d), mb(d);
    double expect = 0;
    for (int k = 0; k < d; ++k) {
      a(k) = var(rng);
      b(k) = var(rng);
      ma(k) = mu(rng);
      mb(k) = mu(rng);
      expect += std::pow(ma(k) - mb(k), 2) + std::pow(std::sqrt(a(k)) - std::sqrt(b(k)), 2);
    }
    const double diag = cj::frechet_distance(gaussian(ma, a.asDiagonal().toDenseMatrix()),
                                             gaussian(mb, b.asDiagonal().toDenseMatrix()));
    worst = std::max(worst, std::abs(diag - expect));
  }
  return verdict(worst <= 1e-9, "max |diff| " + fmt("%.2e", worst) + " over 100 draws of each form");
}

cj::MpState state_of(const cj::ParticleCloud& c) {
  cj::MpState s;
  s.n = c.slots().size();
  s.h = 3;
  for (const auto& p : c.slots()) {
    s.features.insert(s.features.end(), {p.eta_rel, p.phi_rel, p.pt_rel});
    s.mask.push_back(p.genuine() ? 1 : 0);
  }
  return s;
}

// 7. Exact permutation invariance, equivariance and mask neutrality.
Outcome permutation_suite() {
  std::mt19937_64 rng(7);
  const std::size_t edge_dims[] = {6, 8, 4};
  const std::size_t node_dims[] = {7, 8, 5};
  const auto f_e = cj::init_feature_map(edge_dims, 1);
  const auto f_n = cj::init_feature_map(node_dims, 2, cj::Activation::kTanh);
  std::size_t checks = 0, failures = 0;
  std::string first;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (first.empty()) first = what;
    }
  };
  std::uniform_int_distribution<std::size_t> count(1, 30);
  for (int t = 0; t < 2000; ++t) {
    const auto c = cj::testing::random_cloud(rng, count(rng));
    const auto other = cj::testing::random_cloud(rng, count(rng));
    const auto perm = cj::testing::random_permutation(rng, c.slots().size());
    const auto pc = cj::testing::permuted(c, perm);
    const auto jc = cj::testing::with_junk_padding(rng, pc);

    expect(cj::jet_mass(pc) == cj::jet_mass(c) && cj::jet_mass(jc) == cj::jet_mass(c),
           "jet_mass");
    expect(cj::efp_set_values(pc) == cj::efp_set_values(c) &&
               cj::efp_set_values(jc) == cj::efp_set_values(c),
           "efp_set_values");
    const double d = cj::emd(c, other).distance;
    expect(cj::emd(jc, cj::testing::shuffled(rng, other)).distance == d &&
               cj::emd(other, jc).distance == cj::emd(other, c).distance,
           "emd");

    const auto out = cj::mp_forward(state_of(c), f_e, f_n);
    const auto pout = cj::mp_forward(state_of(jc), f_e, f_n);
    bool equivariant = true;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      for (std::size_t k = 0; k < out.h; ++k) {
        equivariant = equivariant && pout.features[i * out.h + k] == out.features[perm[i] * out.h + k];
      }
    }
    expect(equivariant, "mp_forward");
    expect(cj::mp_pool(pout) == cj::mp_pool(out), "mp_pool");
  }
  // Sample-level metrics on slot-permuted, junk-padded copies.
  for (int t = 0; t < 10; ++t) {
    cj::CloudSample x, y, px, py;
    for (int i = 0; i < 40; ++i) {
      x.clouds.push_back(cj::testing::random_cloud(rng, count(rng)));
      y.clouds.push_back(cj::testing::random_cloud(rng, count(rng)));
      px.clouds.push_back(cj::testing::with_junk_padding(rng, cj::testing::shuffled(rng, x.clouds.back())));
      py.clouds.push_back(cj::testing::with_junk_padding(rng, cj::testing::shuffled(rng, y.clouds.back())));
    }
    cj::W1Protocol w{20, 2, static_cast<std::uint64_t>(t), false};
    expect(cj::w1m(x, y, w).batches == cj::w1m(px, py, w).batches, "w1m");
    expect(cj::w1p(x, y, w).batches == cj::w1p(px, py, w).batches, "w1p");
    expect(cj::w1efp(x, y, w).batches == cj::w1efp(px, py, w).batches, "w1efp");
    const cj::CovMmdProtocol cp{10, 2, static_cast<std::uint64_t>(t)};
    const auto a = cj::cov_mmd(x, y, cp);
    const auto b = cj::cov_mmd(px, py, cp);
    expect(a.cov_batches == b.cov_batches && a.mmd_batches == b.mmd_batches, "cov_mmd");
    cj::FrechetProtocol fp{40, static_cast<std::uint64_t>(t)};
    const auto sur = cj::ActivationProvider::surrogate();
    expect(cj::fpnd(x, y, sur, fp).value == cj::fpnd(px, py, sur, fp).value, "fpnd");
  }
  return verdict(checks >= 10000 && failures == 0,
                 std::to_string(failures) + "/" + std::to_string(checks) + " failures" +
                     (first.empty() ? "" : " (first: " + first + ")"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// 8. CLI evaluate under thread caps 1 and 8.
Outcome determinism(const fs::path& dir) {
  const std::string cli = "'" CLOUDJUDGE_CLI_PATH "'";
  const auto real = (dir / "real.jnp").string();
  const auto gen = (dir / "gen.jnp").string();
  if (shell(cli + " toygen --n 1000 --prongs 3 --seed 1 --out " + real + " > /dev/null") != 0 ||
      shell(cli + " toygen --n 1000 --prongs 2 --seed 2 --out " + gen + " > /dev/null") != 0) {
    return {Verdict::kFail, "toygen failed"};
  }
  std::vector<std::string> reports;
  for (int threads : {1, 8}) {
    const auto out = (dir / ("report_" + std::to_string(threads) + ".json")).string();
    const int rc = shell("CLOUDJUDGE_THREADS=" + std::to_string(threads) + " " + cli +
                         " evaluate --real " + real + " --gen " + gen + " --seed 8 --out " + out +
                         " > /dev/null");
    if (rc != 0) return {Verdict::kFail, "evaluate exited " + std::to_string(rc)};
    auto j = nlohmann::ordered_json::parse(slurp(out));
    j.erase("timings");
    reports.push_back(j.dump(2));
  }
  return verdict(reports[0] == reports[1],
                 reports[0] == reports[1] ? "reports identical (" + std::to_string(reports[0].size()) +
                                                " bytes without timings)"
                                          : "reports differ");
}

// 9. JetNet baselines, only when the converted files are available.
Outcome jetnet_baselines() {
  const char* dir = std::getenv("CLOUDJUDGE_JETNET_DIR");
  if (dir == nullptr || *dir == '\0') {
    return {Verdict::kSkip,
            "set CLOUDJUDGE_JETNET_DIR to a directory holding gluon.jnp, light_quark.jnp, "
            "top_quark.jnp"};
  }
  struct Row {
    const char* file;
    double w1m, w1m_err, w1p, w1p_err, w1efp, w1efp_err;
  };
  const Row rows[] = {
      {"gluon.jnp", 0.7e-3, 0.2e-3, 0.44e-3, 0.09e-3, 0.62e-5, 0.07e-5},
      {"light_quark.jnp", 0.5e-3, 0.1e-3, 0.5e-3, 0.1e-3, 0.46e-5, 0.04e-5},
      {"top_quark.jnp", 0.51e-3, 0.07e-3, 0.55e-3, 0.07e-3, 1.1e-5, 0.1e-5},
  };
  bool ok = true;
  std::string detail;
  for (const auto& row : rows) {
    const fs::path path = fs::path(dir) / row.file;
    if (!fs::exists(path)) return {Verdict::kFail, "missing " + path.string()};
    const auto sample = cj::read_clouds(path);
    cj::EvalConfig cfg;
    const auto r = cj::run_baseline(sample, cfg);
    auto within = [&](const char* name, const cj::W1Score& s, double want, double err) {
      const bool good = std::abs(s.mean - want) <= err;
      ok = ok && good;
      detail += std::string(row.file) + " " + name + " " + fmt("%.3g", s.mean) + "+-" +
                fmt("%.2g", s.stddev) + (good ? " ok; " : " OUT; ");
    };
    within("w1m", r.scores.w1m, row.w1m, row.w1m_err);
    within("w1p", r.scores.w1p, row.w1p, row.w1p_err);
    within("w1efp", r.scores.w1efp, row.w1efp, row.w1efp_err);
  }
  return verdict(ok, detail + "config: beta 1, normalized z, 10000 x 5 batches, seed 0");
}

// 10. cov_mmd throughput at the full protocol.
Outcome throughput() {
  const auto x = toy(3, 500, 10, 0.1, 1.0);
  const auto y = toy(2, 500, 11, 0.1, 1.0);
  std::size_t full = 0;
  for (const auto& c : x.clouds) full += cj::cardinality(c) == 30;
  const auto t = Clock::now();
  const auto r = cj::cov_mmd(x, y, cj::CovMmdProtocol{100, 10, 10});
  const double seconds = seconds_since(t);
  return verdict(seconds < 300.0 && r.cov > 0.0,
                 "100 x 100 x 10 EMDs in " + fmt("%.1f", seconds) + " s on " +
                     std::to_string(cj::thread_count()) + " thread(s) (limit 300 s); " +
                     std::to_string(full) + "/500 clouds at 30 particles");
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / ("cloudjudge_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"metric identity", metric_identity},
      {"EMD oracle equivalence", emd_oracle},
      {"multigraph enumeration", multigraphs},
      {"EFP-mass relation", efp_mass},
      {"W1 shift law", w1_shift},
      {"Frechet closed forms", frechet_closed_forms},
      {"permutation and mask suite", permutation_suite},
      {"determinism across thread caps", [&] { return determinism(dir); }},
      {"JetNet baselines", jetnet_baselines},
      {"cov/MMD throughput", throughput},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const char* v = o.verdict == Verdict::kPass ? "PASS" : o.verdict == Verdict::kFail ? "FAIL" : "SKIP";
    if (o.verdict == Verdict::kFail) ++failed;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, v, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(dir);
  return failed == 0 ? 0 : 1;
}
