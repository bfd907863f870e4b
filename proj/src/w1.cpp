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

#include "cloudjudge/w1.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <functional>

#include "cloudjudge/error.hpp"
#include "cloudjudge/kinematics.hpp"
#include "cloudjudge/parallel.hpp"
#include "cloudjudge/rng.hpp"

namespace cloudjudge {
namespace {

struct Draws {
  std::vector<std::size_t> real;
  std::vector<std::size_t> gen;
};

using DrawFn = std::function<Draws(std::size_t batch)>;
using BatchFn = std::function<double(const Draws&)>;

void check_protocol(const W1Protocol& proto) {
  if (proto.batch_size < 2 || proto.n_batches < 1) {
    throw Error(ErrorCode::kConfigInvalid,
                "W1 protocol needs batch_size >= 2 and n_batches >= 1");
  }
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kValidationFailure,
                  std::string("non-finite value in ") + what);
    }
  }
}

std::size_t clamp_batch(std::size_t requested, std::size_t available,
                        std::vector<std::string>& warnings) {
  if (available >= requested) return requested;
  warnings.push_back("batch_size clamped from " + std::to_string(requested) +
                     " to " + std::to_string(available));
  return available;
}

W1Score run_batches(const W1Protocol& proto, std::size_t batch_size,
                    std::vector<std::string> warnings, const DrawFn& draw,
                    const BatchFn& score) {
  W1Score out;
  out.batch_size = batch_size;
  out.warnings = std::move(warnings);
  out.batches.assign(proto.n_batches, 0.0);
  parallel_for(proto.n_batches,
               [&](std::size_t b) { out.batches[b] = score(draw(b)); });
  if (proto.check_determinism) {
    const double again = score(draw(0));
    if (std::memcmp(&again, &out.batches[0], sizeof(double)) != 0) {
      throw Error(ErrorCode::kDeterminismViolation,
                  "batch 0 differs between two runs with the same seed");
    }
  }
  double sum = 0.0;
  for (double v : out.batches) sum += v;
  out.mean = sum / static_cast<double>(out.batches.size());
  double sq = 0.0;
  for (double v : out.batches) sq += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(sq / static_cast<double>(out.batches.size()));
  return out;
}

// Both sides draw from the same stream, so identical samples give identical
// draws.
DrawFn paired_draws(const W1Protocol& proto, std::size_t n_real,
                    std::size_t n_gen, std::size_t batch_size) {
  return [=](std::size_t b) {
    CounterRng rng_real(proto.rng_seed, stream_id(StreamTag::kW1Draw, b));
    CounterRng rng_gen(proto.rng_seed, stream_id(StreamTag::kW1Draw, b));
    return Draws{draw_without_replacement(rng_real, n_real, batch_size),
                 draw_without_replacement(rng_gen, n_gen, batch_size)};
  };
}

DrawFn disjoint_draws(const W1Protocol& proto, std::size_t n,
                      std::size_t batch_size) {
  return [=](std::size_t b) {
    CounterRng rng(proto.rng_seed, stream_id(StreamTag::kBaseline, b));
    auto idx = draw_without_replacement(rng, n, 2 * batch_size);
    Draws d;
    d.real.assign(idx.begin(), idx.begin() + static_cast<long>(batch_size));
    d.gen.assign(idx.begin() + static_cast<long>(batch_size), idx.end());
    return d;
  };
}

std::vector<double> gather(const std::vector<double>& values,
                           const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(values[i]);
  return out;
}

std::vector<double> masses(const CloudSample& s) {
  std::vector<double> out(s.size());
  parallel_for(s.size(), [&](std::size_t i) { out[i] = jet_mass(s[i]); });
  return out;
}

using EfpRow = std::vector<double>;

std::vector<EfpRow> efp_rows(const CloudSample& s, const EfpConfig& cfg) {
  std::vector<EfpRow> out(s.size());
  parallel_for(s.size(),
               [&](std::size_t i) { out[i] = efp_set_values(s[i], cfg); });
  return out;
}

double particle_w1(const CloudSample& a, const std::vector<std::size_t>& ia,
                   const CloudSample& b, const std::vector<std::size_t>& ib) {
  std::array<std::vector<double>, 3> fa, fb;
  auto pool = [](const CloudSample& s, const std::vector<std::size_t>& idx,
                 std::array<std::vector<double>, 3>& f) {
    for (std::size_t i : idx) {
      for (const auto& p : s[i].slots()) {
        if (!p.genuine()) continue;
        f[0].push_back(p.eta_rel);
        f[1].push_back(p.phi_rel);
        f[2].push_back(p.pt_rel);
      }
    }
  };
  pool(a, ia, fa);
  pool(b, ib, fb);
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) sum += w1_1d(fa[k], fb[k]);
  return sum / 3.0;
}

double efp_w1(const std::vector<EfpRow>& a, const std::vector<std::size_t>& ia,
              const std::vector<EfpRow>& b, const std::vector<std::size_t>& ib) {
  const std::size_t d = efp_set_graphs().size();
  double sum = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> xa, xb;
    xa.reserve(ia.size());
    xb.reserve(ib.size());
    for (std::size_t i : ia) xa.push_back(a[i][k]);
    for (std::size_t i : ib) xb.push_back(b[i][k]);
    sum += w1_1d(xa, xb);
  }
  return sum / static_cast<double>(d);
}

struct SidePair {
  std::size_t batch_size;
  std::vector<std::string> warnings;
};

SidePair prepare(const CloudSample& real, const CloudSample& gen,
                 const W1Protocol& proto) {
  check_protocol(proto);
  require_valid(real);
  require_valid(gen);
  SidePair sp;
  sp.batch_size = clamp_batch(proto.batch_size,
                              std::min(real.size(), gen.size()), sp.warnings);
  return sp;
}

}  // namespace

double w1_1d(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) {
    throw Error(ErrorCode::kEmptySeries, "W1 needs non-empty series");
  }
  check_finite(x, "W1 input");
  check_finite(y, "W1 input");
  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const std::size_t n = xs.size();
  const std::size_t m = ys.size();
  if (n == m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::abs(xs[i] - ys[i]);
    return acc / static_cast<double>(n);
  }
  // Walk the merged quantile grid; positions are measured in units of
  // 1 / (n m) so breakpoints compare exactly.
  std::size_t i = 0, j = 0;
  std::uint64_t t = 0;
  double acc = 0.0;
  while (i < n && j < m) {
    const std::uint64_t tx = (i + 1) * static_cast<std::uint64_t>(m);
    const std::uint64_t ty = (j + 1) * static_cast<std::uint64_t>(n);
    const std::uint64_t next = std::min(tx, ty);
    acc += static_cast<double>(next - t) * std::abs(xs[i] - ys[j]);
    t = next;
    if (tx == next) ++i;
    if (ty == next) ++j;
  }
  return acc / (static_cast<double>(n) * static_cast<double>(m));
}

double w1_1d(const FeatureSeries& x, const FeatureSeries& y) {
  return w1_1d(std::span<const double>(x.values),
               std::span<const double>(y.values));
}

W1Score w1_per_jet(std::span<const double> real, std::span<const double> gen,
                   const W1Protocol& proto) {
  check_protocol(proto);
  check_finite(real, "real feature");
  check_finite(gen, "gen feature");
  if (real.empty() || gen.empty()) {
    throw Error(ErrorCode::kEmptySeries, "per-jet feature series is empty");
  }
  std::vector<std::string> warnings;
  const std::size_t bs = clamp_batch(
      proto.batch_size, std::min(real.size(), gen.size()), warnings);
  const std::vector<double> r(real.begin(), real.end());
  const std::vector<double> g(gen.begin(), gen.end());
  return run_batches(proto, bs, std::move(warnings),
                     paired_draws(proto, r.size(), g.size(), bs),
                     [&](const Draws& d) {
                       return w1_1d(gather(r, d.real), gather(g, d.gen));
                     });
}

W1Score w1m(const CloudSample& real, const CloudSample& gen,
            const W1Protocol& proto) {
  auto sp = prepare(real, gen, proto);
  const auto mr = masses(real);
  const auto mg = &real == &gen ? mr : masses(gen);
  return run_batches(proto, sp.batch_size, std::move(sp.warnings),
                     paired_draws(proto, real.size(), gen.size(), sp.batch_size),
                     [&](const Draws& d) {
                       return w1_1d(gather(mr, d.real), gather(mg, d.gen));
                     });
}

W1Score w1p(const CloudSample& real, const CloudSample& gen,
            const W1Protocol& proto) {
  auto sp = prepare(real, gen, proto);
  return run_batches(proto, sp.batch_size, std::move(sp.warnings),
                     paired_draws(proto, real.size(), gen.size(), sp.batch_size),
                     [&](const Draws& d) {
                       return particle_w1(real, d.real, gen, d.gen);
                     });
}

W1Score w1efp(const CloudSample& real, const CloudSample& gen,
              const W1Protocol& proto, const EfpConfig& cfg) {
  auto sp = prepare(real, gen, proto);
  const auto er = efp_rows(real, cfg);
  const auto eg = &real == &gen ? er : efp_rows(gen, cfg);
  return run_batches(proto, sp.batch_size, std::move(sp.warnings),
                     paired_draws(proto, real.size(), gen.size(), sp.batch_size),
                     [&](const Draws& d) {
                       return efp_w1(er, d.real, eg, d.gen);
                     });
}

BaselineScores baseline(const CloudSample& real, const W1Protocol& proto,
                        const EfpConfig& cfg) {
  check_protocol(proto);
  require_valid(real);
  if (real.size() < 2) {
    throw Error(ErrorCode::kDegenerateSample,
                "baseline needs at least 2 clouds");
  }
  std::vector<std::string> warnings;
  const std::size_t bs = clamp_batch(proto.batch_size, real.size() / 2, warnings);
  const DrawFn draw = disjoint_draws(proto, real.size(), bs);

  const auto mass = masses(real);
  const auto efp = efp_rows(real, cfg);
  BaselineScores out;
  out.w1m = run_batches(proto, bs, warnings, draw, [&](const Draws& d) {
    return w1_1d(gather(mass, d.real), gather(mass, d.gen));
  });
  out.w1p = run_batches(proto, bs, warnings, draw, [&](const Draws& d) {
    return particle_w1(real, d.real, real, d.gen);
  });
  out.w1efp = run_batches(proto, bs, warnings, draw, [&](const Draws& d) {
    return efp_w1(efp, d.real, efp, d.gen);
  });
  return out;
}

}  // namespace cloudjudge
