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

#include "cloudjudge/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cloudjudge/error.hpp"
#include "cloudjudge/kinematics.hpp"
#include "cloudjudge/parallel.hpp"
#include "cloudjudge/rng.hpp"

namespace cloudjudge {
namespace {

constexpr double kResidualTolerance = 1e-6;
constexpr double kPsdTolerance = 1e-8;

struct SymmetricRoot {
  Eigen::MatrixXd root;
  double trace_root = 0.0;
};

SymmetricRoot symmetric_sqrt(const Eigen::MatrixXd& m, const char* what) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure,
                std::string("eigendecomposition failed for ") + what);
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double norm = sym.norm();
  const double residual =
      (sym * v - v * lambda.asDiagonal()).norm();
  if (residual > kResidualTolerance * std::max(norm, 1e-300)) {
    throw Error(ErrorCode::kNumericalFailure,
                std::string("eigendecomposition residual too large for ") + what);
  }
  if (lambda.size() > 0 &&
      lambda.minCoeff() < -kPsdTolerance * std::max(1.0, norm)) {
    throw Error(ErrorCode::kNumericalFailure,
                std::string(what) + " is not positive semidefinite");
  }
  const Eigen::VectorXd s = lambda.cwiseMax(0.0).cwiseSqrt();
  return {v * s.asDiagonal() * v.transpose(), s.sum()};
}

std::vector<std::size_t> paired_draw(std::uint64_t seed, std::size_t population,
                                     std::size_t count) {
  CounterRng rng(seed, stream_id(StreamTag::kFrechet, 0));
  return draw_without_replacement(rng, population, count);
}

ActivationMatrix select_rows(const ActivationMatrix& acts,
                             const std::vector<std::size_t>& index) {
  ActivationMatrix out{index.size(), acts.dim, {}};
  out.values.reserve(index.size() * acts.dim);
  for (std::size_t r : index) {
    out.values.insert(out.values.end(),
                      acts.values.begin() + static_cast<long>(r * acts.dim),
                      acts.values.begin() + static_cast<long>((r + 1) * acts.dim));
  }
  return out;
}

}  // namespace

GaussianSummary fit_gaussian(const ActivationMatrix& acts) {
  if (acts.rows < 2) {
    throw Error(ErrorCode::kDegenerateSample,
                "Gaussian fit needs at least 2 rows");
  }
  if (acts.values.size() != acts.rows * acts.dim) {
    throw Error(ErrorCode::kDimensionMismatch, "activation matrix shape");
  }
  for (double x : acts.values) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kValidationFailure, "non-finite activation");
    }
  }
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
      x(acts.values.data(), static_cast<Eigen::Index>(acts.rows),
        static_cast<Eigen::Index>(acts.dim));
  GaussianSummary out;
  out.n = acts.rows;
  out.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - out.mean.transpose();
  out.cov = (centered.transpose() * centered) /
            static_cast<double>(acts.rows - 1);
  return out;
}

double frechet_distance(const GaussianSummary& a, const GaussianSummary& b) {
  if (a.mean.size() != b.mean.size() || a.cov.rows() != a.mean.size() ||
      b.cov.rows() != b.mean.size() || a.cov.cols() != a.cov.rows() ||
      b.cov.cols() != b.cov.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Gaussian summaries have different dimensions");
  }
  // Identical summaries are exactly zero apart; the square-root route would
  // only add round-off amplified by near-zero eigenvalues.
  if (a.mean == b.mean && a.cov == b.cov) return 0.0;
  const SymmetricRoot root_a = symmetric_sqrt(a.cov, "covariance a");
  const Eigen::MatrixXd middle = root_a.root * b.cov * root_a.root;
  const SymmetricRoot root_mid = symmetric_sqrt(middle, "product covariance");
  const double mean_term = (a.mean - b.mean).squaredNorm();
  const double d =
      mean_term + a.cov.trace() + b.cov.trace() - 2.0 * root_mid.trace_root;
  return std::max(0.0, d);
}

ActivationProvider ActivationProvider::external(ActivationMatrix real,
                                                ActivationMatrix gen) {
  if (real.dim != gen.dim) {
    throw Error(ErrorCode::kProviderMismatch,
                "real and generated activations differ in dimension");
  }
  ActivationProvider p;
  p.kind = ActivationKind::kExternalFile;
  p.real = std::move(real);
  p.gen = std::move(gen);
  return p;
}

ActivationProvider ActivationProvider::surrogate(const EfpConfig& efp) {
  ActivationProvider p;
  p.kind = ActivationKind::kEfpSurrogate;
  p.efp = efp;
  return p;
}

ActivationMatrix surrogate_activations(const CloudSample& sample,
                                       const std::vector<std::size_t>& index,
                                       const EfpConfig& efp) {
  ActivationMatrix out{index.size(), kSurrogateDim,
                       std::vector<double>(index.size() * kSurrogateDim)};
  parallel_for(index.size(), [&](std::size_t r) {
    const ParticleCloud& cloud = sample.clouds.at(index[r]);
    const auto efps = efp_set_values(cloud, efp);
    double* row = out.values.data() + r * kSurrogateDim;
    std::copy(efps.begin(), efps.end(), row);
    row[5] = jet_mass(cloud);
    row[6] = static_cast<double>(cardinality(cloud));
  });
  return out;
}

const char* FrechetResult::label() const {
  return kind == ActivationKind::kExternalFile ? "fpnd" : "frechet_surrogate";
}

FrechetResult fpnd(const CloudSample& real, const CloudSample& gen,
                   const ActivationProvider& provider,
                   const FrechetProtocol& proto) {
  require_valid(real);
  require_valid(gen);
  FrechetResult out;
  out.kind = provider.kind;
  if (provider.kind == ActivationKind::kExternalFile) {
    if (provider.real.rows != real.size() || provider.gen.rows != gen.size()) {
      throw Error(ErrorCode::kProviderMismatch,
                  "activation rows (" + std::to_string(provider.real.rows) +
                      ", " + std::to_string(provider.gen.rows) +
                      ") do not match sample sizes (" +
                      std::to_string(real.size()) + ", " +
                      std::to_string(gen.size()) + ")");
    }
  }
  std::size_t n = proto.n;
  const std::size_t available = std::min(real.size(), gen.size());
  if (n > available) {
    out.warnings.push_back("frechet n clamped from " + std::to_string(n) +
                           " to " + std::to_string(available));
    n = available;
  }
  out.n_used = n;
  const auto ir = paired_draw(proto.rng_seed, real.size(), n);
  const auto ig = paired_draw(proto.rng_seed, gen.size(), n);

  ActivationMatrix ar, ag;
  if (provider.kind == ActivationKind::kExternalFile) {
    ar = select_rows(provider.real, ir);
    ag = select_rows(provider.gen, ig);
  } else {
    ar = surrogate_activations(real, ir, provider.efp);
    ag = &real == &gen && ir == ig ? ar
                                   : surrogate_activations(gen, ig, provider.efp);
  }
  out.value = frechet_distance(fit_gaussian(ar), fit_gaussian(ag));
  return out;
}

}  // namespace cloudjudge
