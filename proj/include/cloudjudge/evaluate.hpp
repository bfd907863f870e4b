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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cloudjudge/covmmd.hpp"
#include "cloudjudge/efp.hpp"
#include "cloudjudge/emd.hpp"
#include "cloudjudge/frechet.hpp"
#include "cloudjudge/kinematics.hpp"
#include "cloudjudge/model.hpp"
#include "cloudjudge/w1.hpp"

namespace cloudjudge {

inline constexpr int kReportSchema = 1;

struct EvalConfig {
  std::string real_path;
  std::string gen_path;
  std::optional<std::string> acts_real_path;
  std::optional<std::string> acts_gen_path;
  bool no_fpnd = false;
  std::uint64_t seed = 0;
  W1Protocol w1;
  CovMmdProtocol covmmd;
  EmdConfig emd;
  EfpConfig efp;
  FrechetProtocol frechet;

  // Copies `seed` into every protocol.
  void apply_seed();
};

struct MetricReport {
  EvalConfig config;
  W1Score w1m;
  W1Score w1p;
  W1Score w1efp;
  CovMmdScore covmmd;
  std::optional<FrechetResult> frechet;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timings;  // seconds
};

// Runs all metrics. `provider` is ignored when config.no_fpnd is set.
MetricReport evaluate(const CloudSample& real, const CloudSample& gen,
                      const EvalConfig& config,
                      const ActivationProvider& provider);

// Loads the files named in the config (activations when both paths are
// given, surrogate otherwise) and evaluates.
MetricReport evaluate_files(const EvalConfig& config);

// JSON report: schema, scores, config echo, warnings and (optionally) the
// wall-clock timing block. Floats carry 9 significant digits.
std::string to_json(const MetricReport& report, bool include_timings = true);

struct BaselineReport {
  EvalConfig config;
  JetClass label = JetClass::kOther;
  std::size_t n_jets = 0;
  BaselineScores scores;
};

BaselineReport run_baseline(const CloudSample& real, const EvalConfig& config);
std::string to_json(const BaselineReport& report);

// Single jet image, or the pixel-wise mean over the sample when `index`
// is empty.
JetImage render(const CloudSample& sample, std::optional<std::size_t> index,
                std::size_t resolution = kDefaultImageResolution,
                double half_width = kDefaultImageHalfWidth);

// One CSV row per eta bin, one column per phi bin.
std::string image_csv(const JetImage& image);

// Plan as CSV, one row per source particle.
std::string plan_csv(const TransportPlan& plan);

// Value rounded to 9 significant digits (what reports print).
double round_g9(double value);

}  // namespace cloudjudge
