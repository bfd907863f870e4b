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

#include "cloudjudge/evaluate.hpp"

#include <chrono>
#include <cstdlib>

#include "json.hpp"

#include "cloudjudge/error.hpp"
#include "cloudjudge/io.hpp"

namespace cloudjudge {
namespace {

using Json = nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Json score_json(const W1Score& s) {
  Json j;
  j["mean"] = round_g9(s.mean);
  j["stderr"] = round_g9(s.stddev);
  j["batch_size"] = s.batch_size;
  Json batches = Json::array();
  for (double b : s.batches) batches.push_back(round_g9(b));
  j["batches"] = std::move(batches);
  return j;
}

Json config_json(const EvalConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["w1"] = {{"batch_size", c.w1.batch_size},
             {"n_batches", c.w1.n_batches},
             {"sampling", "without replacement, same draw stream for both sides"},
             {"stderr", "population standard deviation across batches"},
             {"w1p_pooling", "particles pooled across drawn jets"}};
  j["cov_mmd"] = {{"subsample", c.covmmd.subsample},
                  {"n_batches", c.covmmd.n_batches},
                  {"direction",
                   "nearest real cloud for each generated cloud; coverage = "
                   "distinct matched real / real draw size"},
                  {"ties", "lowest index"}};
  j["emd"] = {{"radius", round_g9(c.emd.radius)},
              {"solver", "transportation simplex, double precision"},
              {"cost_quantization", "none"},
              {"dphi", "wrapped to (-pi, pi]"}};
  Json graphs = Json::array();
  for (const auto& g : efp_set_graphs()) graphs.push_back(g.to_string());
  j["efp"] = {{"beta", round_g9(c.efp.beta)},
              {"normalize_z", c.efp.normalize_z},
              {"graphs", std::move(graphs)}};
  j["frechet"] = {{"enabled", !c.no_fpnd},
                  {"n", c.frechet.n},
                  {"covariance", "unbiased (N - 1)"}};
  j["kinematics"] = {{"particle_mass", "massless"}};
  j["inputs"] = {{"real", c.real_path},
                 {"gen", c.gen_path},
                 {"acts_real", c.acts_real_path ? Json(*c.acts_real_path) : Json()},
                 {"acts_gen", c.acts_gen_path ? Json(*c.acts_gen_path) : Json()}};
  return j;
}

void append(std::vector<std::string>& out, const std::string& prefix,
            const std::vector<std::string>& in) {
  for (const auto& w : in) out.push_back(prefix + ": " + w);
}

Json scaled(const W1Score& s, double scale) {
  Json j = score_json(s);
  j["scale"] = scale;
  j["mean_scaled"] = round_g9(s.mean / scale);
  j["stderr_scaled"] = round_g9(s.stddev / scale);
  return j;
}

}  // namespace

void EvalConfig::apply_seed() {
  w1.rng_seed = seed;
  covmmd.rng_seed = seed;
  frechet.rng_seed = seed;
}

double round_g9(double value) {
  return std::strtod(format_g9(value).c_str(), nullptr);
}

MetricReport evaluate(const CloudSample& real, const CloudSample& gen,
                      const EvalConfig& config,
                      const ActivationProvider& provider) {
  MetricReport report;
  report.config = config;
  report.config.apply_seed();
  const EvalConfig& c = report.config;

  auto t = std::chrono::steady_clock::now();
  report.w1m = w1m(real, gen, c.w1);
  report.timings.emplace_back("w1m", seconds_since(t));

  t = std::chrono::steady_clock::now();
  report.w1p = w1p(real, gen, c.w1);
  report.timings.emplace_back("w1p", seconds_since(t));

  t = std::chrono::steady_clock::now();
  report.w1efp = w1efp(real, gen, c.w1, c.efp);
  report.timings.emplace_back("w1efp", seconds_since(t));

  t = std::chrono::steady_clock::now();
  report.covmmd = cov_mmd(real, gen, c.covmmd, c.emd);
  report.timings.emplace_back("cov_mmd", seconds_since(t));

  if (!c.no_fpnd) {
    t = std::chrono::steady_clock::now();
    report.frechet = fpnd(real, gen, provider, c.frechet);
    report.timings.emplace_back("frechet", seconds_since(t));
  }

  // The W1 metrics share one clamp; report it once.
  append(report.warnings, "w1", report.w1m.warnings);
  append(report.warnings, "cov_mmd", report.covmmd.warnings);
  if (report.frechet) append(report.warnings, "frechet", report.frechet->warnings);
  return report;
}

MetricReport evaluate_files(const EvalConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  // Identical inputs share one sample so per-cloud features are computed once.
  const bool same = config.real_path == config.gen_path;
  const CloudSample real = read_clouds(config.real_path);
  const CloudSample gen = same ? CloudSample{} : read_clouds(config.gen_path);
  ActivationProvider provider = ActivationProvider::surrogate(config.efp);
  if (config.acts_real_path.has_value() != config.acts_gen_path.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "activation files must be given for both real and gen");
  }
  if (!config.no_fpnd && config.acts_real_path && config.acts_gen_path) {
    provider = ActivationProvider::external(read_activations(*config.acts_real_path),
                                            read_activations(*config.acts_gen_path));
  }
  const double load = seconds_since(start);
  MetricReport report = evaluate(real, same ? real : gen, config, provider);
  report.timings.insert(report.timings.begin(), {"load", load});
  return report;
}

std::string to_json(const MetricReport& r, bool include_timings) {
  Json j;
  j["schema"] = kReportSchema;
  Json scores;
  scores["w1m"] = score_json(r.w1m);
  scores["w1p"] = score_json(r.w1p);
  scores["w1efp"] = score_json(r.w1efp);
  scores["cov"] = round_g9(r.covmmd.cov);
  scores["mmd"] = round_g9(r.covmmd.mmd);
  scores["cov_mmd_subsample"] = r.covmmd.subsample;
  if (r.frechet && r.frechet->kind == ActivationKind::kExternalFile) {
    scores["fpnd"] = round_g9(r.frechet->value);
    scores["frechet_surrogate"] = nullptr;
  } else {
    scores["fpnd"] = nullptr;
    scores["frechet_surrogate"] =
        r.frechet ? Json(round_g9(r.frechet->value)) : Json();
  }
  scores["frechet_n"] = r.frechet ? Json(r.frechet->n_used) : Json();
  j["scores"] = std::move(scores);
  j["config"] = config_json(r.config);
  j["warnings"] = r.warnings;
  if (include_timings) {
    Json timings;
    for (const auto& [name, secs] : r.timings) timings[name + "_s"] = round_g9(secs);
    j["timings"] = std::move(timings);
  }
  return j.dump(2) + "\n";
}

BaselineReport run_baseline(const CloudSample& real, const EvalConfig& config) {
  BaselineReport out;
  out.config = config;
  out.config.apply_seed();
  out.label = real.label;
  out.n_jets = real.size();
  out.scores = baseline(real, out.config.w1, out.config.efp);
  return out;
}

std::string to_json(const BaselineReport& r) {
  Json j;
  j["schema"] = kReportSchema;
  j["label"] = to_string(r.label);
  j["n_jets"] = r.n_jets;
  j["w1m"] = scaled(r.scores.w1m, 1e-3);
  j["w1p"] = scaled(r.scores.w1p, 1e-3);
  j["w1efp"] = scaled(r.scores.w1efp, 1e-5);
  Json cfg = config_json(r.config);
  cfg.erase("cov_mmd");
  cfg.erase("frechet");
  j["config"] = std::move(cfg);
  std::vector<std::string> warnings;
  append(warnings, "w1", r.scores.w1m.warnings);
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

JetImage render(const CloudSample& sample, std::optional<std::size_t> index,
                std::size_t resolution, double half_width) {
  require_valid(sample);
  if (index) {
    if (*index >= sample.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "jet index " + std::to_string(*index) + " >= " +
                      std::to_string(sample.size()));
    }
    return discretize(sample[*index], resolution, half_width);
  }
  JetImage mean = discretize(sample[0], resolution, half_width);
  for (std::size_t i = 1; i < sample.size(); ++i) {
    const JetImage img = discretize(sample[i], resolution, half_width);
    for (std::size_t k = 0; k < mean.pixels.size(); ++k) mean.pixels[k] += img.pixels[k];
  }
  for (auto& p : mean.pixels) p /= static_cast<double>(sample.size());
  return mean;
}

std::string image_csv(const JetImage& image) {
  std::string out;
  for (std::size_t r = 0; r < image.resolution; ++r) {
    for (std::size_t c = 0; c < image.resolution; ++c) {
      if (c) out += ',';
      out += format_g9(image.at(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string plan_csv(const TransportPlan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.n_source; ++i) {
    for (std::size_t j = 0; j < plan.n_target; ++j) {
      if (j) out += ',';
      out += format_g9(plan.at(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace cloudjudge
