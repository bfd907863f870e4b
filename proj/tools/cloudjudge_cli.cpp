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

// cloudjudge: evaluate generated particle clouds against real ones.
//
// Every subcommand prints one JSON document on stdout; diagnostics go to
// stderr. Exit codes: 0 success, 2 input/validation, 3 numerical/solver,
// 4 I/O.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cloudjudge/cloudjudge.h"

namespace {

using Json = nlohmann::ordered_json;

struct SampleDeleter {
  void operator()(cj_sample* s) const { cj_sample_free(s); }
};
using SamplePtr = std::unique_ptr<cj_sample, SampleDeleter>;

struct StringDeleter {
  void operator()(char* s) const { cj_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

int fail(cj_status status) {
  std::cerr << "cloudjudge: " << cj_last_error() << "\n";
  return static_cast<int>(status);
}

bool is_csv(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

cj_status load(const std::string& path, cj_label label, SamplePtr& out) {
  cj_sample* raw = nullptr;
  const cj_status st = is_csv(path) ? cj_sample_read_csv(path.c_str(), label, &raw)
                                    : cj_sample_read(path.c_str(), &raw);
  out.reset(raw);
  return st;
}

cj_status store(const cj_sample* sample, const std::string& path) {
  return is_csv(path) ? cj_sample_write_csv(sample, path.c_str())
                      : cj_sample_write(sample, path.c_str());
}

int write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "cloudjudge: IoFailure: cannot write " << path << "\n";
    return CJ_ERR_IO;
  }
  return 0;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

struct EvalFlags {
  std::string real, gen, acts_real, acts_gen, out;
  bool no_fpnd = false;
  bool efp_unnormalized = false;
};

void add_protocol_flags(CLI::App* cmd, cj_eval_config& cfg) {
  cmd->add_option("--seed", cfg.seed, "RNG seed for every draw");
  cmd->add_option("--w1-batch", cfg.w1_batch, "jets per W1 batch");
  cmd->add_option("--w1-nbatches", cfg.w1_nbatches, "number of W1 batches");
  cmd->add_option("--efp-beta", cfg.efp_beta, "EFP angular exponent");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation metrics for generated particle clouds (jets)"};
  app.require_subcommand(1);

  cj_eval_config eval_cfg;
  cj_eval_config_default(&eval_cfg);
  EvalFlags ef;

  auto* evaluate = app.add_subcommand("evaluate", "score a generated sample against a real one");
  evaluate->add_option("--real", ef.real, "real cloud file")->required();
  evaluate->add_option("--gen", ef.gen, "generated cloud file")->required();
  evaluate->add_option("--acts-real", ef.acts_real, "activation file for the real sample");
  evaluate->add_option("--acts-gen", ef.acts_gen, "activation file for the generated sample");
  evaluate->add_flag("--no-fpnd", ef.no_fpnd, "skip the Frechet distance");
  evaluate->add_option("--cov-subsample", eval_cfg.cov_subsample, "clouds per coverage/MMD batch");
  evaluate->add_option("--cov-nbatches", eval_cfg.cov_nbatches, "number of coverage/MMD batches");
  evaluate->add_option("--emd-radius", eval_cfg.emd_radius, "jet radius R in the EMD");
  evaluate->add_option("--fpnd-n", eval_cfg.fpnd_n, "clouds per side for the Frechet distance");
  evaluate->add_flag("--efp-unnormalized", ef.efp_unnormalized, "use raw pt_rel as EFP energies");
  evaluate->add_option("--out", ef.out, "also write the report here");
  add_protocol_flags(evaluate, eval_cfg);

  std::string baseline_real;
  auto* baseline = app.add_subcommand("baseline", "real-vs-real W1 reference scores");
  baseline->add_option("--real", baseline_real, "real cloud file")->required();
  add_protocol_flags(baseline, eval_cfg);

  std::string render_in, render_out, render_index = "mean";
  std::size_t resolution = 24;
  double half_width = 0.4;
  auto* render = app.add_subcommand("render", "jet image of one jet or the sample mean");
  render->add_option("--in", render_in, "cloud file")->required();
  render->add_option("--index", render_index, "jet index or 'mean'");
  render->add_option("--resolution", resolution, "pixels per axis");
  render->add_option("--half-width", half_width, "half width of the angular window");
  render->add_option("--out", render_out, "CSV grid output")->required();
  render->add_option("--seed", eval_cfg.seed, "unused; accepted for uniformity");

  cj_toy_config toy;
  cj_toy_config_default(&toy);
  std::string toy_out;
  auto* toygen = app.add_subcommand("toygen", "generate a synthetic jet sample");
  toygen->add_option("--n", toy.n_jets, "number of jets");
  toygen->add_option("--prongs", toy.prongs, "prongs per jet (1-3)");
  toygen->add_option("--max-particles", toy.max_particles, "slots per jet");
  toygen->add_option("--split-prob", toy.split_prob, "probability of each further split");
  toygen->add_option("--angle-scale", toy.angle_scale, "characteristic splitting angle");
  toygen->add_option("--seed", toy.seed, "RNG seed");
  toygen->add_option("--out", toy_out, "output file (.csv for CSV)")->required();

  std::string conv_in, conv_out, conv_label = "other";
  auto* convert = app.add_subcommand("convert", "convert between binary and CSV cloud files");
  convert->add_option("--in", conv_in, "input file (.csv for CSV)")->required();
  convert->add_option("--out", conv_out, "output file (.csv for CSV)")->required();
  convert->add_option("--label", conv_label, "jet class for CSV input")
      ->check(CLI::IsMember({"gluon", "light_quark", "top_quark", "toy", "other"}));
  convert->add_option("--seed", eval_cfg.seed, "unused; accepted for uniformity");

  std::string emd_a, emd_b, emd_plan;
  std::size_t index_a = 0, index_b = 0;
  double emd_radius = 0.8;
  auto* emd = app.add_subcommand("emd", "energy mover's distance between two jets");
  emd->add_option("--a", emd_a, "first cloud file")->required();
  emd->add_option("--b", emd_b, "second cloud file")->required();
  emd->add_option("--index-a", index_a, "jet index in the first file");
  emd->add_option("--index-b", index_b, "jet index in the second file");
  emd->add_option("--emd-radius", emd_radius, "jet radius R");
  emd->add_option("--plan", emd_plan, "write the transport plan as CSV");
  emd->add_option("--seed", eval_cfg.seed, "unused; accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : CJ_ERR_INPUT;
  }

  if (evaluate->parsed()) {
    eval_cfg.real_path = ef.real.c_str();
    eval_cfg.gen_path = ef.gen.c_str();
    eval_cfg.acts_real_path = ef.acts_real.empty() ? nullptr : ef.acts_real.c_str();
    eval_cfg.acts_gen_path = ef.acts_gen.empty() ? nullptr : ef.acts_gen.c_str();
    eval_cfg.no_fpnd = ef.no_fpnd ? 1 : 0;
    eval_cfg.efp_normalize = ef.efp_unnormalized ? 0 : 1;
    char* raw = nullptr;
    const cj_status st = cj_evaluate(&eval_cfg, 1, &raw);
    if (st != CJ_OK) return fail(st);
    OwnedString report(raw);
    if (!ef.out.empty()) {
      if (int rc = write_text(ef.out, report.get()); rc != 0) return rc;
    }
    std::cout << report.get();
    return 0;
  }

  if (baseline->parsed()) {
    eval_cfg.real_path = baseline_real.c_str();
    char* raw = nullptr;
    const cj_status st = cj_baseline(&eval_cfg, &raw);
    if (st != CJ_OK) return fail(st);
    OwnedString report(raw);
    std::cout << report.get();
    return 0;
  }

  if (render->parsed()) {
    SamplePtr sample;
    if (cj_status st = load(render_in, CJ_LABEL_OTHER, sample); st != CJ_OK) {
      return fail(st);
    }
    long index = -1;
    if (render_index != "mean") {
      try {
        std::size_t used = 0;
        index = std::stol(render_index, &used);
        if (used != render_index.size() || index < 0) throw std::invalid_argument("");
      } catch (const std::exception&) {
        std::cerr << "cloudjudge: --index must be a jet index or 'mean'\n";
        return CJ_ERR_INPUT;
      }
    }
    char* raw = nullptr;
    const cj_status st =
        cj_render(sample.get(), index, resolution, half_width, &raw);
    if (st != CJ_OK) return fail(st);
    OwnedString grid(raw);
    if (int rc = write_text(render_out, grid.get()); rc != 0) return rc;
    print({{"schema", 1},
           {"out", render_out},
           {"index", index < 0 ? Json("mean") : Json(index)},
           {"resolution", resolution},
           {"half_width", half_width}});
    return 0;
  }

  if (toygen->parsed()) {
    cj_sample* raw = nullptr;
    if (cj_status st = cj_toygen(&toy, &raw); st != CJ_OK) return fail(st);
    SamplePtr sample(raw);
    if (cj_status st = store(sample.get(), toy_out); st != CJ_OK) return fail(st);
    print({{"schema", 1},
           {"out", toy_out},
           {"n_jets", cj_sample_size(sample.get())},
           {"capacity", cj_sample_capacity(sample.get())},
           {"prongs", toy.prongs},
           {"split_prob", toy.split_prob},
           {"angle_scale", toy.angle_scale},
           {"seed", toy.seed}});
    return 0;
  }

  if (convert->parsed()) {
    static const char* kLabels[] = {"gluon", "light_quark", "top_quark", "toy", "other"};
    cj_label label = CJ_LABEL_OTHER;
    for (int k = 0; k < 5; ++k) {
      if (conv_label == kLabels[k]) label = static_cast<cj_label>(k);
    }
    SamplePtr sample;
    if (cj_status st = load(conv_in, label, sample); st != CJ_OK) return fail(st);
    if (cj_status st = store(sample.get(), conv_out); st != CJ_OK) return fail(st);
    print({{"schema", 1},
           {"in", conv_in},
           {"out", conv_out},
           {"n_jets", cj_sample_size(sample.get())},
           {"capacity", cj_sample_capacity(sample.get())}});
    return 0;
  }

  if (emd->parsed()) {
    SamplePtr a, b;
    if (cj_status st = load(emd_a, CJ_LABEL_OTHER, a); st != CJ_OK) return fail(st);
    if (cj_status st = load(emd_b, CJ_LABEL_OTHER, b); st != CJ_OK) return fail(st);
    double distance = 0.0;
    char* raw = nullptr;
    const cj_status st = cj_emd(a.get(), index_a, b.get(), index_b, emd_radius,
                                &distance, emd_plan.empty() ? nullptr : &raw);
    if (st != CJ_OK) return fail(st);
    OwnedString plan(raw);
    if (plan) {
      if (int rc = write_text(emd_plan, plan.get()); rc != 0) return rc;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", distance);
    print({{"schema", 1},
           {"distance", std::stod(buf)},
           {"radius", emd_radius},
           {"index_a", index_a},
           {"index_b", index_b},
           {"plan", emd_plan.empty() ? Json() : Json(emd_plan)}});
    return 0;
  }
  return 0;
}
