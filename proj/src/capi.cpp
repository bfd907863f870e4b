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

#include "cloudjudge/cloudjudge.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "cloudjudge/emd.hpp"
#include "cloudjudge/error.hpp"
#include "cloudjudge/evaluate.hpp"
#include "cloudjudge/io.hpp"
#include "cloudjudge/kinematics.hpp"
#include "cloudjudge/parallel.hpp"
#include "cloudjudge/toygen.hpp"

struct cj_sample {
  cloudjudge::CloudSample sample;
};

namespace {

using cloudjudge::Error;
using cloudjudge::ErrorCode;

thread_local std::string t_last_error;
thread_local std::string t_last_error_kind;

template <class F>
cj_status guarded(F&& body) {
  try {
    body();
    t_last_error.clear();
    t_last_error_kind.clear();
    return CJ_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    t_last_error_kind = cloudjudge::to_string(e.code());
    return static_cast<cj_status>(cloudjudge::exit_code(e.code()));
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    t_last_error_kind = "Internal";
    return CJ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    t_last_error_kind = "Internal";
    return CJ_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cloudjudge::JetClass to_label(cj_label label) {
  require(label >= CJ_LABEL_GLUON && label <= CJ_LABEL_OTHER, "unknown label");
  return static_cast<cloudjudge::JetClass>(label);
}

cloudjudge::EvalConfig to_config(const cj_eval_config* c) {
  require(c != nullptr, "config is null");
  cloudjudge::EvalConfig cfg;
  if (c->real_path) cfg.real_path = c->real_path;
  if (c->gen_path) cfg.gen_path = c->gen_path;
  if (c->acts_real_path) cfg.acts_real_path = c->acts_real_path;
  if (c->acts_gen_path) cfg.acts_gen_path = c->acts_gen_path;
  cfg.no_fpnd = c->no_fpnd != 0;
  cfg.seed = c->seed;
  cfg.w1.batch_size = c->w1_batch;
  cfg.w1.n_batches = c->w1_nbatches;
  cfg.covmmd.subsample = c->cov_subsample;
  cfg.covmmd.n_batches = c->cov_nbatches;
  cfg.frechet.n = c->fpnd_n;
  cfg.emd.radius = c->emd_radius;
  cfg.efp.beta = c->efp_beta;
  cfg.efp.normalize_z = c->efp_normalize != 0;
  cfg.apply_seed();
  return cfg;
}

const cloudjudge::ParticleCloud& jet_at(const cj_sample* s, size_t jet) {
  require(s != nullptr, "sample is null");
  if (jet >= s->sample.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "jet index " + std::to_string(jet) + " >= " +
                    std::to_string(s->sample.size()));
  }
  return s->sample[jet];
}

}  // namespace

extern "C" {

const char* cj_version(void) { return "1.0.0"; }

const char* cj_last_error(void) { return t_last_error.c_str(); }

const char* cj_last_error_kind(void) { return t_last_error_kind.c_str(); }

void cj_string_free(char* s) { std::free(s); }

void cj_set_thread_cap(unsigned cap) { cloudjudge::set_thread_cap(cap); }

cj_status cj_sample_read(const char* path, cj_sample** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new cj_sample{cloudjudge::read_clouds(path)};
  });
}

cj_status cj_sample_read_csv(const char* path, cj_label label, cj_sample** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new cj_sample{cloudjudge::read_csv(path, to_label(label))};
  });
}

cj_status cj_sample_write(const cj_sample* sample, const char* path) {
  return guarded([&] {
    require(sample != nullptr && path != nullptr, "null argument");
    cloudjudge::write_clouds(sample->sample, path);
  });
}

cj_status cj_sample_write_csv(const cj_sample* sample, const char* path) {
  return guarded([&] {
    require(sample != nullptr && path != nullptr, "null argument");
    cloudjudge::write_csv(sample->sample, path);
  });
}

void cj_sample_free(cj_sample* sample) { delete sample; }

size_t cj_sample_size(const cj_sample* sample) {
  return sample ? sample->sample.size() : 0;
}

size_t cj_sample_capacity(const cj_sample* sample) {
  return sample ? sample->sample.capacity() : 0;
}

cj_label cj_sample_label(const cj_sample* sample) {
  return sample ? static_cast<cj_label>(sample->sample.label) : CJ_LABEL_OTHER;
}

cj_status cj_sample_particle(const cj_sample* sample, size_t jet, size_t slot,
                             double out[4]) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto& slots = jet_at(sample, jet).slots();
    if (slot >= slots.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "slot index out of range");
    }
    const auto& p = slots[slot];
    out[0] = p.eta_rel;
    out[1] = p.phi_rel;
    out[2] = p.pt_rel;
    out[3] = p.mask;
  });
}

cj_status cj_jet_mass(const cj_sample* sample, size_t jet, double* mass) {
  return guarded([&] {
    require(mass != nullptr, "null argument");
    *mass = cloudjudge::jet_mass(jet_at(sample, jet));
  });
}

void cj_toy_config_default(cj_toy_config* cfg) {
  if (cfg == nullptr) return;
  const cloudjudge::ToyConfig d;
  cfg->n_jets = d.n_jets;
  cfg->max_particles = d.max_particles;
  cfg->split_prob = d.split_prob;
  cfg->angle_scale = d.angle_scale;
  cfg->prongs = d.prongs;
  cfg->seed = d.rng_seed;
}

cj_status cj_toygen(const cj_toy_config* cfg, cj_sample** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "null argument");
    cloudjudge::ToyConfig c;
    c.n_jets = cfg->n_jets;
    c.max_particles = cfg->max_particles;
    c.split_prob = cfg->split_prob;
    c.angle_scale = cfg->angle_scale;
    c.prongs = cfg->prongs;
    c.rng_seed = cfg->seed;
    *out = new cj_sample{cloudjudge::generate(c)};
  });
}

cj_status cj_emd(const cj_sample* a, size_t ia, const cj_sample* b, size_t ib,
                 double radius, double* distance, char** plan_csv) {
  return guarded([&] {
    require(distance != nullptr, "null argument");
    const auto result = cloudjudge::emd(jet_at(a, ia), jet_at(b, ib),
                                        cloudjudge::EmdConfig{radius});
    *distance = result.distance;
    if (plan_csv != nullptr) *plan_csv = dup_string(cloudjudge::plan_csv(result.plan));
  });
}

void cj_eval_config_default(cj_eval_config* cfg) {
  if (cfg == nullptr) return;
  const cloudjudge::EvalConfig d;
  *cfg = cj_eval_config{};
  cfg->no_fpnd = d.no_fpnd ? 1 : 0;
  cfg->seed = d.seed;
  cfg->w1_batch = d.w1.batch_size;
  cfg->w1_nbatches = d.w1.n_batches;
  cfg->cov_subsample = d.covmmd.subsample;
  cfg->cov_nbatches = d.covmmd.n_batches;
  cfg->fpnd_n = d.frechet.n;
  cfg->emd_radius = d.emd.radius;
  cfg->efp_beta = d.efp.beta;
  cfg->efp_normalize = d.efp.normalize_z ? 1 : 0;
}

cj_status cj_evaluate(const cj_eval_config* cfg, int include_timings,
                      char** report_json) {
  return guarded([&] {
    require(report_json != nullptr, "null argument");
    const auto config = to_config(cfg);
    require(!config.real_path.empty() && !config.gen_path.empty(),
            "real_path and gen_path are required");
    const auto report = cloudjudge::evaluate_files(config);
    *report_json = dup_string(cloudjudge::to_json(report, include_timings != 0));
  });
}

cj_status cj_baseline(const cj_eval_config* cfg, char** report_json) {
  return guarded([&] {
    require(report_json != nullptr, "null argument");
    const auto config = to_config(cfg);
    require(!config.real_path.empty(), "real_path is required");
    const auto real = cloudjudge::read_clouds(config.real_path);
    *report_json =
        dup_string(cloudjudge::to_json(cloudjudge::run_baseline(real, config)));
  });
}

cj_status cj_render(const cj_sample* sample, long index, size_t resolution,
                    double half_width, char** grid_csv) {
  return guarded([&] {
    require(sample != nullptr && grid_csv != nullptr, "null argument");
    std::optional<std::size_t> which;
    if (index >= 0) which = static_cast<std::size_t>(index);
    const auto image =
        cloudjudge::render(sample->sample, which, resolution, half_width);
    *grid_csv = dup_string(cloudjudge::image_csv(image));
  });
}

}  // extern "C"
