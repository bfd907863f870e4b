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

/*
 * C interface to the cloudjudge particle-cloud evaluation library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a cj_status; on
 * failure cj_last_error() describes the problem (thread-local, valid until
 * the next call on the same thread). Strings returned through char** are
 * heap allocated and released with cj_string_free().
 */
#ifndef CLOUDJUDGE_CLOUDJUDGE_H_
#define CLOUDJUDGE_CLOUDJUDGE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CLOUDJUDGE_BUILDING_LIBRARY)
#define CJ_API __declspec(dllexport)
#else
#define CJ_API __declspec(dllimport)
#endif
#else
#define CJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the command-line tool. */
typedef enum cj_status {
  CJ_OK = 0,
  CJ_ERR_INTERNAL = 1,
  CJ_ERR_INPUT = 2,     /* bad arguments, validation, parse, missing input */
  CJ_ERR_NUMERICAL = 3, /* solver or numerical failure */
  CJ_ERR_IO = 4
} cj_status;

typedef enum cj_label {
  CJ_LABEL_GLUON = 0,
  CJ_LABEL_LIGHT_QUARK = 1,
  CJ_LABEL_TOP_QUARK = 2,
  CJ_LABEL_TOY = 3,
  CJ_LABEL_OTHER = 4
} cj_label;

typedef struct cj_sample cj_sample;

CJ_API const char* cj_version(void);
CJ_API const char* cj_last_error(void);
/* Error kind name such as "ValidationFailure", or "" after success. */
CJ_API const char* cj_last_error_kind(void);
CJ_API void cj_string_free(char* s);

/* 0 restores the default (CLOUDJUDGE_THREADS, else hardware threads). */
CJ_API void cj_set_thread_cap(unsigned cap);

/* Samples. Binary files use the JNP1 layout; CSV files carry no label. */
CJ_API cj_status cj_sample_read(const char* path, cj_sample** out);
CJ_API cj_status cj_sample_read_csv(const char* path, cj_label label,
                                    cj_sample** out);
CJ_API cj_status cj_sample_write(const cj_sample* sample, const char* path);
CJ_API cj_status cj_sample_write_csv(const cj_sample* sample, const char* path);
CJ_API void cj_sample_free(cj_sample* sample);
CJ_API size_t cj_sample_size(const cj_sample* sample);
CJ_API size_t cj_sample_capacity(const cj_sample* sample);
CJ_API cj_label cj_sample_label(const cj_sample* sample);
/* out = {eta_rel, phi_rel, pt_rel, mask} */
CJ_API cj_status cj_sample_particle(const cj_sample* sample, size_t jet,
                                    size_t slot, double out[4]);
CJ_API cj_status cj_jet_mass(const cj_sample* sample, size_t jet,
                             double* mass);

typedef struct cj_toy_config {
  size_t n_jets;
  size_t max_particles;
  double split_prob;
  double angle_scale;
  int prongs;
  uint64_t seed;
} cj_toy_config;

CJ_API void cj_toy_config_default(cj_toy_config* cfg);
CJ_API cj_status cj_toygen(const cj_toy_config* cfg, cj_sample** out);

/* Energy mover's distance between jet ia of a and jet ib of b. When
 * plan_csv is non-NULL it receives the flow matrix as CSV. */
CJ_API cj_status cj_emd(const cj_sample* a, size_t ia, const cj_sample* b,
                        size_t ib, double radius, double* distance,
                        char** plan_csv);

typedef struct cj_eval_config {
  const char* real_path;
  const char* gen_path;
  const char* acts_real_path; /* NULL: use the surrogate */
  const char* acts_gen_path;  /* NULL: use the surrogate */
  int no_fpnd;
  uint64_t seed;
  size_t w1_batch;
  size_t w1_nbatches;
  size_t cov_subsample;
  size_t cov_nbatches;
  size_t fpnd_n;
  double emd_radius;
  double efp_beta;
  int efp_normalize;
} cj_eval_config;

CJ_API void cj_eval_config_default(cj_eval_config* cfg);

/* Full metric report as JSON. With include_timings == 0 the wall-clock
 * block is omitted and the output is byte-reproducible. */
CJ_API cj_status cj_evaluate(const cj_eval_config* cfg, int include_timings,
                             char** report_json);

/* Real-vs-real W1 baseline of cfg->real_path as JSON. */
CJ_API cj_status cj_baseline(const cj_eval_config* cfg, char** report_json);

/* Jet image of one jet (index >= 0) or the sample mean (index < 0), as a
 * CSV matrix with one row per eta bin. */
CJ_API cj_status cj_render(const cj_sample* sample, long index,
                           size_t resolution, double half_width,
                           char** grid_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CLOUDJUDGE_CLOUDJUDGE_H_ */
