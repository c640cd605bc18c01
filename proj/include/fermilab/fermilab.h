/*
 * Copyright 2026 The fermilab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#ifndef FERMILAB_FERMILAB_H_
#define FERMILAB_FERMILAB_H_

/* C interface of libfermilab. Every call returns an fl_status; on failure
 * fl_last_error() describes the problem for the calling thread. Handles are
 * opaque and owned by the caller until passed to the matching _free. */

#include <stddef.h>

#if defined(_WIN32)
#define FL_API __declspec(dllexport)
#else
#define FL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fl_status {
    FL_OK = 0,
    FL_ERR_INVALID_ARGUMENT = 1,
    FL_ERR_DOMAIN = 2,
    FL_ERR_CONVERGENCE = 3,
    FL_ERR_IO = 4,
    FL_ERR_PARSE = 5,
    FL_ERR_INTERNAL = 9
} fl_status;

typedef enum fl_format { FL_FORMAT_JSON = 0, FL_FORMAT_CSV = 1 } fl_format;

typedef struct fl_stencil fl_stencil;
typedef struct fl_document fl_document;

typedef struct fl_options {
    fl_format format;
    int quad_n; /* 0: command default */
    int box;    /* 0: command default */
} fl_options;

FL_API const char* fl_version(void);

/* Message of the last failed call on this thread; "" when none. */
FL_API const char* fl_last_error(void);

FL_API void fl_options_init(fl_options* opt);

/* Stencils in the JSON layout {"dim","fiber","coeffs":[{"offset","matrix"}]}. */
FL_API fl_status fl_stencil_parse(const char* json, fl_stencil** out);
FL_API fl_status fl_stencil_load(const char* path, fl_stencil** out);
FL_API void fl_stencil_free(fl_stencil* s);
FL_API int fl_stencil_dim(const fl_stencil* s);
FL_API int fl_stencil_fiber(const fl_stencil* s);
FL_API int fl_stencil_degree(const fl_stencil* s);

/* Symbol at z = e^{ik}; out receives fiber*fiber row-major (re, im) pairs. */
FL_API fl_status fl_stencil_symbol(const fl_stencil* s, const double* k, size_t nk,
                                   double* out, size_t out_len);
FL_API fl_status fl_stencil_det(const fl_stencil* s, const double* k, size_t nk,
                                double lambda, double* re, double* im);

/* Unit-circle root count of det(A(z) - lambda) for dim 1 stencils. */
FL_API fl_status fl_multiplicity_1d(const fl_stencil* s, double lambda, int* count,
                                    int* at_edge);

/* Commands. Each produces one JSON document (or CSV when requested). */
FL_API fl_status fl_run_ex1(double alpha, const fl_options* opt, fl_document** out);
FL_API fl_status fl_run_ex2(double a, double b, double c, const fl_options* opt,
                            fl_document** out);
FL_API fl_status fl_run_ex3(double mu, const fl_options* opt, fl_document** out);
FL_API fl_status fl_run_green(const fl_stencil* s, double lambda, const fl_options* opt,
                              fl_document** out);
FL_API fl_status fl_run_bands(const fl_stencil* s, const fl_options* opt, fl_document** out);

/* Coupling identities for K (JSON matrix, NULL for the two-graph K(theta, phi))
 * with L = lambda0 I. variant 1 or 2 also runs the embedding from the Green's
 * function defect at lambda (NaN: one unit below the spectrum); lambda0 NaN
 * centres lambda + 2 lambda0 in the widest band. variant 0 skips it. */
FL_API fl_status fl_run_coupled(const fl_stencil* s, const char* k_json, double theta,
                                double phi, double lambda0, int variant, double lambda,
                                const fl_options* opt, fl_document** out);

/* bc: "dirichlet" or "neumann". */
FL_API fl_status fl_run_grid2d(double mu, const char* bc, const fl_options* opt,
                               fl_document** out);

/* config_json NULL runs the default suite. suite_exit receives 0 iff every
 * case met its expectation. */
FL_API fl_status fl_run_verify(const char* config_json, const fl_options* opt,
                               fl_document** out, int* suite_exit);

FL_API const char* fl_document_text(const fl_document* d);
FL_API size_t fl_document_size(const fl_document* d);
FL_API void fl_document_free(fl_document* d);

#ifdef __cplusplus
}
#endif

#endif /* FERMILAB_FERMILAB_H_ */
