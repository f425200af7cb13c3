// Copyright 2026 The ESS Games Authors.
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

/* C interface to the ESS game library.
 *
 * Every function returns an ess_status. On failure a one-line reason is
 * available from ess_last_error() until the next call on the same thread.
 * Strings handed out by the library are freed with ess_string_free().
 * Piece counts are passed as arrays of K+1 int64 values, level 0 first. */

#ifndef ESS_ESS_H_
#define ESS_ESS_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define ESS_API __attribute__((visibility("default")))
#else
#define ESS_API
#endif

typedef enum {
  ESS_OK = 0,
  ESS_ERR_VALIDATION = 1, /* malformed input: bad partition, bad counts */
  ESS_ERR_STATE = 2,      /* operation not allowed in this state */
  ESS_ERR_ARITHMETIC = 3, /* exact arithmetic would overflow */
  ESS_ERR_CONFIG = 4,     /* bad configuration or missing file */
  ESS_ERR_RUNTIME = 5,    /* failure while running, e.g. divergence */
  ESS_ERR_INTERNAL = 6
} ess_status;

typedef enum { ESS_SIDE_A = 0, ESS_SIDE_B = 1 } ess_side;
typedef enum { ESS_NO_WINNER = -1, ESS_ATTACKER = 0, ESS_DEFENDER = 1 } ess_winner;

typedef struct ess_state ess_state;
typedef struct ess_agent ess_agent;

ESS_API const char* ess_version(void);
ESS_API const char* ess_last_error(void);
ESS_API void ess_string_free(char* s);

/* Game states. */
ESS_API ess_status ess_state_create(int K, const int64_t* counts, ess_state** out);
ESS_API void ess_state_free(ess_state* state);
ESS_API ess_status ess_state_K(const ess_state* state, int* out);
ESS_API ess_status ess_state_counts(const ess_state* state, int64_t* counts_out);
/* Potential in units of 2^-K. */
ESS_API ess_status ess_state_potential_units(const ess_state* state, int64_t* out);
ESS_API ess_status ess_state_winner(const ess_state* state, int* out);
/* Destroys one side of a partition of the state and advances the survivors. */
ESS_API ess_status ess_state_apply(ess_state* state, const int64_t* a, const int64_t* b,
                                   int destroy);

/* Strategies. */
ESS_API ess_status ess_prefix_attacker(const ess_state* state, int64_t* a_out,
                                       int64_t* b_out);
ESS_API ess_status ess_optimal_defender(int K, const int64_t* a, const int64_t* b,
                                        int* destroy_out);
/* Number of states with exactly `units` potential units, as a decimal string. */
ESS_API ess_status ess_count_states(int K, int64_t units, char** decimal_out);

/* Trained agents. */
ESS_API ess_status ess_agent_load(const char* path, ess_agent** out);
ESS_API void ess_agent_free(ess_agent* agent);
ESS_API ess_status ess_agent_K(const ess_agent* agent, int* out);
/* Greedy defender choice; exact ties go to A. */
ESS_API ess_status ess_agent_defend(const ess_agent* agent, int K, const int64_t* a,
                                    const int64_t* b, int* destroy_out);

/* Runs a subcommand (play, train, selfplay, multiagent, eval, analyze,
 * enumerate, dataset) on a JSON config and writes its outputs plus
 * manifest.json into out_dir. summary_out, if not NULL, receives a short
 * report. */
ESS_API ess_status ess_run_command(const char* subcommand, const char* config_json,
                                   const char* out_dir, int workers, char** summary_out);
/* Reads a config file, or the config inside a manifest for `subcommand`,
 * as a JSON string. */
ESS_API ess_status ess_config_from_file(const char* subcommand, const char* path,
                                        char** config_json_out);

#ifdef __cplusplus
}
#endif

#endif /* ESS_ESS_H_ */
