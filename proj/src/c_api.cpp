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

#include "ess/ess.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "ess/agent.hpp"
#include "ess/commands.hpp"
#include "ess/errors.hpp"
#include "ess/game.hpp"
#include "ess/start_states.hpp"
#include "ess/strategies.hpp"

struct ess_state {
  ess::GameState state;
};

struct ess_agent {
  ess::TrainedAgent agent;
};

namespace {

thread_local std::string last_error;

// Maps the exception hierarchy onto status codes.
template <typename F>
ess_status Guard(F&& f) {
  try {
    last_error.clear();
    f();
    return ESS_OK;
  } catch (const ess::ValidationError& e) {
    last_error = e.what();
    return ESS_ERR_VALIDATION;
  } catch (const ess::StateError& e) {
    last_error = e.what();
    return ESS_ERR_STATE;
  } catch (const ess::ArithmeticBoundError& e) {
    last_error = e.what();
    return ESS_ERR_ARITHMETIC;
  } catch (const ess::ConfigError& e) {
    last_error = e.what();
    return ESS_ERR_CONFIG;
  } catch (const ess::RuntimeFailure& e) {
    last_error = e.what();
    return ESS_ERR_RUNTIME;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ESS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return ESS_ERR_INTERNAL;
  }
}

void NotNull(const void* p, const char* what) {
  if (p == nullptr) throw ess::ValidationError(std::string(what) + " is null");
}

std::vector<ess::Count> Counts(int K, const int64_t* v, const char* what) {
  ess::CheckLevelCount(K);
  NotNull(v, what);
  return std::vector<ess::Count>(v, v + K + 1);
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* ess_version(void) { return "1.0.0"; }

const char* ess_last_error(void) { return last_error.c_str(); }

void ess_string_free(char* s) { std::free(s); }

ess_status ess_state_create(int K, const int64_t* counts, ess_state** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = new ess_state{ess::GameState(K, Counts(K, counts, "counts"))};
  });
}

void ess_state_free(ess_state* state) { delete state; }

ess_status ess_state_K(const ess_state* state, int* out) {
  return Guard([&] {
    NotNull(state, "state");
    NotNull(out, "out");
    *out = state->state.K();
  });
}

ess_status ess_state_counts(const ess_state* state, int64_t* counts_out) {
  return Guard([&] {
    NotNull(state, "state");
    NotNull(counts_out, "counts_out");
    const auto& c = state->state.counts();
    std::copy(c.begin(), c.end(), counts_out);
  });
}

ess_status ess_state_potential_units(const ess_state* state, int64_t* out) {
  return Guard([&] {
    NotNull(state, "state");
    NotNull(out, "out");
    *out = ess::Potential(state->state);
  });
}

ess_status ess_state_winner(const ess_state* state, int* out) {
  return Guard([&] {
    NotNull(state, "state");
    NotNull(out, "out");
    const auto w = ess::Winner(state->state);
    *out = !w ? ESS_NO_WINNER : *w == ess::Player::kAttacker ? ESS_ATTACKER : ESS_DEFENDER;
  });
}

ess_status ess_state_apply(ess_state* state, const int64_t* a, const int64_t* b, int destroy) {
  return Guard([&] {
    NotNull(state, "state");
    if (destroy != ESS_SIDE_A && destroy != ESS_SIDE_B) {
      throw ess::ValidationError("destroy must be ESS_SIDE_A or ESS_SIDE_B");
    }
    const int K = state->state.K();
    const ess::Partition p{Counts(K, a, "a"), Counts(K, b, "b")};
    state->state = ess::ApplyMove(state->state, p,
                                  destroy == ESS_SIDE_A ? ess::Side::kA : ess::Side::kB);
  });
}

ess_status ess_prefix_attacker(const ess_state* state, int64_t* a_out, int64_t* b_out) {
  return Guard([&] {
    NotNull(state, "state");
    NotNull(a_out, "a_out");
    NotNull(b_out, "b_out");
    const ess::Partition p = ess::PrefixAttackerPartition(state->state);
    std::copy(p.a.begin(), p.a.end(), a_out);
    std::copy(p.b.begin(), p.b.end(), b_out);
  });
}

ess_status ess_optimal_defender(int K, const int64_t* a, const int64_t* b, int* destroy_out) {
  return Guard([&] {
    NotNull(destroy_out, "destroy_out");
    const ess::Partition p{Counts(K, a, "a"), Counts(K, b, "b")};
    *destroy_out = ess::OptimalDefenderChoice(p) == ess::Side::kA ? ESS_SIDE_A : ESS_SIDE_B;
  });
}

ess_status ess_count_states(int K, int64_t units, char** decimal_out) {
  return Guard([&] {
    NotNull(decimal_out, "decimal_out");
    *decimal_out = Dup(ess::CountStates(K, units).str());
  });
}

ess_status ess_agent_load(const char* path, ess_agent** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new ess_agent{ess::LoadAgent(path)};
  });
}

void ess_agent_free(ess_agent* agent) { delete agent; }

ess_status ess_agent_K(const ess_agent* agent, int* out) {
  return Guard([&] {
    NotNull(agent, "agent");
    NotNull(out, "out");
    *out = agent->agent.K;
  });
}

ess_status ess_agent_defend(const ess_agent* agent, int K, const int64_t* a, const int64_t* b,
                            int* destroy_out) {
  return Guard([&] {
    NotNull(agent, "agent");
    NotNull(destroy_out, "destroy_out");
    if (agent->agent.role == ess::Role::kAttacker) {
      throw ess::ConfigError("an attacker agent cannot defend");
    }
    const ess::Partition p{Counts(K, a, "a"), Counts(K, b, "b")};
    const ess::nn::Vector scores = ess::DefenderScores(agent->agent, p);
    *destroy_out = scores[0] >= scores[1] ? ESS_SIDE_A : ESS_SIDE_B;
  });
}

ess_status ess_run_command(const char* subcommand, const char* config_json, const char* out_dir,
                           int workers, char** summary_out) {
  return Guard([&] {
    NotNull(subcommand, "subcommand");
    NotNull(config_json, "config_json");
    NotNull(out_dir, "out_dir");
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      throw ess::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const ess::CommandResult result = ess::RunCommand(subcommand, config, workers);
    ess::WriteCommandResult(subcommand, result, out_dir);
    if (summary_out != nullptr) *summary_out = Dup(result.summary);
  });
}

ess_status ess_config_from_file(const char* subcommand, const char* path,
                                char** config_json_out) {
  return Guard([&] {
    NotNull(subcommand, "subcommand");
    NotNull(path, "path");
    NotNull(config_json_out, "config_json_out");
    *config_json_out = Dup(ess::ConfigFromFile(subcommand, path).dump());
  });
}

}  // extern "C"
