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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ess/encoding.hpp"
#include "ess/errors.hpp"
#include "ess/rl.hpp"

namespace ess {
namespace {

// Independent streams carved out of one config seed.
enum Stream : std::uint64_t {
  kInitStream = 0,
  kExploreStream = 1,
  kEnvStream = 2,
  kEvalStream = 3,
};

void CheckFinite(const nn::Network& net, double loss, const char* who) {
  if (!std::isfinite(loss) || !net.AllFinite()) {
    throw RuntimeFailure(std::string(who) +
                         " diverged: non-finite loss or parameters");
  }
}

nn::Matrix Columns(const std::vector<nn::Vector>& xs,
                   const std::vector<std::size_t>& idx) {
  nn::Matrix m(xs.front().size(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) m.col(j) = xs[idx[j]];
  return m;
}

// ---------------------------------------------------------------------------
// Value learner: epsilon-greedy Q-learning with uniform experience replay and
// a target network synced every target_sync_interval steps.

class ReplayBuffer {
 public:
  ReplayBuffer(std::int64_t capacity, int obs_dim)
      : obs_(obs_dim, capacity),
        next_obs_(obs_dim, capacity),
        action_(capacity),
        reward_(capacity),
        done_(capacity) {}

  void Add(const nn::Vector& obs, int action, double reward,
           const nn::Vector& next_obs, bool done) {
    const Eigen::Index i = next_;
    obs_.col(i) = obs;
    next_obs_.col(i) = next_obs;
    action_[i] = action;
    reward_[i] = reward;
    done_[i] = done;
    next_ = (next_ + 1) % obs_.cols();
    size_ = std::min<Eigen::Index>(size_ + 1, obs_.cols());
  }

  Eigen::Index size() const { return size_; }

  struct Batch {
    nn::Matrix obs, next_obs;
    std::vector<int> action;
    nn::Vector reward, not_done;
  };

  Batch Sample(int n, Rng& rng) const {
    Batch b{nn::Matrix(obs_.rows(), n), nn::Matrix(obs_.rows(), n),
            std::vector<int>(n), nn::Vector(n), nn::Vector(n)};
    for (int j = 0; j < n; ++j) {
      const auto i = static_cast<Eigen::Index>(UniformIndex(rng, size_));
      b.obs.col(j) = obs_.col(i);
      b.next_obs.col(j) = next_obs_.col(i);
      b.action[j] = action_[i];
      b.reward[j] = reward_[i];
      b.not_done[j] = done_[i] ? 0.0 : 1.0;
    }
    return b;
  }

 private:
  nn::Matrix obs_, next_obs_;
  std::vector<int> action_;
  std::vector<double> reward_;
  std::vector<char> done_;
  Eigen::Index next_ = 0;
  Eigen::Index size_ = 0;
};

class ValueLearner : public Learner {
 public:
  ValueLearner(const TrainConfig& config, int obs_dim, int num_actions)
      : Learner(config),
        explore_rng_(DeriveSeed(config.seed, kExploreStream)),
        online_(MakeNet(config, obs_dim, num_actions)),
        target_(online_),
        adam_(online_, config.learning_rate),
        replay_(config.replay_capacity, obs_dim) {}

  void Train(Env& env, std::int64_t steps, Rng& env_rng,
             const StepHook& hook) override {
    nn::Vector obs = env.Reset(env_rng);
    for (std::int64_t s = 0; s < steps; ++s) {
      int action;
      if (Bernoulli(explore_rng_, Epsilon())) {
        action = static_cast<int>(UniformIndex(explore_rng_, env.num_actions()));
      } else {
        action = ArgmaxRandomTies(online_.Forward(obs), explore_rng_);
      }
      StepResult r = env.Step(action, env_rng);
      replay_.Add(obs, action, r.reward, r.obs, r.done);
      obs = r.done ? env.Reset(env_rng) : std::move(r.obs);
      ++steps_done_;
      if (steps_done_ >= config_.learning_starts &&
          steps_done_ % config_.train_every == 0 &&
          replay_.size() >= config_.batch_size) {
        Update();
      }
      if (steps_done_ % config_.target_sync_interval == 0) target_ = online_;
      if (hook) hook(steps_done_);
    }
  }

  const nn::Network& policy_network() const override { return online_; }
  OutputKind output_kind() const override { return OutputKind::kActionValues; }

 private:
  static nn::Network MakeNet(const TrainConfig& config, int obs_dim, int num_actions) {
    Rng init(DeriveSeed(config.seed, kInitStream));
    return nn::Network(config.arch, obs_dim, num_actions, init);
  }

  double Epsilon() const {
    const double horizon =
        std::max(1.0, config_.epsilon_decay_fraction * config_.total_steps);
    const double t = std::min(1.0, steps_done_ / horizon);
    return config_.epsilon_start + t * (config_.epsilon_end - config_.epsilon_start);
  }

  void Update() {
    const auto batch = replay_.Sample(config_.batch_size, explore_rng_);
    const nn::Matrix next_q = target_.Forward(batch.next_obs);
    nn::Vector y(config_.batch_size);
    for (int j = 0; j < config_.batch_size; ++j) {
      y[j] = batch.reward[j] +
             config_.discount * batch.not_done[j] * next_q.col(j).maxCoeff();
    }
    nn::Network::Cache cache;
    const nn::Matrix q = online_.Forward(batch.obs, cache);
    nn::Matrix d_q;
    const double loss = nn::MaskedHuberLoss(q, batch.action, y, &d_q);
    adam_.Step(online_, online_.Backward(cache, d_q));
    CheckFinite(online_, loss, "value learner");
  }

  Rng explore_rng_;
  nn::Network online_;
  nn::Network target_;
  nn::Adam adam_;
  ReplayBuffer replay_;
};

// ---------------------------------------------------------------------------
// Shared machinery for the two policy-gradient learners: a softmax policy
// network, a separate value network of the same architecture, and on-policy
// rollouts.

class PolicyLearnerBase : public Learner {
 public:
  PolicyLearnerBase(const TrainConfig& config, int obs_dim, int num_actions)
      : Learner(config),
        explore_rng_(DeriveSeed(config.seed, kExploreStream)),
        policy_(MakeNet(config, obs_dim, num_actions, 0)),
        value_(MakeNet(config, obs_dim, 1, 1)),
        policy_adam_(policy_, config.learning_rate),
        value_adam_(value_, config.learning_rate) {}

  void Train(Env& env, std::int64_t steps, Rng& env_rng,
             const StepHook& hook) override {
    nn::Vector obs = env.Reset(env_rng);
    std::int64_t left = steps;
    while (left > 0) {
      Rollout ro;
      const std::int64_t n = std::min<std::int64_t>(config_.rollout_steps, left);
      for (std::int64_t s = 0; s < n; ++s) {
        const nn::Vector probs = nn::Softmax(policy_.Forward(obs));
        const int action = Sample(probs);
        StepResult r = env.Step(action, env_rng);
        ro.obs.push_back(obs);
        ro.action.push_back(action);
        ro.log_prob.push_back(std::log(std::max(probs[action], 1e-300)));
        ro.reward.push_back(r.reward);
        ro.done.push_back(r.done);
        obs = r.done ? env.Reset(env_rng) : std::move(r.obs);
        ++steps_done_;
        if (hook) hook(steps_done_);
      }
      // Bootstrap an unfinished final episode with the value estimate.
      ro.bootstrap = ro.done.back() ? 0.0 : value_.Forward(obs)[0];
      Update(ro);
      left -= n;
    }
  }

  const nn::Network& policy_network() const override { return policy_; }
  OutputKind output_kind() const override { return OutputKind::kLogits; }

 protected:
  struct Rollout {
    std::vector<nn::Vector> obs;
    std::vector<int> action;
    std::vector<double> log_prob;
    std::vector<double> reward;
    std::vector<char> done;
    double bootstrap = 0.0;
  };

  virtual void Update(const Rollout& ro) = 0;

  std::vector<double> Returns(const Rollout& ro) const {
    std::vector<double> g(ro.reward.size());
    double next = ro.bootstrap;
    for (std::size_t t = ro.reward.size(); t-- > 0;) {
      if (ro.done[t]) next = 0.0;
      next = ro.reward[t] + config_.discount * next;
      g[t] = next;
    }
    return g;
  }

  // Policy-loss gradient w.r.t. the logits plus the entropy bonus term.
  // `weight[j]` multiplies d(-log pi(a_j))/d(logits).
  nn::Matrix PolicyGradient(const nn::Matrix& probs, const std::vector<int>& actions,
                            const std::vector<double>& weight) const {
    const Eigen::Index n = probs.cols();
    nn::Matrix d = probs;
    for (Eigen::Index j = 0; j < n; ++j) {
      d.col(j) *= weight[j];
      d(actions[j], j) -= weight[j];
      // Entropy H = -sum p log p; dH/dz_k = -p_k (log p_k + H).
      double h = 0.0;
      for (Eigen::Index k = 0; k < probs.rows(); ++k) {
        const double p = probs(k, j);
        if (p > 0) h -= p * std::log(p);
      }
      for (Eigen::Index k = 0; k < probs.rows(); ++k) {
        const double p = probs(k, j);
        const double lp = p > 0 ? std::log(p) : 0.0;
        d(k, j) += config_.entropy_coef * p * (lp + h);
      }
    }
    return d / static_cast<double>(n);
  }

  void FitValue(const nn::Matrix& x, const nn::Vector& targets) {
    nn::Network::Cache cache;
    const nn::Matrix v = value_.Forward(x, cache);
    nn::Matrix d_v;
    const double loss = nn::MeanSquaredError(v, targets, &d_v);
    d_v *= config_.value_coef;
    value_adam_.Step(value_, value_.Backward(cache, d_v));
    CheckFinite(value_, loss, "value baseline");
  }

  Rng explore_rng_;
  nn::Network policy_;
  nn::Network value_;
  nn::Adam policy_adam_;
  nn::Adam value_adam_;

 private:
  static nn::Network MakeNet(const TrainConfig& config, int obs_dim, int out,
                             std::uint64_t which) {
    Rng init(DeriveSeed(DeriveSeed(config.seed, kInitStream), which));
    return nn::Network(config.arch, obs_dim, out, init);
  }

  int Sample(const nn::Vector& probs) {
    double u = UniformUnit(explore_rng_);
    for (Eigen::Index k = 0; k + 1 < probs.size(); ++k) {
      if (u < probs[k]) return static_cast<int>(k);
      u -= probs[k];
    }
    return static_cast<int>(probs.size() - 1);
  }
};

// Clipped-surrogate policy gradient. Advantages are discounted returns minus
// the value baseline, normalized per batch.
class PolicyGradLearner : public PolicyLearnerBase {
 public:
  using PolicyLearnerBase::PolicyLearnerBase;

 private:
  void Update(const Rollout& ro) override {
    const std::size_t n = ro.obs.size();
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    const nn::Matrix x_all = Columns(ro.obs, all);
    const nn::Matrix v_all = value_.Forward(x_all);
    const std::vector<double> g = Returns(ro);
    std::vector<double> adv(n);
    for (std::size_t t = 0; t < n; ++t) adv[t] = g[t] - v_all(0, t);
    if (n > 1) {
      const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
      double var = 0.0;
      for (double a : adv) var += (a - mean) * (a - mean);
      const double sd = std::sqrt(var / n);
      for (double& a : adv) a = (a - mean) / (sd + 1e-8);
    }
    const double lo = 1.0 - config_.clip_ratio;
    const double hi = 1.0 + config_.clip_ratio;
    std::vector<std::size_t> order = all;
    for (int epoch = 0; epoch < config_.epochs_per_batch; ++epoch) {
      for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[UniformIndex(explore_rng_, i)]);
      }
      for (std::size_t start = 0; start < n; start += config_.minibatch_size) {
        const std::size_t end = std::min(n, start + config_.minibatch_size);
        const std::vector<std::size_t> idx(order.begin() + start, order.begin() + end);
        const nn::Matrix x = Columns(ro.obs, idx);
        nn::Network::Cache cache;
        const nn::Matrix logits = policy_.Forward(x, cache);
        const nn::Matrix probs = nn::SoftmaxColumns(logits);
        std::vector<int> actions(idx.size());
        std::vector<double> weight(idx.size());
        double loss = 0.0;
        nn::Vector targets(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const std::size_t t = idx[j];
          actions[j] = ro.action[t];
          targets[j] = g[t];
          const double ratio =
              std::exp(std::log(std::max(probs(actions[j], j), 1e-300)) - ro.log_prob[t]);
          const double a = adv[t];
          const double clipped = std::clamp(ratio, lo, hi);
          loss -= std::min(ratio * a, clipped * a);
          // The unclipped branch is active unless clipping lowers the
          // objective; only then does the ratio carry gradient.
          const bool active = ratio * a <= clipped * a;
          // d(-ratio*a)/dz = -a * ratio * (onehot - p) = a*ratio*(p - onehot).
          weight[j] = active ? a * ratio : 0.0;
        }
        const nn::Matrix d_logits = PolicyGradient(probs, actions, weight);
        policy_adam_.Step(policy_, policy_.Backward(cache, d_logits));
        CheckFinite(policy_, loss, "policy gradient");
        FitValue(x, targets);
      }
    }
  }
};

// Synchronous single-worker advantage actor-critic: one gradient step per
// rollout of rollout_steps transitions, n-step bootstrapped returns.
class ActorCriticLearner : public PolicyLearnerBase {
 public:
  using PolicyLearnerBase::PolicyLearnerBase;

 private:
  void Update(const Rollout& ro) override {
    const std::size_t n = ro.obs.size();
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    const nn::Matrix x = Columns(ro.obs, all);
    const std::vector<double> g = Returns(ro);
    const nn::Matrix v = value_.Forward(x);
    nn::Network::Cache cache;
    const nn::Matrix logits = policy_.Forward(x, cache);
    const nn::Matrix probs = nn::SoftmaxColumns(logits);
    std::vector<double> weight(n);
    nn::Vector targets(static_cast<Eigen::Index>(n));
    double loss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      weight[t] = g[t] - v(0, t);
      targets[t] = g[t];
      loss -= weight[t] * std::log(std::max(probs(ro.action[t], t), 1e-300));
    }
    const nn::Matrix d_logits = PolicyGradient(probs, ro.action, weight);
    policy_adam_.Step(policy_, policy_.Backward(cache, d_logits));
    CheckFinite(policy_, loss, "actor-critic");
    FitValue(x, targets);
  }
};

// ---------------------------------------------------------------------------
// Random search over flattened parameters: antithetic Gaussian directions,
// update along the best top_fraction of them scaled by the reward spread.

class RandomSearchLearner : public Learner {
 public:
  RandomSearchLearner(const TrainConfig& config, int obs_dim, int num_actions)
      : Learner(config), explore_rng_(DeriveSeed(config.seed, kExploreStream)) {
    Rng init(DeriveSeed(config.seed, kInitStream));
    net_ = nn::Network(config.arch, obs_dim, num_actions, init);
  }

  void Train(Env& env, std::int64_t steps, Rng& env_rng,
             const StepHook& hook) override {
    const std::int64_t stop = steps_done_ + steps;
    const nn::Vector theta0 = net_.Flatten();
    nn::Vector theta = theta0;
    const int dirs = config_.num_directions;
    const int top = std::max(1, static_cast<int>(std::lround(config_.top_fraction * dirs)));
    nn::Network probe = net_;
    bool cut_short = false;  // budget ran out inside this iteration
    auto rollouts = [&](const nn::Vector& params, std::uint64_t episode_seed) {
      probe.Unflatten(params);
      double total = 0.0;
      for (int e = 0; e < config_.episodes_per_direction; ++e) {
        if (steps_done_ >= stop) {
          cut_short = true;
          break;
        }
        Rng rng(DeriveSeed(episode_seed, e));
        nn::Vector obs = env.Reset(rng);
        for (;;) {
          StepResult r = env.Step(ArgmaxRandomTies(probe.Forward(obs), rng), rng);
          ++steps_done_;
          if (hook) hook(steps_done_);
          if (r.done) {
            total += r.reward;
            break;
          }
          obs = std::move(r.obs);
        }
      }
      return total / config_.episodes_per_direction;
    };
    while (steps_done_ < stop) {
      std::vector<nn::Vector> delta(dirs);
      std::vector<double> plus(dirs), minus(dirs);
      const std::uint64_t episode_seed = env_rng();
      for (int d = 0; d < dirs; ++d) {
        delta[d].resize(theta.size());
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
          delta[d][i] = StandardNormal(explore_rng_);
        }
      }
      for (int d = 0; d < dirs; ++d) {
        plus[d] = rollouts(theta + config_.perturb_std * delta[d], episode_seed);
        minus[d] = rollouts(theta - config_.perturb_std * delta[d], episode_seed);
      }
      if (cut_short) break;
      std::vector<int> order(dirs);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::max(plus[a], minus[a]) > std::max(plus[b], minus[b]);
      });
      double mean = 0.0;
      for (int k = 0; k < top; ++k) mean += plus[order[k]] + minus[order[k]];
      mean /= 2 * top;
      double var = 0.0;
      for (int k = 0; k < top; ++k) {
        var += (plus[order[k]] - mean) * (plus[order[k]] - mean) +
               (minus[order[k]] - mean) * (minus[order[k]] - mean);
      }
      const double sd = std::sqrt(var / (2 * top));
      if (sd > 0 && config_.perturb_std > 0) {
        nn::Vector step = nn::Vector::Zero(theta.size());
        for (int k = 0; k < top; ++k) {
          step += (plus[order[k]] - minus[order[k]]) * delta[order[k]];
        }
        theta += config_.learning_rate / (top * sd) * step;
        net_.Unflatten(theta);
        if (!net_.AllFinite()) throw RuntimeFailure("random search diverged");
      }
    }
  }

  const nn::Network& policy_network() const override { return net_; }
  OutputKind output_kind() const override { return OutputKind::kLogits; }

 private:
  Rng explore_rng_;
  nn::Network net_;
};

}  // namespace

std::unique_ptr<Learner> Learner::Create(const TrainConfig& config, int obs_dim,
                                         int num_actions) {
  switch (config.algorithm) {
    case Algorithm::kValueLearner:
      return std::make_unique<ValueLearner>(config, obs_dim, num_actions);
    case Algorithm::kPolicyGrad:
      return std::make_unique<PolicyGradLearner>(config, obs_dim, num_actions);
    case Algorithm::kActorCritic:
      return std::make_unique<ActorCriticLearner>(config, obs_dim, num_actions);
    case Algorithm::kRandomSearch:
      return std::make_unique<RandomSearchLearner>(config, obs_dim, num_actions);
  }
  throw ConfigError("unknown algorithm");
}

TrainedAgent Learner::Snapshot() const {
  TrainedAgent agent;
  agent.net = policy_network();
  agent.role = config_.role;
  agent.K = config_.network_K();
  agent.output = output_kind();
  agent.normalize_obs = config_.normalize_obs;
  agent.algorithm = AlgorithmName(config_.algorithm);
  agent.config_hash = ConfigHash(config_);
  return agent;
}

}  // namespace ess
