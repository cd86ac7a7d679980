#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ynet/tensor.hpp"

namespace ynet {

// Adam with the standard defaults. First and second moments are allocated
// lazily per parameter name on the first step.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t t = 0;
    std::map<std::string, Tensor> m, v;
};

struct AdamParam {
    std::string name;
    Tensor* value = nullptr;
    const Tensor* grad = nullptr;
};

// One update: t increments first, then per parameter
//   m <- b1*m + (1-b1)*g,  v <- b2*v + (1-b2)*g^2,
//   p <- p - lr * (m/(1-b1^t)) / (sqrt(v/(1-b2^t)) + eps).
// Non-finite gradients raise NumericError naming the parameter.
void adam_step(AdamState& state, const std::vector<AdamParam>& params);

// Optimizer state as named tensor records ("adam.m.<param>", "adam.v.<param>",
// "adam.t") for embedding in a training-resume checkpoint.
std::vector<std::pair<std::string, Tensor>> adam_records(const AdamState& state);
// Restores moments and step count from records; entries with other prefixes
// are ignored so a mixed record list can be passed straight through.
void restore_adam(AdamState& state,
                  const std::vector<std::pair<std::string, Tensor>>& records);

// Cosine annealing with warm restarts. Emitted lr stays in [eta_min, eta_max];
// each period starts at eta_max and decays toward eta_min, restarting after
// `period` epochs (period multiplied by t_mult after each restart).
struct SgdrSchedule {
    double eta_max = 1e-3;
    double eta_min = 1e-6;
    double period = 50.0;
    double t_mult = 1.0;
};

double sgdr_lr(const SgdrSchedule& sched, double epoch);

}  // namespace ynet
