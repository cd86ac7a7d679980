#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ynet/tensor.hpp"

namespace ynet {

// Central finite differences: numeric = (L(v+h) - L(v-h)) / 2h, compared to
// the analytic partial as |a - n| / max(1, |a|, |n|) < tol.
struct FdOptions {
    double h = 1e-5;
    double tol = 1e-4;
    std::size_t max_failures = 8;  // kept in the report for diagnosis
};

struct FdPoint {
    std::string group;
    std::size_t index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double error = 0.0;
};

struct FdGroupStat {
    std::string name;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::size_t failed = 0;
    double max_error = 0.0;
};

struct FdReport {
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::size_t failed = 0;
    double max_error = 0.0;
    FdPoint worst;
    std::vector<FdPoint> failures;
    std::vector<FdGroupStat> groups;

    bool ok() const { return failed == 0 && checked > 0; }
};

// One tensor to sweep: each element is perturbed in place through `value`
// and its measured slope compared against the same element of `analytic`.
// `skip` marks elements sitting on a known nondifferentiability.
struct FdTarget {
    std::string name;
    Tensor* value = nullptr;
    const Tensor* analytic = nullptr;
    std::function<bool(std::size_t)> skip;

    FdTarget(std::string name_, Tensor* value_, const Tensor* analytic_,
             std::function<bool(std::size_t)> skip_ = {})
        : name(std::move(name_)), value(value_), analytic(analytic_),
          skip(std::move(skip_)) {}
};

// Sweeps every element of every target. `loss` must be a deterministic
// function of the target tensors' current contents. Points whose one-sided
// slopes disagree (a kink inside the stencil, detected via the second
// difference) are counted as skipped rather than failed; the analytic value
// has no well-defined oracle there.
FdReport check_gradients(const std::function<double()>& loss,
                         const std::vector<FdTarget>& targets,
                         const FdOptions& opts = {});

struct SuiteResult {
    std::string name;
    FdReport report;
    double seconds = 0.0;
};

// Per-layer scenarios on random small tensors (dims <= 6): conv (k=3, k=5,
// dilated), batchnorm train+eval, maxpool, global average pool, dense, relu,
// sigmoid, dropout, softmax cross-entropy, and the attention bridge wiring.
std::vector<SuiteResult> run_layer_checks(std::uint64_t seed);

struct ModelCheckOptions {
    FdOptions fd;
    std::size_t batch = 2;
    // When set, a constant offset is added to that group's analytic gradient
    // before checking. Self-test hook: the sweep must then report failures.
    std::string corrupt_group;
};

// Whole-network sweep at reduced scale (16x16x3 input, channels 4/8/12/16,
// head 10/5, 3 classes), train mode, loss = softmax cross-entropy.
SuiteResult run_model_check(std::uint64_t seed, const ModelCheckOptions& opts = {});

}  // namespace ynet
