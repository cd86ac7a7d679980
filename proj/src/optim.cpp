#include "ynet/optim.hpp"

#include <cmath>
#include <numbers>

#include "ynet/errors.hpp"

namespace ynet {

void adam_step(AdamState& state, const std::vector<AdamParam>& params) {
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

    for (const auto& p : params) {
        if (!p.value || !p.grad)
            throw Error("adam_step: parameter " + p.name + " is incomplete");
        if (!p.value->same_shape(*p.grad))
            throw Error("adam_step: gradient shape " + shape_str(p.grad->shape()) +
                        " does not match parameter " + p.name + " " +
                        shape_str(p.value->shape()));
        if (!p.grad->all_finite())
            throw NumericError("adam_step: non-finite gradient for " + p.name);

        auto [mit, fresh_m] = state.m.try_emplace(p.name, Tensor(p.value->shape()));
        auto [vit, fresh_v] = state.v.try_emplace(p.name, Tensor(p.value->shape()));
        (void)fresh_m;
        (void)fresh_v;
        Tensor& m = mit->second;
        Tensor& v = vit->second;
        if (!m.same_shape(*p.value) || !v.same_shape(*p.value))
            throw Error("adam_step: stored moments for " + p.name +
                        " do not match the parameter shape");

        double* pm = m.data();
        double* pv = v.data();
        double* pp = p.value->data();
        const double* pg = p.grad->data();
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double g = pg[i];
            pm[i] = state.beta1 * pm[i] + (1.0 - state.beta1) * g;
            pv[i] = state.beta2 * pv[i] + (1.0 - state.beta2) * g * g;
            const double mhat = pm[i] / bc1;
            const double vhat = pv[i] / bc2;
            pp[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

std::vector<std::pair<std::string, Tensor>> adam_records(const AdamState& state) {
    std::vector<std::pair<std::string, Tensor>> out;
    out.emplace_back("adam.t", Tensor::scalar(static_cast<double>(state.t)));
    for (const auto& [name, t] : state.m) out.emplace_back("adam.m." + name, t);
    for (const auto& [name, t] : state.v) out.emplace_back("adam.v." + name, t);
    return out;
}

void restore_adam(AdamState& state,
                  const std::vector<std::pair<std::string, Tensor>>& records) {
    for (const auto& [name, t] : records) {
        if (name == "adam.t") {
            if (t.rank() != 0) throw IoError("restore_adam: adam.t must be a scalar");
            state.t = static_cast<std::uint64_t>(t.data()[0]);
        } else if (name.starts_with("adam.m.")) {
            state.m[name.substr(7)] = t;
        } else if (name.starts_with("adam.v.")) {
            state.v[name.substr(7)] = t;
        }
    }
}

double sgdr_lr(const SgdrSchedule& sched, double epoch) {
    if (epoch < 0.0) throw Error("sgdr_lr: negative epoch " + std::to_string(epoch));
    if (!(sched.eta_min < sched.eta_max))
        throw Error("sgdr_lr: eta_min must be below eta_max");
    if (sched.period < 1.0 || sched.t_mult < 1.0)
        throw Error("sgdr_lr: period must be >= 1 and t_mult >= 1");

    double t = epoch;
    double ti = sched.period;
    if (sched.t_mult == 1.0) {
        t = std::fmod(epoch, ti);
    } else {
        while (t >= ti) {
            t -= ti;
            ti *= sched.t_mult;
        }
    }
    const double cosine = std::cos(std::numbers::pi * t / ti);
    return sched.eta_min + 0.5 * (sched.eta_max - sched.eta_min) * (1.0 + cosine);
}

}  // namespace ynet
