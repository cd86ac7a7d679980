#include "ynet/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ynet/errors.hpp"
#include "ynet/layers.hpp"
#include "ynet/model.hpp"
#include "ynet/rng.hpp"

namespace ynet {

FdReport check_gradients(const std::function<double()>& loss,
                         const std::vector<FdTarget>& targets, const FdOptions& opts) {
    FdReport r;
    const double base = loss();
    for (const auto& t : targets) {
        if (!t.value || !t.analytic)
            throw Error("check_gradients: target " + t.name + " is incomplete");
        if (!t.value->same_shape(*t.analytic))
            throw Error("check_gradients: analytic gradient for " + t.name +
                        " has shape " + shape_str(t.analytic->shape()) + ", value has " +
                        shape_str(t.value->shape()));
        FdGroupStat gs;
        gs.name = t.name;
        for (std::size_t i = 0; i < t.value->size(); ++i) {
            if (t.skip && t.skip(i)) {
                ++gs.skipped;
                continue;
            }
            double& v = t.value->data()[i];
            const double saved = v;
            v = saved + opts.h;
            const double up = loss();
            v = saved - opts.h;
            const double down = loss();
            v = saved;

            const double numeric = (up - down) / (2.0 * opts.h);
            const double analytic = t.analytic->data()[i];
            const double scale =
                std::max({1.0, std::fabs(analytic), std::fabs(numeric)});
            const double err = std::fabs(analytic - numeric) / scale;

            if (err >= opts.tol) {
                // Disagreeing one-sided slopes mean the stencil straddles a
                // kink; central differences are not an oracle there.
                const double jump = std::fabs(up - 2.0 * base + down) / opts.h;
                if (jump >= 1.2 * std::fabs(analytic - numeric) &&
                    jump > 2.0 * opts.tol * scale) {
                    ++gs.skipped;
                    continue;
                }
                ++gs.failed;
                if (r.failures.size() < opts.max_failures)
                    r.failures.push_back({t.name, i, analytic, numeric, err});
            }
            ++gs.checked;
            if (err > gs.max_error) gs.max_error = err;
            if (err > r.max_error) {
                r.max_error = err;
                r.worst = {t.name, i, analytic, numeric, err};
            }
        }
        r.checked += gs.checked;
        r.skipped += gs.skipped;
        r.failed += gs.failed;
        r.groups.push_back(std::move(gs));
    }
    return r;
}

namespace {

Tensor rand_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(lo, hi);
    return t;
}

// Uniform magnitudes in [0.05, 1] with random sign: keeps relu/maxpool
// arguments clear of the kink at 0 by much more than the stencil width.
Tensor rand_signed(Shape shape, Rng& rng) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double mag = rng.uniform(0.05, 1.0);
        t.data()[i] = rng.bernoulli(0.5) ? mag : -mag;
    }
    return t;
}

double wsum(const Tensor& t, const Tensor& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += t.data()[i] * w.data()[i];
    return s;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    const std::size_t rows = a.dim(0) * a.dim(1) * a.dim(2);
    const std::size_t ca = a.dim(3), cb = b.dim(3);
    Tensor out({a.dim(0), a.dim(1), a.dim(2), ca + cb});
    for (std::size_t i = 0; i < rows; ++i) {
        std::copy(a.data() + i * ca, a.data() + (i + 1) * ca, out.data() + i * (ca + cb));
        std::copy(b.data() + i * cb, b.data() + (i + 1) * cb,
                  out.data() + i * (ca + cb) + ca);
    }
    return out;
}

std::pair<Tensor, Tensor> split_channels(const Tensor& x, std::size_t ca) {
    const std::size_t rows = x.dim(0) * x.dim(1) * x.dim(2);
    const std::size_t c = x.dim(3), cb = c - ca;
    Tensor a({x.dim(0), x.dim(1), x.dim(2), ca});
    Tensor b({x.dim(0), x.dim(1), x.dim(2), cb});
    for (std::size_t i = 0; i < rows; ++i) {
        std::copy(x.data() + i * c, x.data() + i * c + ca, a.data() + i * ca);
        std::copy(x.data() + i * c + ca, x.data() + (i + 1) * c, b.data() + i * cb);
    }
    return {std::move(a), std::move(b)};
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

SuiteResult run_suite(const std::string& name, const std::function<double()>& loss,
                      const std::vector<FdTarget>& targets) {
    const auto t0 = Clock::now();
    FdReport rep = check_gradients(loss, targets);
    return {name, std::move(rep), seconds_since(t0)};
}

SuiteResult conv_suite(const std::string& name, std::uint64_t seed, std::size_t k,
                       std::size_t dilation, Shape xshape, std::size_t cout) {
    Rng rng(seed, Rng::stream(name));
    Tensor x = rand_tensor(xshape, rng);
    ConvParams p = make_conv(k, xshape[3], cout, dilation);
    p.weights = rand_tensor(p.weights.shape(), rng);
    p.bias = rand_tensor(p.bias.shape(), rng);
    Tensor w = rand_tensor({xshape[0], xshape[1], xshape[2], cout}, rng);

    ConvGrads g = conv2d_backward(x, p, w);
    auto loss = [&]() { return wsum(conv2d(x, p), w); };
    return run_suite(name, loss,
                     {{"x", &x, &g.grad_x},
                      {"w", &p.weights, &g.grad_w},
                      {"b", &p.bias, &g.grad_b}});
}

SuiteResult batchnorm_suite(const std::string& name, std::uint64_t seed, Mode mode) {
    Rng rng(seed, Rng::stream(name));
    Tensor x = rand_tensor({2, 4, 4, 3}, rng);
    BatchNormParams p = make_batchnorm(3);
    p.gamma = rand_tensor({3}, rng, 0.5, 1.5);
    p.beta = rand_tensor({3}, rng);
    if (mode == Mode::eval) {
        p.running_mean = rand_tensor({3}, rng);
        p.running_var = rand_tensor({3}, rng, 0.2, 2.0);
    }
    Tensor w = rand_tensor(x.shape(), rng);

    BatchNormCache cache;
    batchnorm2d(x, p, mode, &cache);
    BatchNormGrads g = batchnorm2d_backward(x, p, mode, cache, w);
    auto loss = [&]() {
        BatchNormCache c;
        return wsum(batchnorm2d(x, p, mode, &c), w);
    };
    return run_suite(name, loss,
                     {{"x", &x, &g.grad_x},
                      {"gamma", &p.gamma, &g.grad_gamma},
                      {"beta", &p.beta, &g.grad_beta}});
}

SuiteResult maxpool_suite(std::uint64_t seed) {
    Rng rng(seed, Rng::stream("fd.maxpool"));
    // odd spatial dims exercise the dropped trailing row/column
    Tensor x = rand_tensor({2, 5, 5, 3}, rng);
    Tensor w = rand_tensor({2, 2, 2, 3}, rng);
    Tensor g = maxpool2d_backward(x, w);
    auto loss = [&]() { return wsum(maxpool2d(x), w); };

    auto near_tie = [&x](std::size_t i) {
        const std::size_t C = x.dim(3), W = x.dim(2), H = x.dim(1);
        std::size_t rest = i;
        const std::size_t c = rest % C;
        rest /= C;
        const std::size_t wx = rest % W;
        rest /= W;
        const std::size_t hx = rest % H;
        const std::size_t n = rest / H;
        const std::size_t h0 = (hx / 2) * 2, w0 = (wx / 2) * 2;
        if (h0 + 1 >= H || w0 + 1 >= W) return false;  // not in a full window
        double rival = -1e300;
        for (std::size_t dh = 0; dh < 2; ++dh)
            for (std::size_t dw = 0; dw < 2; ++dw) {
                const std::size_t j = ((n * H + h0 + dh) * W + w0 + dw) * C + c;
                if (j != i) rival = std::max(rival, x.data()[j]);
            }
        return std::fabs(x.data()[i] - rival) <= 1e-6;
    };
    return run_suite("maxpool", loss, {{"x", &x, &g, near_tie}});
}

SuiteResult gap_suite(std::uint64_t seed) {
    Rng rng(seed, Rng::stream("fd.gap"));
    Tensor x = rand_tensor({2, 5, 5, 4}, rng);
    Tensor w = rand_tensor({2, 4}, rng);
    Tensor g = global_avg_pool_backward(x.shape(), w);
    auto loss = [&]() { return wsum(global_avg_pool(x), w); };
    return run_suite("global_avg_pool", loss, {{"x", &x, &g}});
}

SuiteResult dense_suite(std::uint64_t seed) {
    Rng rng(seed, Rng::stream("fd.dense"));
    Tensor x = rand_tensor({3, 6}, rng);
    DenseParams p = make_dense(6, 4);
    p.weights = rand_tensor({6, 4}, rng);
    p.bias = rand_tensor({4}, rng);
    Tensor w = rand_tensor({3, 4}, rng);
    DenseGrads g = dense_backward(x, p, w);
    auto loss = [&]() { return wsum(dense(x, p), w); };
    return run_suite("dense", loss,
                     {{"x", &x, &g.grad_x},
                      {"w", &p.weights, &g.grad_w},
                      {"b", &p.bias, &g.grad_b}});
}

SuiteResult relu_suite(std::uint64_t seed) {
    Rng rng(seed, Rng::stream("fd.relu"));
    Tensor x = rand_signed({3, 4, 4, 2}, rng);
    Tensor w = rand_tensor(x.shape(), rng);
    Tensor g = relu_backward(x, w);
    auto loss = [&]() { return wsum(relu(x), w); };
    auto near_kink = [&x](std::size_t i) { return std::fabs(x.data()[i]) <= 1e-6; };
    return run_suite("relu", loss, {{"x", &x, &g, near_kink}});
}

SuiteResult sigmoid_suite(std::uint64_t seed) {
    Rng rng(seed, Rng::stream("fd.sigmoid"));
    Tensor x = rand_tensor({2, 5, 3}, rng, -4.0, 4.0);
    Tensor w = rand_tensor(x.shape(), rng);
    Tensor y = sigmoid(x);
    Tensor g = sigmoid_backward(y, w);
    auto loss = [&]() { return wsum(sigmoid(x), w); };
    return run_suite("sigmoid", loss, {{"x", &x, &g}});
}

SuiteResult dropout_suite(std::uint64_t seed) {
    Rng rng(seed, Rng::stream("fd.dropout"));
    Tensor x = rand_tensor({4, 6}, rng);
    Tensor w = rand_tensor(x.shape(), rng);
    const DropoutSpec spec{0.3, Mode::train};
    auto fresh = [seed]() { return Rng(seed, Rng::stream("fd.dropout.mask")); };

    Rng r0 = fresh();
    DropoutResult base = dropout(x, spec, r0);
    Tensor g = dropout_backward(base.mask, w);
    auto loss = [&]() {
        Rng r = fresh();
        return wsum(dropout(x, spec, r).output, w);
    };
    return run_suite("dropout", loss, {{"x", &x, &g}});
}

SuiteResult softmax_ce_suite(std::uint64_t seed) {
    Rng rng(seed, Rng::stream("fd.softmax_ce"));
    Tensor logits = rand_tensor({4, 5}, rng, -2.0, 2.0);
    Tensor onehot({4, 5});
    for (std::size_t n = 0; n < 4; ++n) onehot.data()[n * 5 + rng.below(5)] = 1.0;

    SoftmaxLoss base = softmax_cross_entropy(logits, onehot);
    Tensor g = softmax_cross_entropy_backward(base.probs, onehot);
    auto loss = [&]() { return softmax_cross_entropy(logits, onehot).loss; };
    return run_suite("softmax_ce", loss, {{"logits", &logits, &g}});
}

// Attention bridge in isolation: two block-1 outputs, concat -> dilated conv
// -> sigmoid -> map multiplied onto both inputs. Validates the dual-path
// chain rule (identity path plus attention path).
SuiteResult bridge_suite(std::uint64_t seed) {
    Rng rng(seed, Rng::stream("fd.bridge"));
    const std::size_t C = 3;
    Tensor b1 = rand_tensor({1, 4, 4, C}, rng);
    Tensor b2 = rand_tensor({1, 4, 4, C}, rng);
    ConvParams p = make_conv(3, 2 * C, 1, 2);
    p.weights = rand_tensor(p.weights.shape(), rng);
    p.bias = rand_tensor(p.bias.shape(), rng);
    Tensor w1 = rand_tensor(b1.shape(), rng);
    Tensor w2 = rand_tensor(b2.shape(), rng);

    auto loss = [&]() {
        Tensor cat = concat_channels(b1, b2);
        Tensor a = sigmoid(conv2d(cat, p));
        return wsum(mul(b1, a), w1) + wsum(mul(b2, a), w2);
    };

    Tensor cat = concat_channels(b1, b2);
    Tensor a = sigmoid(conv2d(cat, p));
    Tensor d_b1 = mul(w1, a);
    Tensor d_b2 = mul(w2, a);
    Tensor dA = add(reduce(ReduceOp::sum, mul(w1, b1), {3}, true),
                    reduce(ReduceOp::sum, mul(w2, b2), {3}, true));
    Tensor d_pre = sigmoid_backward(a, dA);
    ConvGrads cg = conv2d_backward(cat, p, d_pre);
    auto [d_a1, d_a2] = split_channels(cg.grad_x, C);
    d_b1 = add(d_b1, d_a1);
    d_b2 = add(d_b2, d_a2);

    return run_suite("attention_bridge", loss,
                     {{"b1", &b1, &d_b1},
                      {"b2", &b2, &d_b2},
                      {"w", &p.weights, &cg.grad_w},
                      {"b", &p.bias, &cg.grad_b}});
}

}  // namespace

std::vector<SuiteResult> run_layer_checks(std::uint64_t seed) {
    std::vector<SuiteResult> out;
    out.push_back(conv_suite("conv.k3", seed, 3, 1, {2, 5, 5, 3}, 4));
    out.push_back(conv_suite("conv.k5", seed, 5, 1, {1, 6, 6, 2}, 3));
    out.push_back(conv_suite("conv.k3.d2", seed, 3, 2, {2, 6, 6, 2}, 3));
    out.push_back(batchnorm_suite("batchnorm.train", seed, Mode::train));
    out.push_back(batchnorm_suite("batchnorm.eval", seed, Mode::eval));
    out.push_back(maxpool_suite(seed));
    out.push_back(gap_suite(seed));
    out.push_back(dense_suite(seed));
    out.push_back(relu_suite(seed));
    out.push_back(sigmoid_suite(seed));
    out.push_back(dropout_suite(seed));
    out.push_back(softmax_ce_suite(seed));
    out.push_back(bridge_suite(seed));
    return out;
}

SuiteResult run_model_check(std::uint64_t seed, const ModelCheckOptions& opts) {
    const auto t0 = Clock::now();

    ModelConfig cfg;
    cfg.input_size = 16;
    cfg.channels = {4, 8, 12, 16};
    cfg.head_widths = {10, 5};
    cfg.num_classes = 3;
    YNetModel m = create_model(cfg, seed);

    Rng data_rng(seed, Rng::stream("fd.model.data"));
    const std::size_t n = opts.batch;
    Tensor x = rand_tensor({n, 16, 16, 3}, data_rng, 0.0, 1.0);
    Tensor onehot({n, cfg.num_classes});
    for (std::size_t i = 0; i < n; ++i)
        onehot.data()[i * cfg.num_classes + data_rng.below(cfg.num_classes)] = 1.0;

    // Train-mode forwards update BN running stats; snapshot and restore so
    // the sweep leaves the model as it found it.
    std::vector<std::pair<Tensor*, Tensor>> running;
    for (auto* branch : {&m.branch1, &m.branch2})
        for (auto& blk : branch->blocks) {
            running.emplace_back(&blk.bn.running_mean, blk.bn.running_mean);
            running.emplace_back(&blk.bn.running_var, blk.bn.running_var);
        }

    auto fresh_rng = [seed]() { return Rng(seed, Rng::stream("fd.model.drop")); };
    auto loss = [&]() {
        Rng r = fresh_rng();
        ForwardResult fr = forward(m, x, Mode::train, r);
        return softmax_cross_entropy(fr.logits, onehot).loss;
    };

    ForwardCache cache;
    Rng r0 = fresh_rng();
    forward(m, x, Mode::train, r0, &cache);
    GradMap grads = backward(m, cache, onehot);
    if (!opts.corrupt_group.empty()) {
        Tensor& g = grads.at(opts.corrupt_group);
        for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += 1.0;
    }

    std::vector<FdTarget> targets;
    for (const auto& ref : m.parameters())
        targets.push_back({ref.name, ref.tensor, &grads.at(ref.name)});

    FdReport rep = check_gradients(loss, targets, opts.fd);
    for (auto& [ptr, saved] : running) *ptr = saved;
    return {"model.tiny", std::move(rep), seconds_since(t0)};
}

}  // namespace ynet
