#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ynet/gradcheck.hpp"
#include "ynet/layers.hpp"
#include "ynet/rng.hpp"
#include "ynet/tensor.hpp"

using namespace ynet;

namespace {

Tensor rand_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(lo, hi);
    return t;
}

// Independent convolution oracle: materializes the zero-padded input, then
// runs an unguarded direct sum with a different loop nest than the library.
Tensor oracle_conv(const Tensor& x, const ConvParams& p) {
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), Cin = x.dim(3);
    const std::size_t k = p.kernel_size, d = p.dilation, pad = p.pad();
    const std::size_t Cout = p.out_channels();
    Tensor padded({N, H + 2 * pad, W + 2 * pad, Cin});
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t h = 0; h < H; ++h)
            for (std::size_t w = 0; w < W; ++w)
                for (std::size_t c = 0; c < Cin; ++c)
                    padded.at({n, h + pad, w + pad, c}) = x.at({n, h, w, c});

    Tensor out({N, H, W, Cout});
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t co = 0; co < Cout; ++co)
            for (std::size_t h = 0; h < H; ++h)
                for (std::size_t w = 0; w < W; ++w) {
                    double s = p.bias.at({co});
                    for (std::size_t kh = 0; kh < k; ++kh)
                        for (std::size_t kw = 0; kw < k; ++kw)
                            for (std::size_t c = 0; c < Cin; ++c)
                                s += padded.at({n, h + kh * d, w + kw * d, c}) *
                                     p.weights.at({kh, kw, c, co});
                    out.at({n, h, w, co}) = s;
                }
    return out;
}

double max_rel_diff(const Tensor& a, const Tensor& b) {
    REQUIRE(a.same_shape(b));
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({1.0, std::fabs(a.data()[i]), std::fabs(b.data()[i])});
        worst = std::max(worst, std::fabs(a.data()[i] - b.data()[i]) / denom);
    }
    return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// conv2d
// ---------------------------------------------------------------------------

TEST_CASE("conv2d 1x1 kernel is a scalar affine map") {
    Tensor x({1, 1, 1, 1});
    x.at({0, 0, 0, 0}) = 2.5;
    ConvParams p = make_conv(1, 1, 1);
    p.weights.at({0, 0, 0, 0}) = 3.0;
    p.bias.at({0}) = 0.5;
    Tensor y = conv2d(x, p);
    CHECK(y.at({0, 0, 0, 0}) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("conv2d all-ones 3x3 counts the zero-padding overlap") {
    Tensor x = Tensor::ones({1, 3, 3, 1});
    ConvParams p = make_conv(3, 1, 1);
    p.weights = Tensor::ones({3, 3, 1, 1});
    Tensor y = conv2d(x, p);
    const double want[3][3] = {{4, 6, 4}, {6, 9, 6}, {4, 6, 4}};
    for (std::size_t h = 0; h < 3; ++h)
        for (std::size_t w = 0; w < 3; ++w)
            CHECK(y.at({0, h, w, 0}) == want[h][w]);
}

TEST_CASE("conv2d full-scale block-1 shape") {
    Tensor x({1, 224, 224, 3});
    ConvParams p = make_conv(3, 3, 64);
    Tensor y = conv2d(x, p);
    CHECK(y.shape() == Shape{1, 224, 224, 64});
}

TEST_CASE("conv2d rejects channel mismatch and zero dilation") {
    Tensor x({1, 4, 4, 3});
    ConvParams p = make_conv(3, 2, 4);
    CHECK_THROWS_AS(conv2d(x, p), Error);
    CHECK_THROWS_AS(make_conv(3, 3, 4, 0), Error);
}

TEST_CASE("conv2d matches the padded direct oracle") {
    Rng rng(7, Rng::stream("conv-oracle"));
    for (int it = 0; it < 30; ++it) {
        const std::size_t k = rng.bernoulli(0.5) ? 3 : 5;
        const std::size_t d = rng.bernoulli(0.3) ? 2 : 1;
        const std::size_t H = 1 + rng.below(8), W = 1 + rng.below(8);
        const std::size_t Cin = 1 + rng.below(3), Cout = 1 + rng.below(4);
        const std::size_t N = 1 + rng.below(2);
        Tensor x = rand_tensor({N, H, W, Cin}, rng);
        ConvParams p = make_conv(k, Cin, Cout, d);
        p.weights = rand_tensor(p.weights.shape(), rng);
        p.bias = rand_tensor(p.bias.shape(), rng);
        CAPTURE(k);
        CAPTURE(d);
        CAPTURE(H);
        CAPTURE(W);
        CHECK(max_rel_diff(conv2d(x, p), oracle_conv(x, p)) <= 1e-10);
    }
}

TEST_CASE("dilated conv2d equals conv with the zero-expanded kernel, exactly") {
    Rng rng(11, Rng::stream("conv-dilate"));
    Tensor x = rand_tensor({2, 6, 6, 2}, rng);
    ConvParams p = make_conv(3, 2, 3, 2);
    p.weights = rand_tensor(p.weights.shape(), rng);
    p.bias = rand_tensor(p.bias.shape(), rng);

    // extent d*(k-1)+1 = 5; original taps land every d rows/cols
    ConvParams q = make_conv(5, 2, 3, 1);
    for (std::size_t kh = 0; kh < 3; ++kh)
        for (std::size_t kw = 0; kw < 3; ++kw)
            for (std::size_t ci = 0; ci < 2; ++ci)
                for (std::size_t co = 0; co < 3; ++co)
                    q.weights.at({kh * 2, kw * 2, ci, co}) = p.weights.at({kh, kw, ci, co});
    q.bias = p.bias;

    Tensor a = conv2d(x, p);
    Tensor b = conv2d(x, q);
    REQUIRE(a.same_shape(b));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == b.data()[i]);
}

// ---------------------------------------------------------------------------
// batchnorm2d
// ---------------------------------------------------------------------------

TEST_CASE("batchnorm2d constant channel normalizes to zero") {
    Tensor x = Tensor::full({1, 2, 2, 1}, 7.5);
    BatchNormParams p = make_batchnorm(1);
    BatchNormCache cache;
    Tensor y = batchnorm2d(x, p, Mode::train, &cache);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y.data()[i] == 0.0);
}

TEST_CASE("batchnorm2d plus-minus-one channel hits the closed form") {
    Tensor x({1, 2, 2, 1});
    x.data()[0] = -1.0;
    x.data()[1] = 1.0;
    x.data()[2] = -1.0;
    x.data()[3] = 1.0;
    BatchNormParams p = make_batchnorm(1);
    Tensor y = batchnorm2d(x, p, Mode::train);
    const double expect = 1.0 / std::sqrt(1.0 + 1e-5);
    CHECK(expect == doctest::Approx(0.999995).epsilon(1e-6));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::fabs(y.data()[i]) == doctest::Approx(expect).epsilon(1e-15));
        CHECK(std::signbit(y.data()[i]) == std::signbit(x.data()[i]));
    }
}

TEST_CASE("batchnorm2d eval with unit running stats is nearly the identity") {
    Rng rng(3, Rng::stream("bn-eval"));
    Tensor x = rand_tensor({2, 3, 3, 4}, rng);
    BatchNormParams p = make_batchnorm(4);  // running mean 0, var 1 by construction
    Tensor y = batchnorm2d(x, p, Mode::eval);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::fabs(y.data()[i] - x.data()[i]) <= 1e-5);
}

TEST_CASE("batchnorm2d rejects a single-element train batch") {
    Tensor x({1, 1, 1, 3});
    BatchNormParams p = make_batchnorm(3);
    CHECK_THROWS_AS(batchnorm2d(x, p, Mode::train), Error);
}

TEST_CASE("batchnorm2d train output moments and running-stat blend") {
    Rng rng(5, Rng::stream("bn-moments"));
    Tensor x = rand_tensor({4, 5, 5, 3}, rng, -2.0, 3.0);
    BatchNormParams p = make_batchnorm(3);
    const std::size_t M = 4 * 5 * 5, C = 3;

    // hand-computed biased batch statistics
    std::vector<double> mean(C, 0.0), var(C, 0.0);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t c = 0; c < C; ++c) mean[c] += x.data()[i * C + c];
    for (auto& m : mean) m /= static_cast<double>(M);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t c = 0; c < C; ++c) {
            const double d = x.data()[i * C + c] - mean[c];
            var[c] += d * d;
        }
    for (auto& v : var) v /= static_cast<double>(M);

    Tensor y = batchnorm2d(x, p, Mode::train);

    for (std::size_t c = 0; c < C; ++c) {
        double om = 0.0, ov = 0.0;
        for (std::size_t i = 0; i < M; ++i) om += y.data()[i * C + c];
        om /= static_cast<double>(M);
        for (std::size_t i = 0; i < M; ++i) {
            const double d = y.data()[i * C + c] - om;
            ov += d * d;
        }
        ov /= static_cast<double>(M);
        CHECK(std::fabs(om) <= 1e-9);
        // normalized variance is var/(var+eps), slightly below 1
        CHECK(ov == doctest::Approx(var[c] / (var[c] + p.epsilon)).epsilon(1e-6));
        // running <- momentum*running + (1-momentum)*batch, from (0,1) start
        CHECK(p.running_mean[c] == doctest::Approx(0.1 * mean[c]).epsilon(1e-12));
        CHECK(p.running_var[c] == doctest::Approx(0.9 + 0.1 * var[c]).epsilon(1e-12));
    }
}

TEST_CASE("batchnorm2d gamma/beta recover a synthetic distribution") {
    Rng rng(9, Rng::stream("bn-recover"));
    Tensor x = rand_tensor({2, 6, 6, 1}, rng);
    const double sigma = 2.5, mu = -1.25;
    BatchNormParams p = make_batchnorm(1);
    p.gamma.data()[0] = sigma;
    p.beta.data()[0] = mu;
    Tensor y = batchnorm2d(x, p, Mode::train);

    const std::size_t M = y.size();
    double om = 0.0, ov = 0.0;
    for (std::size_t i = 0; i < M; ++i) om += y.data()[i];
    om /= static_cast<double>(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double d = y.data()[i] - om;
        ov += d * d;
    }
    ov /= static_cast<double>(M);
    CHECK(om == doctest::Approx(mu).epsilon(1e-9));
    CHECK(std::sqrt(ov) == doctest::Approx(sigma).epsilon(1e-4));
}

// ---------------------------------------------------------------------------
// maxpool2d / global_avg_pool
// ---------------------------------------------------------------------------

TEST_CASE("maxpool2d basics") {
    Tensor x({1, 2, 2, 1});
    x.data()[0] = 1;
    x.data()[1] = 2;
    x.data()[2] = 3;
    x.data()[3] = 4;
    Tensor y = maxpool2d(x);
    CHECK(y.shape() == Shape{1, 1, 1, 1});
    CHECK(y.data()[0] == 4.0);

    Tensor c = Tensor::full({2, 4, 6, 3}, 1.75);
    Tensor yc = maxpool2d(c);
    CHECK(yc.shape() == Shape{2, 2, 3, 3});
    for (std::size_t i = 0; i < yc.size(); ++i) CHECK(yc.data()[i] == 1.75);

    Tensor big({1, 224, 224, 2});
    CHECK(maxpool2d(big).shape() == Shape{1, 112, 112, 2});

    Tensor tiny({1, 1, 4, 1});
    CHECK_THROWS_AS(maxpool2d(tiny), Error);
}

TEST_CASE("maxpool2d drops odd trailing row/column and zeroes their gradient") {
    Rng rng(13, Rng::stream("pool-odd"));
    Tensor x = rand_tensor({1, 5, 5, 2}, rng);
    Tensor y = maxpool2d(x);
    CHECK(y.shape() == Shape{1, 2, 2, 2});
    Tensor g = maxpool2d_backward(x, Tensor::ones(y.shape()));
    for (std::size_t h = 0; h < 5; ++h)
        for (std::size_t w = 0; w < 5; ++w)
            if (h == 4 || w == 4)
                for (std::size_t c = 0; c < 2; ++c) CHECK(g.at({0, h, w, c}) == 0.0);
}

TEST_CASE("maxpool2d backward hits exactly one position per window") {
    Rng rng(17, Rng::stream("pool-argmax"));
    Tensor x = rand_tensor({2, 6, 6, 3}, rng);
    Tensor y = maxpool2d(x);
    Tensor g = maxpool2d_backward(x, Tensor::ones(y.shape()));
    for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t h = 0; h < 3; ++h)
            for (std::size_t w = 0; w < 3; ++w)
                for (std::size_t c = 0; c < 3; ++c) {
                    int nonzero = 0;
                    for (std::size_t dh = 0; dh < 2; ++dh)
                        for (std::size_t dw = 0; dw < 2; ++dw)
                            if (g.at({n, 2 * h + dh, 2 * w + dw, c}) != 0.0) ++nonzero;
                    CHECK(nonzero == 1);
                }
}

TEST_CASE("maxpool2d breaks ties toward the first element in row-major order") {
    Tensor x = Tensor::full({1, 2, 2, 1}, 3.0);
    Tensor g = maxpool2d_backward(x, Tensor::ones({1, 1, 1, 1}));
    CHECK(g.at({0, 0, 0, 0}) == 1.0);
    CHECK(g.at({0, 0, 1, 0}) == 0.0);
    CHECK(g.at({0, 1, 0, 0}) == 0.0);
    CHECK(g.at({0, 1, 1, 0}) == 0.0);
}

TEST_CASE("global_avg_pool basics") {
    Tensor c = Tensor::full({2, 3, 5, 4}, -2.25);
    Tensor yc = global_avg_pool(c);
    CHECK(yc.shape() == Shape{2, 4});
    for (std::size_t i = 0; i < yc.size(); ++i) CHECK(yc.data()[i] == -2.25);

    Tensor x({1, 2, 2, 1});
    x.data()[0] = 1;
    x.data()[1] = 2;
    x.data()[2] = 3;
    x.data()[3] = 4;
    CHECK(global_avg_pool(x).data()[0] == 2.5);

    Tensor head({1, 14, 14, 1024});
    CHECK(global_avg_pool(head).shape() == Shape{1, 1024});
}

// ---------------------------------------------------------------------------
// dense
// ---------------------------------------------------------------------------

TEST_CASE("dense basics") {
    DenseParams eye = make_dense(3, 3);
    for (std::size_t i = 0; i < 3; ++i) eye.weights.at({i, i}) = 1.0;
    Rng rng(19, Rng::stream("dense"));
    Tensor x = rand_tensor({2, 3}, rng);
    Tensor y = dense(x, eye);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y.data()[i] == x.data()[i]);

    DenseParams p = make_dense(2, 1);
    p.weights.at({0, 0}) = 1.0;
    p.weights.at({1, 0}) = 1.0;
    p.bias.at({0}) = 1.0;
    Tensor v({1, 2});
    v.data()[0] = 1.0;
    v.data()[1] = 2.0;
    CHECK(dense(v, p).data()[0] == 4.0);

    DenseParams head = make_dense(1024, 250);
    CHECK(dense(Tensor({1, 1024}), head).shape() == Shape{1, 250});

    Tensor bad({1, 3});
    CHECK_THROWS_AS(dense(bad, p), Error);
}

// ---------------------------------------------------------------------------
// activations
// ---------------------------------------------------------------------------

TEST_CASE("relu and sigmoid pointwise values") {
    Tensor x({3});
    x.data()[0] = -1.0;
    x.data()[1] = 0.0;
    x.data()[2] = 2.0;
    Tensor y = relu(x);
    CHECK(y.data()[0] == 0.0);
    CHECK(y.data()[1] == 0.0);
    CHECK(y.data()[2] == 2.0);

    // subgradient at 0 is 0
    Tensor g = relu_backward(x, Tensor::ones({3}));
    CHECK(g.data()[0] == 0.0);
    CHECK(g.data()[1] == 0.0);
    CHECK(g.data()[2] == 1.0);

    CHECK(sigmoid(Tensor::scalar(0.0)).data()[0] == 0.5);
    Tensor ext({2});
    ext.data()[0] = 30.0;
    ext.data()[1] = -30.0;
    Tensor s = sigmoid(ext);
    CHECK(s.all_finite());
    CHECK(std::fabs(s.data()[0] - 1.0) <= 1e-9);
    CHECK(std::fabs(s.data()[1]) <= 1e-9);
    CHECK(s.data()[0] < 1.0);  // strictly inside (0,1)
    CHECK(s.data()[1] > 0.0);

    Tensor huge({2});
    huge.data()[0] = 700.0;
    huge.data()[1] = -700.0;
    CHECK(sigmoid(huge).all_finite());
}

// ---------------------------------------------------------------------------
// dropout
// ---------------------------------------------------------------------------

TEST_CASE("dropout eval and rate-0 are exact identities") {
    Rng rng(23, Rng::stream("drop-id"));
    Tensor x = rand_tensor({4, 7}, rng);
    Rng r1(1, 2), r2(3, 4);
    DropoutResult e = dropout(x, {0.5, Mode::eval}, r1);
    DropoutResult z = dropout(x, {0.0, Mode::train}, r2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(e.output.data()[i] == x.data()[i]);
        CHECK(z.output.data()[i] == x.data()[i]);
    }
}

TEST_CASE("dropout survivor fraction and mean preservation at rate 0.3") {
    const std::size_t n = 100000;
    Tensor x = Tensor::ones({n});
    Rng rng(29, Rng::stream("drop-stat"));
    DropoutResult r = dropout(x, {0.3, Mode::train}, rng);
    std::size_t survivors = 0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (r.output.data()[i] != 0.0) {
            ++survivors;
            CHECK(r.output.data()[i] == doctest::Approx(1.0 / 0.7).epsilon(1e-12));
        }
        mean += r.output.data()[i];
    }
    mean /= static_cast<double>(n);
    CHECK(std::fabs(static_cast<double>(survivors) / n - 0.7) <= 0.01);
    CHECK(std::fabs(mean - 1.0) <= 0.02);
}

TEST_CASE("dropout rejects rate >= 1") {
    Tensor x({2, 2});
    Rng rng(1, 1);
    CHECK_THROWS_AS(dropout(x, {1.0, Mode::train}, rng), Error);
}

// ---------------------------------------------------------------------------
// softmax cross-entropy
// ---------------------------------------------------------------------------

TEST_CASE("softmax_cross_entropy uniform logits over 30 classes") {
    Tensor logits({2, 30});
    Tensor onehot({2, 30});
    onehot.at({0, 4}) = 1.0;
    onehot.at({1, 29}) = 1.0;
    SoftmaxLoss r = softmax_cross_entropy(logits, onehot);
    for (std::size_t i = 0; i < r.probs.size(); ++i)
        CHECK(r.probs.data()[i] == doctest::Approx(1.0 / 30.0).epsilon(1e-12));
    CHECK(r.loss == doctest::Approx(std::log(30.0)).epsilon(1e-12));
    CHECK(r.loss == doctest::Approx(3.4012).epsilon(1e-4));
}

TEST_CASE("softmax_cross_entropy is shift invariant") {
    Rng rng(31, Rng::stream("sm-shift"));
    Tensor a = rand_tensor({3, 6}, rng, -2.0, 2.0);
    Tensor b = a;
    for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] += 7.5;
    Tensor onehot({3, 6});
    for (std::size_t n = 0; n < 3; ++n) onehot.at({n, rng.below(6)}) = 1.0;
    SoftmaxLoss ra = softmax_cross_entropy(a, onehot);
    SoftmaxLoss rb = softmax_cross_entropy(b, onehot);
    CHECK(std::fabs(ra.loss - rb.loss) <= 1e-12);
    for (std::size_t i = 0; i < ra.probs.size(); ++i)
        CHECK(std::fabs(ra.probs.data()[i] - rb.probs.data()[i]) <= 1e-12);
}

TEST_CASE("softmax_cross_entropy two-class closed form") {
    Tensor logits({1, 2});
    logits.data()[0] = 0.0;             // ln 1
    logits.data()[1] = std::log(2.0);   // ln 2
    Tensor onehot({1, 2});
    onehot.data()[1] = 1.0;
    SoftmaxLoss r = softmax_cross_entropy(logits, onehot);
    CHECK(r.probs.data()[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.probs.data()[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.loss == doctest::Approx(std::log(1.5)).epsilon(1e-12));
}

TEST_CASE("softmax_cross_entropy rejects malformed one-hot rows") {
    Tensor logits({1, 3});
    Tensor two({1, 3});
    two.data()[0] = 1.0;
    two.data()[1] = 1.0;
    CHECK_THROWS_AS(softmax_cross_entropy(logits, two), Error);
    Tensor frac({1, 3});
    frac.data()[0] = 0.5;
    frac.data()[1] = 0.5;
    CHECK_THROWS_AS(softmax_cross_entropy(logits, frac), Error);
    Tensor none({1, 3});
    CHECK_THROWS_AS(softmax_cross_entropy(logits, none), Error);
}

TEST_CASE("softmax rows sum to 1 and stay strictly positive, even at extremes") {
    Tensor logits({3, 5});
    Rng rng(37, Rng::stream("sm-rows"));
    for (std::size_t i = 0; i < logits.size(); ++i) logits.data()[i] = rng.uniform(-5, 5);
    logits.at({1, 0}) = 300.0;
    logits.at({2, 4}) = -300.0;
    Tensor p = softmax(logits);
    CHECK(p.all_finite());
    for (std::size_t n = 0; n < 3; ++n) {
        double s = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
            CHECK(p.at({n, k}) > 0.0);
            s += p.at({n, k});
        }
        CHECK(std::fabs(s - 1.0) <= 1e-12);
    }
}

// ---------------------------------------------------------------------------
// finite-difference master property
// ---------------------------------------------------------------------------

TEST_CASE("every layer backward matches central finite differences") {
    for (const auto& suite : run_layer_checks(12345)) {
        CAPTURE(suite.name);
        CAPTURE(suite.report.max_error);
        CAPTURE(suite.report.checked);
        CHECK(suite.report.ok());
        CHECK(suite.report.max_error < 1e-4);
        // the kink guard may only ever excuse a sliver of the points
        CHECK(suite.report.skipped * 20 <= suite.report.checked);
    }
}

TEST_CASE("the checker itself flags a corrupted analytic gradient") {
    Rng rng(41, Rng::stream("fd-negative"));
    Tensor x = rand_tensor({3, 4}, rng);
    DenseParams p = make_dense(4, 2);
    p.weights = rand_tensor({4, 2}, rng);
    p.bias = rand_tensor({2}, rng);
    Tensor w = rand_tensor({3, 2}, rng);
    DenseGrads g = dense_backward(x, p, w);
    for (std::size_t i = 0; i < g.grad_w.size(); ++i) g.grad_w.data()[i] += 1.0;
    auto loss = [&]() {
        Tensor y = dense(x, p);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += y.data()[i] * w.data()[i];
        return s;
    };
    FdReport rep = check_gradients(loss, {{"w", &p.weights, &g.grad_w}});
    CHECK(rep.failed > 0);
    CHECK_FALSE(rep.ok());
}
