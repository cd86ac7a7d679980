#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ynet/errors.hpp"
#include "ynet/optim.hpp"
#include "ynet/rng.hpp"

using namespace ynet;

namespace {

Tensor rand_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(lo, hi);
    return t;
}

}  // namespace

TEST_CASE("adam with zero gradient leaves parameters unchanged") {
    AdamState s;
    Tensor p({3, 2});
    Rng rng(1, Rng::stream("adam-zero"));
    p = rand_tensor(p.shape(), rng);
    Tensor p0 = p;
    Tensor g({3, 2});
    adam_step(s, {{"p", &p, &g}});
    CHECK(s.t == 1);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.data()[i] == p0.data()[i]);
}

TEST_CASE("adam first step has the closed form -lr*g/(|g|+eps)") {
    AdamState s;
    s.lr = 1e-3;
    Rng rng(2, Rng::stream("adam-first"));
    Tensor p = rand_tensor({4}, rng);
    Tensor g = rand_tensor({4}, rng, -2.0, 2.0);
    Tensor p0 = p;
    adam_step(s, {{"p", &p, &g}});
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double gi = g.data()[i];
        const double want = p0.data()[i] - s.lr * gi / (std::fabs(gi) + s.eps);
        CHECK(p.data()[i] == doctest::Approx(want).epsilon(1e-14));
        if (std::fabs(gi) > 1e-6) {
            const double step = p.data()[i] - p0.data()[i];
            CHECK(step == doctest::Approx(-s.lr * (gi > 0 ? 1.0 : -1.0)).epsilon(1e-5));
        }
    }
}

TEST_CASE("adam g then -g returns near but not exactly to the start") {
    AdamState s;
    s.lr = 1e-3;
    Tensor p = Tensor::full({3}, 0.25);
    Tensor g({3});
    g.data()[0] = 0.7;
    g.data()[1] = -1.3;
    g.data()[2] = 2.1;
    Tensor p0 = p;
    adam_step(s, {{"p", &p, &g}});
    Tensor neg = g;
    for (std::size_t i = 0; i < neg.size(); ++i) neg.data()[i] = -neg.data()[i];
    adam_step(s, {{"p", &p, &neg}});
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(std::fabs(p.data()[i] - p0.data()[i]) < s.lr);
}

TEST_CASE("adam converges on the quadratic bowl") {
    AdamState s;
    s.lr = 1e-2;
    Tensor p = Tensor::scalar(1.0);
    for (int step = 0; step < 2000; ++step) {
        Tensor g = p;  // d/dp of p^2/2
        adam_step(s, {{"p", &p, &g}});
    }
    CHECK(std::fabs(p.data()[0]) < 1e-3);
}

TEST_CASE("adam fresh-state step direction is -sign(g)") {
    AdamState s;
    Rng rng(3, Rng::stream("adam-dir"));
    Tensor p = rand_tensor({32}, rng);
    Tensor g = rand_tensor({32}, rng, -3.0, 3.0);
    Tensor p0 = p;
    adam_step(s, {{"p", &p, &g}});
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::fabs(g.data()[i]) <= s.eps) continue;
        const double step = p.data()[i] - p0.data()[i];
        CHECK(step * g.data()[i] < 0.0);
    }
}

TEST_CASE("adam fresh-state step is nearly invariant to gradient rescaling") {
    Rng rng(4, Rng::stream("adam-scale"));
    Tensor base = rand_tensor({16}, rng);
    Tensor g = rand_tensor({16}, rng, -1.0, 1.0);
    Tensor g100 = g;
    for (std::size_t i = 0; i < g100.size(); ++i) g100.data()[i] *= 100.0;

    AdamState s1, s2;
    Tensor pa = base, pb = base;
    adam_step(s1, {{"p", &pa, &g}});
    adam_step(s2, {{"p", &pb, &g100}});
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(std::fabs(pa.data()[i] - pb.data()[i]) < 10.0 * s1.eps * s1.lr + 1e-15);
}

TEST_CASE("adam rejects shape mismatch and non-finite gradients by name") {
    AdamState s;
    Tensor p({2, 2});
    Tensor bad({3});
    CHECK_THROWS_AS(adam_step(s, {{"p", &p, &bad}}), Error);

    Tensor g({2, 2});
    g.data()[1] = std::nan("");
    try {
        adam_step(s, {{"branch1.block1.conv.w", &p, &g}});
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("branch1.block1.conv.w") != std::string::npos);
    }
}

TEST_CASE("adam state records round trip and preserve the trajectory") {
    Rng rng(5, Rng::stream("adam-rt"));
    Tensor p = rand_tensor({6}, rng);
    AdamState s;
    s.lr = 3e-3;
    for (int i = 0; i < 5; ++i) {
        Tensor g = rand_tensor({6}, rng);
        adam_step(s, {{"w", &p, &g}});
    }

    AdamState restored;
    restored.lr = s.lr;
    restore_adam(restored, adam_records(s));
    CHECK(restored.t == s.t);
    REQUIRE(restored.m.count("w") == 1);
    REQUIRE(restored.v.count("w") == 1);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(restored.m.at("w").data()[i] == s.m.at("w").data()[i]);
        CHECK(restored.v.at("w").data()[i] == s.v.at("w").data()[i]);
    }

    Tensor pa = p, pb = p;
    Tensor g = rand_tensor({6}, rng);
    adam_step(s, {{"w", &pa, &g}});
    adam_step(restored, {{"w", &pb, &g}});
    for (std::size_t i = 0; i < 6; ++i) CHECK(pa.data()[i] == pb.data()[i]);
}

TEST_CASE("sgdr matches the closed form at the landmark epochs") {
    SgdrSchedule s;
    CHECK(std::fabs(sgdr_lr(s, 0.0) - 1e-3) <= 1e-9);
    CHECK(std::fabs(sgdr_lr(s, 25.0) - 5.005e-4) <= 1e-9);
    CHECK(std::fabs(sgdr_lr(s, 49.999) - 1e-6) <= 1e-8);
    CHECK(std::fabs(sgdr_lr(s, 50.0) - 1e-3) <= 1e-9);
    CHECK(std::fabs(sgdr_lr(s, 75.0) - 5.005e-4) <= 1e-9);
}

TEST_CASE("sgdr stays in range, decreases within a period, and is periodic") {
    SgdrSchedule s;
    double prev = sgdr_lr(s, 0.0);
    for (double e = 0.5; e < 50.0; e += 0.5) {
        const double lr = sgdr_lr(s, e);
        CHECK(lr < prev);
        CHECK(lr >= s.eta_min);
        CHECK(lr <= s.eta_max);
        prev = lr;
    }
    Rng rng(6, Rng::stream("sgdr"));
    for (int i = 0; i < 200; ++i) {
        const double e = rng.uniform(0.0, 500.0);
        const double lr = sgdr_lr(s, e);
        CHECK(lr >= s.eta_min);
        CHECK(lr <= s.eta_max);
        CHECK(std::fabs(sgdr_lr(s, e + 50.0) - lr) <= 1e-15);
    }
    // continuity inside a period
    CHECK(std::fabs(sgdr_lr(s, 20.0 + 1e-7) - sgdr_lr(s, 20.0)) < 1e-9);
}

TEST_CASE("sgdr grows the period by t_mult after each restart") {
    SgdrSchedule s;
    s.period = 10.0;
    s.t_mult = 2.0;
    CHECK(std::fabs(sgdr_lr(s, 10.0) - s.eta_max) <= 1e-9);   // first restart
    CHECK(std::fabs(sgdr_lr(s, 30.0) - s.eta_max) <= 1e-9);   // second, after 20 more
    const double mid = s.eta_min + 0.5 * (s.eta_max - s.eta_min) *
                                       (1.0 + std::cos(std::numbers::pi * 0.5));
    CHECK(std::fabs(sgdr_lr(s, 20.0) - mid) <= 1e-12);  // halfway through the 20-epoch period
}

TEST_CASE("sgdr rejects negative epochs and degenerate ranges") {
    SgdrSchedule s;
    CHECK_THROWS_AS(sgdr_lr(s, -1.0), Error);
    SgdrSchedule bad;
    bad.eta_min = bad.eta_max = 1e-3;
    CHECK_THROWS_AS(sgdr_lr(bad, 1.0), Error);
}
