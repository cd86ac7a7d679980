#include "ynet/layers.hpp"

#include <algorithm>
#include <cmath>

namespace ynet {

namespace {

void require_nhwc(const Tensor& x, const char* who) {
    if (x.rank() != 4)
        throw Error(std::string(who) + ": NHWC rank-4 input required, got " +
                    shape_str(x.shape()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

Tensor he_normal(Shape shape, std::size_t fan_in, Rng& rng) {
    Tensor t(std::move(shape));
    const double std = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std * rng.normal();
    return t;
}

Tensor xavier_normal(Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    Tensor t(std::move(shape));
    const double std = std::sqrt(2.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std * rng.normal();
    return t;
}

ConvParams make_conv(std::size_t k, std::size_t cin, std::size_t cout,
                     std::size_t dilation) {
    if (dilation == 0) throw Error("conv2d: dilation must be positive");
    if (k % 2 == 0) throw Error("conv2d: kernel size must be odd, got " + std::to_string(k));
    ConvParams p;
    p.weights = Tensor({k, k, cin, cout});
    p.bias = Tensor({cout});
    p.kernel_size = k;
    p.dilation = dilation;
    return p;
}

BatchNormParams make_batchnorm(std::size_t channels, double epsilon, double momentum) {
    BatchNormParams p;
    p.gamma = Tensor::ones({channels});
    p.beta = Tensor({channels});
    p.running_mean = Tensor({channels});
    p.running_var = Tensor::ones({channels});
    p.epsilon = epsilon;
    p.momentum = momentum;
    return p;
}

DenseParams make_dense(std::size_t in, std::size_t out) {
    DenseParams p;
    p.weights = Tensor({in, out});
    p.bias = Tensor({out});
    return p;
}

// ---------------------------------------------------------------------------
// Convolution
// ---------------------------------------------------------------------------

Tensor conv2d(const Tensor& x, const ConvParams& p) {
    require_nhwc(x, "conv2d");
    if (p.dilation == 0) throw Error("conv2d: dilation must be positive");
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), Cin = x.dim(3);
    const std::size_t K = p.kernel_size, Cout = p.out_channels(), D = p.dilation;
    if (Cin != p.in_channels())
        throw Error("conv2d: input has " + std::to_string(Cin) + " channels, kernel expects " +
                    std::to_string(p.in_channels()));
    const std::ptrdiff_t P = static_cast<std::ptrdiff_t>(p.pad());

    Tensor out({N, H, W, Cout});
    const double* px = x.data();
    const double* pw = p.weights.data();
    const double* pb = p.bias.data();
    double* po = out.data();

    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t h = 0; h < H; ++h) {
            for (std::size_t w = 0; w < W; ++w) {
                double* orow = po + ((n * H + h) * W + w) * Cout;
                for (std::size_t co = 0; co < Cout; ++co) orow[co] = pb[co];
                for (std::size_t kh = 0; kh < K; ++kh) {
                    const std::ptrdiff_t ih =
                        static_cast<std::ptrdiff_t>(h) + static_cast<std::ptrdiff_t>(kh * D) - P;
                    if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(H)) continue;
                    for (std::size_t kw = 0; kw < K; ++kw) {
                        const std::ptrdiff_t iw =
                            static_cast<std::ptrdiff_t>(w) + static_cast<std::ptrdiff_t>(kw * D) - P;
                        if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(W)) continue;
                        const double* xrow =
                            px + ((n * H + static_cast<std::size_t>(ih)) * W +
                                  static_cast<std::size_t>(iw)) *
                                     Cin;
                        const double* wbase = pw + (kh * K + kw) * Cin * Cout;
                        for (std::size_t ci = 0; ci < Cin; ++ci) {
                            const double xv = xrow[ci];
                            const double* wrow = wbase + ci * Cout;
                            for (std::size_t co = 0; co < Cout; ++co)
                                orow[co] += xv * wrow[co];
                        }
                    }
                }
            }
        }
    }
    return out;
}

ConvGrads conv2d_backward(const Tensor& x, const ConvParams& p, const Tensor& grad_out) {
    require_nhwc(x, "conv2d backward");
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), Cin = x.dim(3);
    const std::size_t K = p.kernel_size, Cout = p.out_channels(), D = p.dilation;
    if (grad_out.shape() != Shape{N, H, W, Cout})
        throw Error("conv2d backward: grad shape " + shape_str(grad_out.shape()) +
                    " does not match output " + shape_str(Shape{N, H, W, Cout}));
    const std::ptrdiff_t P = static_cast<std::ptrdiff_t>(p.pad());

    ConvGrads g{Tensor(x.shape()), Tensor(p.weights.shape()), Tensor(p.bias.shape())};
    const double* px = x.data();
    const double* pw = p.weights.data();
    const double* pdy = grad_out.data();
    double* pgx = g.grad_x.data();
    double* pgw = g.grad_w.data();
    double* pgb = g.grad_b.data();

    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t h = 0; h < H; ++h) {
            for (std::size_t w = 0; w < W; ++w) {
                const double* dyrow = pdy + ((n * H + h) * W + w) * Cout;
                for (std::size_t co = 0; co < Cout; ++co) pgb[co] += dyrow[co];
                for (std::size_t kh = 0; kh < K; ++kh) {
                    const std::ptrdiff_t ih =
                        static_cast<std::ptrdiff_t>(h) + static_cast<std::ptrdiff_t>(kh * D) - P;
                    if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(H)) continue;
                    for (std::size_t kw = 0; kw < K; ++kw) {
                        const std::ptrdiff_t iw =
                            static_cast<std::ptrdiff_t>(w) + static_cast<std::ptrdiff_t>(kw * D) - P;
                        if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(W)) continue;
                        const std::size_t xoff =
                            ((n * H + static_cast<std::size_t>(ih)) * W +
                             static_cast<std::size_t>(iw)) *
                            Cin;
                        const std::size_t woff = (kh * K + kw) * Cin * Cout;
                        for (std::size_t ci = 0; ci < Cin; ++ci) {
                            const double xv = px[xoff + ci];
                            const double* wrow = pw + woff + ci * Cout;
                            double* gwrow = pgw + woff + ci * Cout;
                            double acc = 0.0;
                            for (std::size_t co = 0; co < Cout; ++co) {
                                const double dy = dyrow[co];
                                acc += wrow[co] * dy;
                                gwrow[co] += xv * dy;
                            }
                            pgx[xoff + ci] += acc;
                        }
                    }
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Batch normalization
// ---------------------------------------------------------------------------

Tensor batchnorm2d(const Tensor& x, BatchNormParams& p, Mode mode, BatchNormCache* cache) {
    require_nhwc(x, "batchnorm2d");
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), C = x.dim(3);
    if (C != p.channels())
        throw Error("batchnorm2d: input has " + std::to_string(C) + " channels, params have " +
                    std::to_string(p.channels()));
    const std::size_t M = N * H * W;
    const double* px = x.data();

    Tensor mean({C}), var({C});
    if (mode == Mode::train) {
        if (M < 2)
            throw Error("batchnorm2d: train mode needs at least 2 values per channel, got " +
                        std::to_string(M));
        double* pm = mean.data();
        double* pv = var.data();
        for (std::size_t i = 0; i < M; ++i) {
            const double* row = px + i * C;
            for (std::size_t c = 0; c < C; ++c) pm[c] += row[c];
        }
        for (std::size_t c = 0; c < C; ++c) pm[c] /= static_cast<double>(M);
        for (std::size_t i = 0; i < M; ++i) {
            const double* row = px + i * C;
            for (std::size_t c = 0; c < C; ++c) {
                const double d = row[c] - pm[c];
                pv[c] += d * d;
            }
        }
        for (std::size_t c = 0; c < C; ++c) pv[c] /= static_cast<double>(M);  // biased

        for (std::size_t c = 0; c < C; ++c) {
            p.running_mean[c] = p.momentum * p.running_mean[c] + (1.0 - p.momentum) * pm[c];
            p.running_var[c] = p.momentum * p.running_var[c] + (1.0 - p.momentum) * pv[c];
        }
        if (cache) {
            cache->batch_mean = mean;
            cache->batch_var = var;
        }
    } else {
        mean = p.running_mean;
        var = p.running_var;
    }

    Tensor out(x.shape());
    double* po = out.data();
    std::vector<double> scale(C), shift(C);
    for (std::size_t c = 0; c < C; ++c) {
        const double invstd = 1.0 / std::sqrt(var[c] + p.epsilon);
        scale[c] = p.gamma[c] * invstd;
        shift[c] = p.beta[c] - mean[c] * scale[c];
    }
    for (std::size_t i = 0; i < M; ++i) {
        const double* row = px + i * C;
        double* orow = po + i * C;
        for (std::size_t c = 0; c < C; ++c) orow[c] = row[c] * scale[c] + shift[c];
    }
    return out;
}

BatchNormGrads batchnorm2d_backward(const Tensor& x, const BatchNormParams& p, Mode mode,
                                    const BatchNormCache& cache, const Tensor& grad_out) {
    require_nhwc(x, "batchnorm2d backward");
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), C = x.dim(3);
    const std::size_t M = N * H * W;
    const double Md = static_cast<double>(M);

    const Tensor& mean = (mode == Mode::train) ? cache.batch_mean : p.running_mean;
    const Tensor& var = (mode == Mode::train) ? cache.batch_var : p.running_var;
    if (mean.size() != C || var.size() != C)
        throw Error("batchnorm2d backward: stale or missing statistics cache");

    BatchNormGrads g{Tensor(x.shape()), Tensor({C}), Tensor({C})};
    const double* px = x.data();
    const double* pdy = grad_out.data();
    double* pgx = g.grad_x.data();

    std::vector<double> invstd(C);
    for (std::size_t c = 0; c < C; ++c) invstd[c] = 1.0 / std::sqrt(var[c] + p.epsilon);

    // Reductions shared by both modes: sum dy and sum dy*xhat per channel.
    std::vector<double> sum_dy(C, 0.0), sum_dy_xhat(C, 0.0), sum_dx_centered(C, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        const double* xrow = px + i * C;
        const double* dyrow = pdy + i * C;
        for (std::size_t c = 0; c < C; ++c) {
            const double xhat = (xrow[c] - mean[c]) * invstd[c];
            sum_dy[c] += dyrow[c];
            sum_dy_xhat[c] += dyrow[c] * xhat;
        }
    }
    for (std::size_t c = 0; c < C; ++c) {
        g.grad_beta[c] = sum_dy[c];
        g.grad_gamma[c] = sum_dy_xhat[c];
    }

    if (mode == Mode::eval) {
        // Pure affine: dx = dy * gamma * invstd.
        for (std::size_t i = 0; i < M; ++i) {
            const double* dyrow = pdy + i * C;
            double* gxrow = pgx + i * C;
            for (std::size_t c = 0; c < C; ++c) gxrow[c] = dyrow[c] * p.gamma[c] * invstd[c];
        }
        return g;
    }

    // Train mode: gradients flow through the batch mean and variance too.
    // dvar_c = sum(dxhat * (x - mu)) * (-1/2) * invstd^3
    // dmu_c  = -invstd * sum(dxhat) + dvar * (-2/M) * sum(x - mu)
    std::vector<double> dvar(C, 0.0), dmu(C, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        const double* xrow = px + i * C;
        const double* dyrow = pdy + i * C;
        for (std::size_t c = 0; c < C; ++c) {
            const double centered = xrow[c] - mean[c];
            dvar[c] += dyrow[c] * p.gamma[c] * centered;
            sum_dx_centered[c] += centered;
        }
    }
    for (std::size_t c = 0; c < C; ++c) {
        dvar[c] *= -0.5 * invstd[c] * invstd[c] * invstd[c];
        dmu[c] = -invstd[c] * p.gamma[c] * sum_dy[c] +
                 dvar[c] * (-2.0 / Md) * sum_dx_centered[c];
    }
    for (std::size_t i = 0; i < M; ++i) {
        const double* xrow = px + i * C;
        const double* dyrow = pdy + i * C;
        double* gxrow = pgx + i * C;
        for (std::size_t c = 0; c < C; ++c) {
            const double centered = xrow[c] - mean[c];
            gxrow[c] = dyrow[c] * p.gamma[c] * invstd[c] +
                       dvar[c] * 2.0 * centered / Md + dmu[c] / Md;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Pooling
// ---------------------------------------------------------------------------

Tensor maxpool2d(const Tensor& x) {
    require_nhwc(x, "maxpool2d");
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), C = x.dim(3);
    if (H < 2 || W < 2)
        throw Error("maxpool2d: spatial dims must be >= 2, got " + shape_str(x.shape()));
    const std::size_t H2 = H / 2, W2 = W / 2;
    Tensor out({N, H2, W2, C});
    const double* px = x.data();
    double* po = out.data();
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t h = 0; h < H2; ++h)
            for (std::size_t w = 0; w < W2; ++w) {
                const std::size_t base00 = ((n * H + 2 * h) * W + 2 * w) * C;
                const std::size_t base01 = base00 + C;
                const std::size_t base10 = base00 + W * C;
                const std::size_t base11 = base10 + C;
                double* orow = po + ((n * H2 + h) * W2 + w) * C;
                for (std::size_t c = 0; c < C; ++c) {
                    double m = px[base00 + c];
                    if (px[base01 + c] > m) m = px[base01 + c];
                    if (px[base10 + c] > m) m = px[base10 + c];
                    if (px[base11 + c] > m) m = px[base11 + c];
                    orow[c] = m;
                }
            }
    return out;
}

Tensor maxpool2d_backward(const Tensor& x, const Tensor& grad_out) {
    require_nhwc(x, "maxpool2d backward");
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), C = x.dim(3);
    const std::size_t H2 = H / 2, W2 = W / 2;
    if (grad_out.shape() != Shape{N, H2, W2, C})
        throw Error("maxpool2d backward: grad shape " + shape_str(grad_out.shape()) +
                    " does not match pooled shape");
    Tensor gx(x.shape());
    const double* px = x.data();
    const double* pdy = grad_out.data();
    double* pgx = gx.data();
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t h = 0; h < H2; ++h)
            for (std::size_t w = 0; w < W2; ++w) {
                const std::size_t bases[4] = {
                    ((n * H + 2 * h) * W + 2 * w) * C,
                    ((n * H + 2 * h) * W + 2 * w + 1) * C,
                    ((n * H + 2 * h + 1) * W + 2 * w) * C,
                    ((n * H + 2 * h + 1) * W + 2 * w + 1) * C,
                };
                const double* dyrow = pdy + ((n * H2 + h) * W2 + w) * C;
                for (std::size_t c = 0; c < C; ++c) {
                    // first maximum in row-major window order wins ties
                    std::size_t best = 0;
                    double m = px[bases[0] + c];
                    for (std::size_t k = 1; k < 4; ++k)
                        if (px[bases[k] + c] > m) {
                            m = px[bases[k] + c];
                            best = k;
                        }
                    pgx[bases[best] + c] += dyrow[c];
                }
            }
    return gx;
}

Tensor global_avg_pool(const Tensor& x) {
    require_nhwc(x, "global_avg_pool");
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), C = x.dim(3);
    Tensor out({N, C});
    const double* px = x.data();
    double* po = out.data();
    const double inv = 1.0 / static_cast<double>(H * W);
    for (std::size_t n = 0; n < N; ++n) {
        double* orow = po + n * C;
        for (std::size_t i = 0; i < H * W; ++i) {
            const double* row = px + (n * H * W + i) * C;
            for (std::size_t c = 0; c < C; ++c) orow[c] += row[c];
        }
        for (std::size_t c = 0; c < C; ++c) orow[c] *= inv;
    }
    return out;
}

Tensor global_avg_pool_backward(const Shape& x_shape, const Tensor& grad_out) {
    const std::size_t N = x_shape[0], H = x_shape[1], W = x_shape[2], C = x_shape[3];
    if (grad_out.shape() != Shape{N, C})
        throw Error("global_avg_pool backward: grad shape " + shape_str(grad_out.shape()) +
                    " does not match [N,C]");
    Tensor gx(x_shape);
    const double inv = 1.0 / static_cast<double>(H * W);
    const double* pdy = grad_out.data();
    double* pgx = gx.data();
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t i = 0; i < H * W; ++i) {
            double* row = pgx + (n * H * W + i) * C;
            const double* dyrow = pdy + n * C;
            for (std::size_t c = 0; c < C; ++c) row[c] = dyrow[c] * inv;
        }
    return gx;
}

// ---------------------------------------------------------------------------
// Dense
// ---------------------------------------------------------------------------

Tensor dense(const Tensor& x, const DenseParams& p) {
    if (x.rank() != 2)
        throw Error("dense: rank-2 input required, got " + shape_str(x.shape()));
    if (x.dim(1) != p.in_width())
        throw Error("dense: input width " + std::to_string(x.dim(1)) +
                    " does not match layer width " + std::to_string(p.in_width()));
    Tensor out = matmul(x, p.weights);
    return add(out, p.bias);
}

DenseGrads dense_backward(const Tensor& x, const DenseParams& p, const Tensor& grad_out) {
    const std::size_t N = x.dim(0), in = p.in_width(), out = p.out_width();
    if (grad_out.shape() != Shape{N, out})
        throw Error("dense backward: grad shape " + shape_str(grad_out.shape()) +
                    " does not match [N,out]");
    DenseGrads g{Tensor({N, in}), Tensor({in, out}), Tensor({out})};
    const double* px = x.data();
    const double* pw = p.weights.data();
    const double* pdy = grad_out.data();
    for (std::size_t n = 0; n < N; ++n) {
        const double* dyrow = pdy + n * out;
        const double* xrow = px + n * in;
        double* gxrow = g.grad_x.data() + n * in;
        for (std::size_t o = 0; o < out; ++o) g.grad_b[o] += dyrow[o];
        for (std::size_t i = 0; i < in; ++i) {
            const double* wrow = pw + i * out;
            double* gwrow = g.grad_w.data() + i * out;
            const double xv = xrow[i];
            double acc = 0.0;
            for (std::size_t o = 0; o < out; ++o) {
                acc += wrow[o] * dyrow[o];
                gwrow[o] += xv * dyrow[o];
            }
            gxrow[i] = acc;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

Tensor relu(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.vec())
        if (v < 0.0) v = 0.0;
    return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
    Tensor gx(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) gx[i] = x[i] > 0.0 ? grad_out[i] : 0.0;
    return gx;
}

Tensor sigmoid(const Tensor& x) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        if (v >= 0.0) {
            out[i] = 1.0 / (1.0 + std::exp(-v));
        } else {
            const double e = std::exp(v);
            out[i] = e / (1.0 + e);
        }
    }
    return out;
}

Tensor sigmoid_backward(const Tensor& y, const Tensor& grad_out) {
    Tensor gx(y.shape());
    for (std::size_t i = 0; i < y.size(); ++i) gx[i] = grad_out[i] * y[i] * (1.0 - y[i]);
    return gx;
}

// ---------------------------------------------------------------------------
// Dropout
// ---------------------------------------------------------------------------

DropoutResult dropout(const Tensor& x, const DropoutSpec& spec, Rng& rng) {
    if (spec.rate < 0.0 || spec.rate >= 1.0)
        throw Error("dropout: rate must be in [0,1), got " + std::to_string(spec.rate));
    if (spec.mode == Mode::eval || spec.rate == 0.0)
        return {x, Tensor::ones(x.shape())};
    const double keep_scale = 1.0 / (1.0 - spec.rate);
    DropoutResult r{Tensor(x.shape()), Tensor(x.shape())};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = rng.bernoulli(spec.rate) ? 0.0 : keep_scale;
        r.mask[i] = m;
        r.output[i] = x[i] * m;
    }
    return r;
}

Tensor dropout_backward(const Tensor& mask, const Tensor& grad_out) {
    return mul(grad_out, mask);
}

// ---------------------------------------------------------------------------
// Softmax cross-entropy
// ---------------------------------------------------------------------------

namespace {

std::size_t onehot_row_index(const Tensor& onehot, std::size_t n, std::size_t K) {
    std::size_t idx = K;
    const double* row = onehot.data() + n * K;
    for (std::size_t k = 0; k < K; ++k) {
        if (row[k] == 1.0) {
            if (idx != K) throw Error("softmax_cross_entropy: multiple 1s in one-hot row " +
                                      std::to_string(n));
            idx = k;
        } else if (row[k] != 0.0) {
            throw Error("softmax_cross_entropy: malformed one-hot row " + std::to_string(n));
        }
    }
    if (idx == K) throw Error("softmax_cross_entropy: one-hot row " + std::to_string(n) +
                              " has no 1");
    return idx;
}

}  // namespace

Tensor softmax(const Tensor& logits) {
    if (logits.rank() != 2)
        throw Error("softmax: rank-2 logits required, got " + shape_str(logits.shape()));
    const std::size_t N = logits.dim(0), K = logits.dim(1);
    Tensor probs({N, K});
    for (std::size_t n = 0; n < N; ++n) {
        const double* row = logits.data() + n * K;
        double* prow = probs.data() + n * K;
        double mx = row[0];
        for (std::size_t k = 1; k < K; ++k) mx = std::max(mx, row[k]);
        double denom = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            prow[k] = std::exp(row[k] - mx);
            denom += prow[k];
        }
        for (std::size_t k = 0; k < K; ++k) prow[k] /= denom;
    }
    return probs;
}

SoftmaxLoss softmax_cross_entropy(const Tensor& logits, const Tensor& onehot) {
    if (!logits.same_shape(onehot))
        throw Error("softmax_cross_entropy: logits " + shape_str(logits.shape()) +
                    " vs labels " + shape_str(onehot.shape()));
    const std::size_t N = logits.dim(0), K = logits.dim(1);
    SoftmaxLoss r;
    r.probs = Tensor({N, K});
    double loss = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t truth = onehot_row_index(onehot, n, K);
        const double* row = logits.data() + n * K;
        double* prow = r.probs.data() + n * K;
        double mx = row[0];
        for (std::size_t k = 1; k < K; ++k) mx = std::max(mx, row[k]);
        double denom = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            prow[k] = std::exp(row[k] - mx);
            denom += prow[k];
        }
        for (std::size_t k = 0; k < K; ++k) prow[k] /= denom;
        // -log p_true, computed in shifted space for stability
        loss += std::log(denom) - (row[truth] - mx);
    }
    r.loss = loss / static_cast<double>(N);
    return r;
}

Tensor softmax_cross_entropy_backward(const Tensor& probs, const Tensor& onehot) {
    const double invN = 1.0 / static_cast<double>(probs.dim(0));
    Tensor g = sub(probs, onehot);
    for (double& v : g.vec()) v *= invN;
    return g;
}

}  // namespace ynet
