#pragma once

#include <cstddef>

#include "ynet/rng.hpp"
#include "ynet/tensor.hpp"

namespace ynet {

enum class Mode { train, eval };

// ---------------------------------------------------------------------------
// Parameter bundles
// ---------------------------------------------------------------------------

// Stride-1, zero same-padded 2D cross-correlation with dilation.
// Effective kernel extent is d*(k-1)+1 (always odd here), so same padding
// is (extent-1)/2 per side and output spatial dims equal input dims.
struct ConvParams {
    Tensor weights;  // [k, k, Cin, Cout]
    Tensor bias;     // [Cout]
    std::size_t kernel_size = 3;
    std::size_t dilation = 1;

    std::size_t in_channels() const { return weights.dim(2); }
    std::size_t out_channels() const { return weights.dim(3); }
    std::size_t pad() const { return dilation * (kernel_size - 1) / 2; }
};

struct BatchNormParams {
    Tensor gamma;         // [C]
    Tensor beta;          // [C]
    Tensor running_mean;  // [C]
    Tensor running_var;   // [C]
    double epsilon = 1e-5;
    double momentum = 0.9;

    std::size_t channels() const { return gamma.dim(0); }
};

struct DenseParams {
    Tensor weights;  // [in, out]
    Tensor bias;     // [out]

    std::size_t in_width() const { return weights.dim(0); }
    std::size_t out_width() const { return weights.dim(1); }
};

// Inverted dropout: eval mode is the identity; train mode zeroes each
// element with probability `rate` and scales survivors by 1/(1-rate).
struct DropoutSpec {
    double rate = 0.0;
    Mode mode = Mode::eval;
};

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

Tensor he_normal(Shape shape, std::size_t fan_in, Rng& rng);
Tensor xavier_normal(Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng);

ConvParams make_conv(std::size_t k, std::size_t cin, std::size_t cout,
                     std::size_t dilation = 1);
BatchNormParams make_batchnorm(std::size_t channels, double epsilon = 1e-5,
                               double momentum = 0.9);
DenseParams make_dense(std::size_t in, std::size_t out);

// ---------------------------------------------------------------------------
// Forward / backward kernels (NHWC layout throughout)
// ---------------------------------------------------------------------------

struct ConvGrads {
    Tensor grad_x;
    Tensor grad_w;
    Tensor grad_b;
};

Tensor conv2d(const Tensor& x, const ConvParams& p);
ConvGrads conv2d_backward(const Tensor& x, const ConvParams& p, const Tensor& grad_out);

// Batch statistics saved by a train-mode forward for the matching backward.
struct BatchNormCache {
    Tensor batch_mean;  // [C]
    Tensor batch_var;   // [C], biased
};

struct BatchNormGrads {
    Tensor grad_x;
    Tensor grad_gamma;
    Tensor grad_beta;
};

// Train mode normalizes with batch statistics over (N,H,W) per channel and
// updates p's running stats as running <- momentum*running + (1-momentum)*batch.
// Eval mode uses running stats only and leaves p untouched.
Tensor batchnorm2d(const Tensor& x, BatchNormParams& p, Mode mode,
                   BatchNormCache* cache = nullptr);
BatchNormGrads batchnorm2d_backward(const Tensor& x, const BatchNormParams& p,
                                    Mode mode, const BatchNormCache& cache,
                                    const Tensor& grad_out);

// 2x2 kernel, stride 2, no padding; odd trailing row/column dropped.
// Backward routes each output gradient to the window argmax, first in
// row-major order on ties.
Tensor maxpool2d(const Tensor& x);
Tensor maxpool2d_backward(const Tensor& x, const Tensor& grad_out);

Tensor global_avg_pool(const Tensor& x);  // [N,H,W,C] -> [N,C]
Tensor global_avg_pool_backward(const Shape& x_shape, const Tensor& grad_out);

struct DenseGrads {
    Tensor grad_x;
    Tensor grad_w;
    Tensor grad_b;
};

Tensor dense(const Tensor& x, const DenseParams& p);  // x [N,in] -> [N,out]
DenseGrads dense_backward(const Tensor& x, const DenseParams& p, const Tensor& grad_out);

Tensor relu(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);  // d/dx at 0 is 0
Tensor sigmoid(const Tensor& x);                                // outputs in (0,1)
Tensor sigmoid_backward(const Tensor& y, const Tensor& grad_out);  // y = sigmoid(x)

struct DropoutResult {
    Tensor output;
    Tensor mask;  // per-element applied factor: 0 or 1/(1-rate); all 1 in eval
};

DropoutResult dropout(const Tensor& x, const DropoutSpec& spec, Rng& rng);
Tensor dropout_backward(const Tensor& mask, const Tensor& grad_out);

struct SoftmaxLoss {
    double loss = 0.0;  // mean over batch of -log p[true]
    Tensor probs;       // [N,K], rows sum to 1
};

// Shift-stabilized softmax + categorical cross-entropy. Labels must be
// valid one-hot rows.
SoftmaxLoss softmax_cross_entropy(const Tensor& logits, const Tensor& onehot);
Tensor softmax_cross_entropy_backward(const Tensor& probs, const Tensor& onehot);

Tensor softmax(const Tensor& logits);  // row-wise, [N,K]

}  // namespace ynet
