#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ynet/layers.hpp"
#include "ynet/rng.hpp"
#include "ynet/tensor.hpp"

namespace ynet {

// Architecture hyperparameters. Defaults give the full-size network:
// two 4-block branches (3x3 and 5x5 kernels, channels 64/128/256/512),
// a 1-channel dilated-conv attention bridge after block 1, channel
// concatenation + GAP into a 250/100 MLP head with softmax output.
struct ModelConfig {
    std::size_t input_size = 224;  // spatial dims must be divisible by 16
    std::size_t in_channels = 3;
    std::array<std::size_t, 4> channels{64, 128, 256, 512};
    std::array<std::size_t, 2> head_widths{250, 100};
    std::size_t num_classes = 30;
    double dropout1 = 0.3;  // before the first hidden dense layer
    double dropout2 = 0.2;  // before the second hidden dense layer
    double bn_epsilon = 1e-5;
    double bn_momentum = 0.9;
    bool fusam_bypass = false;  // attention map forced to all-ones
    std::vector<std::string> class_names;  // optional, carried in checkpoints

    std::size_t fused_width() const { return 2 * channels[3]; }
};

// Reduced preset used by CI and the smoke workflows.
ModelConfig tiny_config(std::size_t num_classes = 3);

struct ConvBlock {
    ConvParams conv;
    BatchNormParams bn;
};

struct ARNetBranch {
    std::array<ConvBlock, 4> blocks;
    std::size_t kernel_size = 3;
};

struct FuSAM {
    ConvParams attn_conv;  // k=3, dilation=2, Cout=1
};

struct YNetModel {
    ModelConfig cfg;
    ARNetBranch branch1;  // 3x3 kernels
    ARNetBranch branch2;  // 5x5 kernels
    FuSAM fusam;
    DenseParams fc1, fc2, fc3;

    struct ParamRef {
        std::string name;
        Tensor* tensor;
    };

    // Trainable parameters in checkpoint order.
    std::vector<ParamRef> parameters();
    // Trainable parameters plus BN running statistics, checkpoint order.
    std::vector<ParamRef> state_tensors();
};

// Fresh model with He/Xavier initialization; reproducible per (cfg, seed).
YNetModel create_model(const ModelConfig& cfg, std::uint64_t seed);
// All-zero parameters; used by checkpoint loading.
YNetModel create_uninitialized(const ModelConfig& cfg);

struct ShapeTraceEntry {
    std::string name;
    Shape shape;
};

struct ForwardResult {
    Tensor probs;   // [N,K] rows sum to 1
    Tensor logits;  // [N,K]
    std::vector<ShapeTraceEntry> trace;
};

struct BlockCache {
    Tensor input;
    Tensor conv_out;  // pre-ReLU
    Tensor relu_out;  // BN input
    BatchNormCache bn_stats;
    Tensor bn_out;  // pool input
};

struct ForwardCache {
    Mode mode = Mode::train;
    bool fusam_applied = false;
    std::array<BlockCache, 4> b1, b2;
    Tensor concat1;   // block-1 outputs concatenated on channels
    Tensor attn;      // A, [N,Hp,Wp,1]
    Tensor recal1, recal2;
    Shape concat4_shape;
    Tensor fused;  // post-GAP, [N, 2*C4]
    Tensor drop1_mask, d1_in;
    Tensor fc1_out, relu1_out;
    Tensor drop2_mask, d2_in;
    Tensor fc2_out, relu2_out;
    Tensor probs;
};

// Full forward pass. Train mode updates BN running statistics and consumes
// rng for dropout; eval mode touches neither. When `cache` is non-null every
// intermediate needed by backward() is retained.
ForwardResult forward(YNetModel& m, const Tensor& x, Mode mode, Rng& rng,
                      ForwardCache* cache = nullptr);

// Eval-mode forward that releases intermediates as it goes (no cache).
ForwardResult forward_eval(const YNetModel& m, const Tensor& x, bool want_trace = false);

// Reference dual-branch forward with the attention bridge absent entirely;
// lets the bypass flag (map forced to 1) be checked against a true skip.
ForwardResult forward_eval_no_attention(const YNetModel& m, const Tensor& x);

// Post-GAP fusion vector per sample, eval mode. [N, 2*C4]
Tensor embed(const YNetModel& m, const Tensor& x);

using GradMap = std::map<std::string, Tensor>;

// Test hooks: drop the gradient flowing from a branch's own blocks 2-4
// into its recalibrated block-1 output, isolating the attention path.
struct BackwardOptions {
    bool cut_branch1_downstream = false;
    bool cut_branch2_downstream = false;
};

// Exact analytic gradients for every trainable parameter. Requires the
// cache produced by forward() for the same inputs and rng state.
GradMap backward(const YNetModel& m, const ForwardCache& cache, const Tensor& onehot,
                 const BackwardOptions& opts = {});

struct ParamCount {
    std::string name;
    Shape shape;
    std::size_t trainable = 0;
    std::size_t running = 0;  // BN running statistics
};

std::vector<ParamCount> count_parameters(const YNetModel& m);
std::size_t total_trainable(const YNetModel& m);

// Checkpoint container:
//   magic "YNC1" | u32 descriptor length | descriptor JSON (UTF-8) |
//   records: u32 name length | name bytes | YTF blob, in state_tensors order.
// `extra` records (optimizer state, progress counters) follow the model's.
void save_checkpoint(const YNetModel& m, const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, Tensor>>& extra = {});

// Loads a checkpoint. When `expected` is given, its architecture fields must
// match the file's descriptor exactly (shape or layer-count disagreements
// raise IoError). Extra records, if any, are returned through `extra_out`.
YNetModel load_checkpoint(const std::filesystem::path& path,
                          const ModelConfig* expected = nullptr,
                          std::vector<std::pair<std::string, Tensor>>* extra_out = nullptr);

}  // namespace ynet
