#include "ynet/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace ynet {

using nlohmann::json;

ModelConfig tiny_config(std::size_t num_classes) {
    ModelConfig cfg;
    cfg.input_size = 32;
    cfg.channels = {8, 16, 32, 64};
    cfg.head_widths = {32, 16};
    cfg.num_classes = num_classes;
    return cfg;
}

namespace {

void validate_config(const ModelConfig& cfg) {
    if (cfg.input_size < 16 || cfg.input_size % 16 != 0)
        throw Error("model: input size must be a multiple of 16, got " +
                    std::to_string(cfg.input_size));
    if (cfg.num_classes < 2)
        throw Error("model: need at least 2 classes, got " + std::to_string(cfg.num_classes));
    for (std::size_t c : cfg.channels)
        if (c == 0) throw Error("model: zero channel count in plan");
    for (std::size_t w : cfg.head_widths)
        if (w == 0) throw Error("model: zero head width");
    if (cfg.dropout1 < 0 || cfg.dropout1 >= 1 || cfg.dropout2 < 0 || cfg.dropout2 >= 1)
        throw Error("model: dropout rates must be in [0,1)");
}

ARNetBranch make_branch(const ModelConfig& cfg, std::size_t k) {
    ARNetBranch b;
    b.kernel_size = k;
    std::size_t cin = cfg.in_channels;
    for (std::size_t i = 0; i < 4; ++i) {
        b.blocks[i].conv = make_conv(k, cin, cfg.channels[i]);
        b.blocks[i].bn = make_batchnorm(cfg.channels[i], cfg.bn_epsilon, cfg.bn_momentum);
        cin = cfg.channels[i];
    }
    return b;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    const std::size_t N = a.dim(0), H = a.dim(1), W = a.dim(2);
    const std::size_t Ca = a.dim(3), Cb = b.dim(3);
    Tensor out({N, H, W, Ca + Cb});
    const std::size_t rows = N * H * W;
    for (std::size_t i = 0; i < rows; ++i) {
        double* orow = out.data() + i * (Ca + Cb);
        const double* arow = a.data() + i * Ca;
        const double* brow = b.data() + i * Cb;
        std::copy(arow, arow + Ca, orow);
        std::copy(brow, brow + Cb, orow + Ca);
    }
    return out;
}

std::pair<Tensor, Tensor> split_channels(const Tensor& x, std::size_t ca) {
    const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), C = x.dim(3);
    const std::size_t cb = C - ca;
    Tensor a({N, H, W, ca}), b({N, H, W, cb});
    const std::size_t rows = N * H * W;
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = x.data() + i * C;
        std::copy(row, row + ca, a.data() + i * ca);
        std::copy(row + ca, row + C, b.data() + i * cb);
    }
    return {std::move(a), std::move(b)};
}

void require_input(const ModelConfig& cfg, const Tensor& x) {
    if (x.rank() != 4 || x.dim(3) != cfg.in_channels)
        throw Error("model: NHWC input with " + std::to_string(cfg.in_channels) +
                    " channels required, got " + shape_str(x.shape()));
    if (x.dim(1) < 16 || x.dim(2) < 16 || x.dim(1) % 16 != 0 || x.dim(2) % 16 != 0)
        throw Error("model: spatial dims must be multiples of 16, got " +
                    shape_str(x.shape()));
}

enum class AttnMode { apply, bypass_ones, skip };

}  // namespace

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

YNetModel create_uninitialized(const ModelConfig& cfg) {
    validate_config(cfg);
    YNetModel m;
    m.cfg = cfg;
    m.branch1 = make_branch(cfg, 3);
    m.branch2 = make_branch(cfg, 5);
    m.fusam.attn_conv = make_conv(3, 2 * cfg.channels[0], 1, 2);
    m.fc1 = make_dense(cfg.fused_width(), cfg.head_widths[0]);
    m.fc2 = make_dense(cfg.head_widths[0], cfg.head_widths[1]);
    m.fc3 = make_dense(cfg.head_widths[1], cfg.num_classes);
    return m;
}

YNetModel create_model(const ModelConfig& cfg, std::uint64_t seed) {
    YNetModel m = create_uninitialized(cfg);

    auto he = [&](Tensor& w, std::size_t fan_in, const std::string& name) {
        Rng rng(seed, Rng::stream(name));
        w = he_normal(w.shape(), fan_in, rng);
    };
    for (auto* branch : {&m.branch1, &m.branch2}) {
        const std::string bname = branch == &m.branch1 ? "branch1" : "branch2";
        const std::size_t k = branch->kernel_size;
        for (std::size_t i = 0; i < 4; ++i) {
            ConvParams& c = branch->blocks[i].conv;
            he(c.weights, k * k * c.in_channels(),
               bname + ".block" + std::to_string(i + 1) + ".conv.w");
        }
    }
    {
        // Sigmoid-activated attention conv gets Xavier init.
        ConvParams& c = m.fusam.attn_conv;
        Rng rng(seed, Rng::stream("fusam.conv.w"));
        const std::size_t k = c.kernel_size;
        c.weights = xavier_normal(c.weights.shape(), k * k * c.in_channels(),
                                  k * k * c.out_channels(), rng);
    }
    he(m.fc1.weights, m.fc1.in_width(), "head.fc1.w");
    he(m.fc2.weights, m.fc2.in_width(), "head.fc2.w");
    {
        // Output layer feeds softmax, not ReLU.
        Rng rng(seed, Rng::stream("head.fc3.w"));
        m.fc3.weights =
            xavier_normal(m.fc3.weights.shape(), m.fc3.in_width(), m.fc3.out_width(), rng);
    }
    return m;
}

std::vector<YNetModel::ParamRef> YNetModel::parameters() {
    std::vector<ParamRef> out;
    for (auto* branch : {&branch1, &branch2}) {
        const std::string bname = branch == &branch1 ? "branch1" : "branch2";
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string p = bname + ".block" + std::to_string(i + 1);
            ConvBlock& blk = branch->blocks[i];
            out.push_back({p + ".conv.w", &blk.conv.weights});
            out.push_back({p + ".conv.b", &blk.conv.bias});
            out.push_back({p + ".bn.gamma", &blk.bn.gamma});
            out.push_back({p + ".bn.beta", &blk.bn.beta});
        }
    }
    out.push_back({"fusam.conv.w", &fusam.attn_conv.weights});
    out.push_back({"fusam.conv.b", &fusam.attn_conv.bias});
    out.push_back({"head.fc1.w", &fc1.weights});
    out.push_back({"head.fc1.b", &fc1.bias});
    out.push_back({"head.fc2.w", &fc2.weights});
    out.push_back({"head.fc2.b", &fc2.bias});
    out.push_back({"head.fc3.w", &fc3.weights});
    out.push_back({"head.fc3.b", &fc3.bias});
    return out;
}

std::vector<YNetModel::ParamRef> YNetModel::state_tensors() {
    std::vector<ParamRef> out;
    for (auto* branch : {&branch1, &branch2}) {
        const std::string bname = branch == &branch1 ? "branch1" : "branch2";
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string p = bname + ".block" + std::to_string(i + 1);
            ConvBlock& blk = branch->blocks[i];
            out.push_back({p + ".conv.w", &blk.conv.weights});
            out.push_back({p + ".conv.b", &blk.conv.bias});
            out.push_back({p + ".bn.gamma", &blk.bn.gamma});
            out.push_back({p + ".bn.beta", &blk.bn.beta});
            out.push_back({p + ".bn.rmean", &blk.bn.running_mean});
            out.push_back({p + ".bn.rvar", &blk.bn.running_var});
        }
    }
    out.push_back({"fusam.conv.w", &fusam.attn_conv.weights});
    out.push_back({"fusam.conv.b", &fusam.attn_conv.bias});
    out.push_back({"head.fc1.w", &fc1.weights});
    out.push_back({"head.fc1.b", &fc1.bias});
    out.push_back({"head.fc2.w", &fc2.weights});
    out.push_back({"head.fc2.b", &fc2.bias});
    out.push_back({"head.fc3.w", &fc3.weights});
    out.push_back({"head.fc3.b", &fc3.bias});
    return out;
}

// ---------------------------------------------------------------------------
// Forward
// ---------------------------------------------------------------------------

namespace {

Tensor block_eval(const Tensor& in, const ConvBlock& blk) {
    Tensor t = conv2d(in, blk.conv);
    t = relu(t);
    // eval-mode batchnorm reads running stats only; safe on a const model
    t = batchnorm2d(t, const_cast<BatchNormParams&>(blk.bn), Mode::eval);
    return maxpool2d(t);
}

Tensor block_forward(const Tensor& in, ConvBlock& blk, Mode mode, BlockCache& c) {
    c.input = in;
    c.conv_out = conv2d(in, blk.conv);
    c.relu_out = relu(c.conv_out);
    c.bn_out = batchnorm2d(c.relu_out, blk.bn, mode, &c.bn_stats);
    return maxpool2d(c.bn_out);
}

AttnMode attn_mode_of(const YNetModel& m) {
    return m.cfg.fusam_bypass ? AttnMode::bypass_ones : AttnMode::apply;
}

ForwardResult eval_impl(const YNetModel& m, const Tensor& x, AttnMode attn,
                        bool want_trace, Tensor* fused_out) {
    require_input(m.cfg, x);
    ForwardResult r;
    auto trace = [&](const std::string& name, const Shape& s) {
        if (want_trace) r.trace.push_back({name, s});
    };
    trace("input", x.shape());

    Tensor p1 = block_eval(x, m.branch1.blocks[0]);
    Tensor p2 = block_eval(x, m.branch2.blocks[0]);
    trace("branch1.block1", p1.shape());
    trace("branch2.block1", p2.shape());

    if (attn == AttnMode::apply) {
        Tensor a = sigmoid(conv2d(concat_channels(p1, p2), m.fusam.attn_conv));
        trace("fusam.attention", a.shape());
        p1 = mul(p1, a);
        p2 = mul(p2, a);
    } else if (attn == AttnMode::bypass_ones) {
        Tensor a = Tensor::ones({p1.dim(0), p1.dim(1), p1.dim(2), 1});
        trace("fusam.attention", a.shape());
        p1 = mul(p1, a);
        p2 = mul(p2, a);
    }

    for (std::size_t i = 1; i < 4; ++i) {
        p1 = block_eval(p1, m.branch1.blocks[i]);
        p2 = block_eval(p2, m.branch2.blocks[i]);
        trace("branch1.block" + std::to_string(i + 1), p1.shape());
        trace("branch2.block" + std::to_string(i + 1), p2.shape());
    }

    Tensor fused = global_avg_pool(concat_channels(p1, p2));
    trace("fused", fused.shape());
    if (fused_out) *fused_out = fused;

    // dropout is the identity in eval mode
    Tensor h = relu(dense(fused, m.fc1));
    h = relu(dense(h, m.fc2));
    r.logits = dense(h, m.fc3);
    trace("logits", r.logits.shape());
    r.probs = softmax(r.logits);
    trace("probs", r.probs.shape());
    return r;
}

ForwardResult cached_impl(YNetModel& m, const Tensor& x, Mode mode, Rng& rng,
                          ForwardCache& c, AttnMode attn) {
    require_input(m.cfg, x);
    ForwardResult r;
    c.mode = mode;
    c.fusam_applied = attn == AttnMode::apply;

    Tensor p1 = block_forward(x, m.branch1.blocks[0], mode, c.b1[0]);
    Tensor p2 = block_forward(x, m.branch2.blocks[0], mode, c.b2[0]);

    if (attn == AttnMode::apply) {
        c.concat1 = concat_channels(p1, p2);
        c.attn = sigmoid(conv2d(c.concat1, m.fusam.attn_conv));
        c.recal1 = mul(p1, c.attn);
        c.recal2 = mul(p2, c.attn);
    } else if (attn == AttnMode::bypass_ones) {
        c.attn = Tensor::ones({p1.dim(0), p1.dim(1), p1.dim(2), 1});
        c.recal1 = mul(p1, c.attn);
        c.recal2 = mul(p2, c.attn);
    } else {
        c.recal1 = p1;
        c.recal2 = p2;
    }

    p1 = c.recal1;
    p2 = c.recal2;
    for (std::size_t i = 1; i < 4; ++i) {
        p1 = block_forward(p1, m.branch1.blocks[i], mode, c.b1[i]);
        p2 = block_forward(p2, m.branch2.blocks[i], mode, c.b2[i]);
    }

    Tensor concat4 = concat_channels(p1, p2);
    c.concat4_shape = concat4.shape();
    c.fused = global_avg_pool(concat4);

    DropoutSpec d1{m.cfg.dropout1, mode}, d2{m.cfg.dropout2, mode};
    auto dr1 = dropout(c.fused, d1, rng);
    c.drop1_mask = dr1.mask;
    c.d1_in = dr1.output;
    c.fc1_out = dense(c.d1_in, m.fc1);
    c.relu1_out = relu(c.fc1_out);
    auto dr2 = dropout(c.relu1_out, d2, rng);
    c.drop2_mask = dr2.mask;
    c.d2_in = dr2.output;
    c.fc2_out = dense(c.d2_in, m.fc2);
    c.relu2_out = relu(c.fc2_out);
    r.logits = dense(c.relu2_out, m.fc3);
    r.probs = softmax(r.logits);
    c.probs = r.probs;
    return r;
}

}  // namespace

ForwardResult forward(YNetModel& m, const Tensor& x, Mode mode, Rng& rng,
                      ForwardCache* cache) {
    if (cache) return cached_impl(m, x, mode, rng, *cache, attn_mode_of(m));
    if (mode == Mode::eval) return eval_impl(m, x, attn_mode_of(m), false, nullptr);
    ForwardCache local;
    return cached_impl(m, x, mode, rng, local, attn_mode_of(m));
}

ForwardResult forward_eval(const YNetModel& m, const Tensor& x, bool want_trace) {
    return eval_impl(m, x, attn_mode_of(m), want_trace, nullptr);
}

ForwardResult forward_eval_no_attention(const YNetModel& m, const Tensor& x) {
    return eval_impl(m, x, AttnMode::skip, false, nullptr);
}

Tensor embed(const YNetModel& m, const Tensor& x) {
    Tensor fused;
    eval_impl(m, x, attn_mode_of(m), false, &fused);
    return fused;
}

// ---------------------------------------------------------------------------
// Backward
// ---------------------------------------------------------------------------

namespace {

Tensor block_backward(const ConvBlock& blk, const BlockCache& c, Mode mode,
                      const Tensor& grad_pool_out, const std::string& prefix,
                      GradMap& g) {
    Tensor d_bn = maxpool2d_backward(c.bn_out, grad_pool_out);
    BatchNormGrads bg = batchnorm2d_backward(c.relu_out, blk.bn, mode, c.bn_stats, d_bn);
    g[prefix + ".bn.gamma"] = std::move(bg.grad_gamma);
    g[prefix + ".bn.beta"] = std::move(bg.grad_beta);
    Tensor d_conv = relu_backward(c.conv_out, bg.grad_x);
    ConvGrads cg = conv2d_backward(c.input, blk.conv, d_conv);
    g[prefix + ".conv.w"] = std::move(cg.grad_w);
    g[prefix + ".conv.b"] = std::move(cg.grad_b);
    return std::move(cg.grad_x);
}

}  // namespace

GradMap backward(const YNetModel& m, const ForwardCache& c, const Tensor& onehot,
                 const BackwardOptions& opts) {
    if (c.fused.rank() != 2)
        throw Error("backward: stale or missing forward cache");
    if (!c.probs.same_shape(onehot))
        throw Error("backward: labels " + shape_str(onehot.shape()) +
                    " do not match probs " + shape_str(c.probs.shape()));

    GradMap g;
    const Mode mode = c.mode;

    // head
    Tensor d_logits = softmax_cross_entropy_backward(c.probs, onehot);
    DenseGrads g3 = dense_backward(c.relu2_out, m.fc3, d_logits);
    g["head.fc3.w"] = std::move(g3.grad_w);
    g["head.fc3.b"] = std::move(g3.grad_b);
    Tensor d = relu_backward(c.fc2_out, g3.grad_x);
    DenseGrads g2 = dense_backward(c.d2_in, m.fc2, d);
    g["head.fc2.w"] = std::move(g2.grad_w);
    g["head.fc2.b"] = std::move(g2.grad_b);
    d = dropout_backward(c.drop2_mask, g2.grad_x);
    d = relu_backward(c.fc1_out, d);
    DenseGrads g1 = dense_backward(c.d1_in, m.fc1, d);
    g["head.fc1.w"] = std::move(g1.grad_w);
    g["head.fc1.b"] = std::move(g1.grad_b);
    Tensor d_fused = dropout_backward(c.drop1_mask, g1.grad_x);

    // fusion
    Tensor d_concat4 = global_avg_pool_backward(c.concat4_shape, d_fused);
    auto [d_p1, d_p2] = split_channels(d_concat4, m.cfg.channels[3]);

    // branch blocks 4..2
    for (std::size_t i = 4; i-- > 1;) {
        d_p1 = block_backward(m.branch1.blocks[i], c.b1[i], mode, d_p1,
                              "branch1.block" + std::to_string(i + 1), g);
        d_p2 = block_backward(m.branch2.blocks[i], c.b2[i], mode, d_p2,
                              "branch2.block" + std::to_string(i + 1), g);
    }

    // d_p1/d_p2 are now gradients w.r.t. the recalibrated block-1 outputs.
    if (opts.cut_branch1_downstream) d_p1 = Tensor(d_p1.shape());
    if (opts.cut_branch2_downstream) d_p2 = Tensor(d_p2.shape());

    Tensor d_b1p1, d_b2p1;
    if (c.fusam_applied) {
        // identity path: d(b ⊙ A)/db = A
        d_b1p1 = mul(d_p1, c.attn);
        d_b2p1 = mul(d_p2, c.attn);
        // attention path: dA = sum over channels of d_recal ⊙ raw block-1
        // output, both branches feeding the same map. The raw (pre-multiply)
        // outputs are the two halves of the cached concatenation.
        auto [b1p1, b2p1] = split_channels(c.concat1, m.cfg.channels[0]);
        Tensor dA = add(reduce(ReduceOp::sum, mul(d_p1, b1p1), {3}, true),
                        reduce(ReduceOp::sum, mul(d_p2, b2p1), {3}, true));
        Tensor d_attn_pre = sigmoid_backward(c.attn, dA);
        ConvGrads ag = conv2d_backward(c.concat1, m.fusam.attn_conv, d_attn_pre);
        g["fusam.conv.w"] = std::move(ag.grad_w);
        g["fusam.conv.b"] = std::move(ag.grad_b);
        auto [d_a1, d_a2] = split_channels(ag.grad_x, m.cfg.channels[0]);
        d_b1p1 = add(d_b1p1, d_a1);
        d_b2p1 = add(d_b2p1, d_a2);
    } else {
        // bypassed or absent: the map is a constant, only the identity path
        // remains and the attention conv receives no gradient
        if (c.attn.rank() == 4) {
            d_b1p1 = mul(d_p1, c.attn);
            d_b2p1 = mul(d_p2, c.attn);
        } else {
            d_b1p1 = d_p1;
            d_b2p1 = d_p2;
        }
        g["fusam.conv.w"] = Tensor(m.fusam.attn_conv.weights.shape());
        g["fusam.conv.b"] = Tensor(m.fusam.attn_conv.bias.shape());
    }

    block_backward(m.branch1.blocks[0], c.b1[0], mode, d_b1p1, "branch1.block1", g);
    block_backward(m.branch2.blocks[0], c.b2[0], mode, d_b2p1, "branch2.block1", g);
    return g;
}

// ---------------------------------------------------------------------------
// Parameter accounting
// ---------------------------------------------------------------------------

std::vector<ParamCount> count_parameters(const YNetModel& m) {
    std::vector<ParamCount> rows;
    auto conv_row = [&](const std::string& name, const ConvParams& c) {
        rows.push_back({name, c.weights.shape(), c.weights.size() + c.bias.size(), 0});
    };
    auto bn_row = [&](const std::string& name, const BatchNormParams& b) {
        rows.push_back({name, b.gamma.shape(), 2 * b.channels(), 2 * b.channels()});
    };
    for (auto* branch : {&m.branch1, &m.branch2}) {
        const std::string bname = branch == &m.branch1 ? "branch1" : "branch2";
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string p = bname + ".block" + std::to_string(i + 1);
            conv_row(p + ".conv", branch->blocks[i].conv);
            bn_row(p + ".bn", branch->blocks[i].bn);
        }
    }
    conv_row("fusam.conv", m.fusam.attn_conv);
    auto dense_row = [&](const std::string& name, const DenseParams& d) {
        rows.push_back({name, d.weights.shape(), d.weights.size() + d.bias.size(), 0});
    };
    dense_row("head.fc1", m.fc1);
    dense_row("head.fc2", m.fc2);
    dense_row("head.fc3", m.fc3);
    return rows;
}

std::size_t total_trainable(const YNetModel& m) {
    std::size_t total = 0;
    for (const auto& r : count_parameters(m)) total += r.trainable;
    return total;
}

// ---------------------------------------------------------------------------
// Checkpointing
// ---------------------------------------------------------------------------

namespace {

void put_u32le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

bool try_get_u32le(std::istream& is, std::uint32_t& v) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return true;
}

json descriptor_of(const ModelConfig& cfg) {
    return json{{"format", "ynet-checkpoint"},
                {"version", 1},
                {"input_size", cfg.input_size},
                {"in_channels", cfg.in_channels},
                {"kernel_sizes", {3, 5}},
                {"channels", cfg.channels},
                {"head_widths", cfg.head_widths},
                {"num_classes", cfg.num_classes},
                {"bn_epsilon", cfg.bn_epsilon},
                {"bn_momentum", cfg.bn_momentum},
                {"class_names", cfg.class_names}};
}

}  // namespace

void save_checkpoint(const YNetModel& m, const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, Tensor>>& extra) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("checkpoint: cannot open for write: " + path.string());
    os.write("YNC1", 4);
    const std::string desc = descriptor_of(m.cfg).dump();
    put_u32le(os, static_cast<std::uint32_t>(desc.size()));
    os.write(desc.data(), static_cast<std::streamsize>(desc.size()));

    auto write_record = [&](const std::string& name, const Tensor& t) {
        put_u32le(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_ytf(os, t);
    };
    auto& mm = const_cast<YNetModel&>(m);  // read-only traversal
    for (const auto& ref : mm.state_tensors()) write_record(ref.name, *ref.tensor);
    for (const auto& [name, t] : extra) write_record(name, t);
    if (!os.flush()) throw IoError("checkpoint: write failed: " + path.string());
}

YNetModel load_checkpoint(const std::filesystem::path& path, const ModelConfig* expected,
                          std::vector<std::pair<std::string, Tensor>>* extra_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open: " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::string_view(magic, 4) != "YNC1")
        throw IoError("checkpoint: bad magic, not a YNC1 file: " + path.string());
    std::uint32_t desc_len = 0;
    if (!try_get_u32le(is, desc_len) || desc_len == 0 || desc_len > (1u << 20))
        throw IoError("checkpoint: corrupt descriptor length");
    std::string desc(desc_len, '\0');
    if (!is.read(desc.data(), desc_len)) throw IoError("checkpoint: truncated descriptor");

    ModelConfig cfg;
    try {
        json j = json::parse(desc);
        cfg.input_size = j.at("input_size").get<std::size_t>();
        cfg.in_channels = j.at("in_channels").get<std::size_t>();
        auto ks = j.at("kernel_sizes").get<std::vector<std::size_t>>();
        if (ks != std::vector<std::size_t>{3, 5})
            throw IoError("checkpoint: unsupported kernel plan");
        auto ch = j.at("channels").get<std::vector<std::size_t>>();
        auto hw = j.at("head_widths").get<std::vector<std::size_t>>();
        if (ch.size() != 4 || hw.size() != 2)
            throw IoError("checkpoint: malformed channel/head plan");
        std::copy(ch.begin(), ch.end(), cfg.channels.begin());
        std::copy(hw.begin(), hw.end(), cfg.head_widths.begin());
        cfg.num_classes = j.at("num_classes").get<std::size_t>();
        cfg.bn_epsilon = j.at("bn_epsilon").get<double>();
        cfg.bn_momentum = j.at("bn_momentum").get<double>();
        if (j.contains("class_names"))
            cfg.class_names = j.at("class_names").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw IoError(std::string("checkpoint: corrupt descriptor: ") + e.what());
    }

    if (expected) {
        auto mismatch = [&](const std::string& what) {
            throw IoError("checkpoint: architecture mismatch (" + what + "): " + path.string());
        };
        if (expected->num_classes != cfg.num_classes) mismatch("num_classes");
        if (expected->channels != cfg.channels) mismatch("channels");
        if (expected->head_widths != cfg.head_widths) mismatch("head_widths");
        if (expected->in_channels != cfg.in_channels) mismatch("in_channels");
    }

    YNetModel m = create_uninitialized(cfg);
    for (const auto& ref : m.state_tensors()) {
        std::uint32_t name_len = 0;
        if (!try_get_u32le(is, name_len))
            throw IoError("checkpoint: truncated before record " + ref.name);
        std::string name(name_len, '\0');
        if (!is.read(name.data(), name_len)) throw IoError("checkpoint: truncated record name");
        if (name != ref.name)
            throw IoError("checkpoint: architecture mismatch, expected record " + ref.name +
                          ", found " + name);
        Tensor t = read_ytf(is);
        if (t.shape() != ref.tensor->shape())
            throw IoError("checkpoint: architecture mismatch, record " + ref.name +
                          " has shape " + shape_str(t.shape()) + ", expected " +
                          shape_str(ref.tensor->shape()));
        *ref.tensor = std::move(t);
    }
    if (extra_out) {
        std::uint32_t name_len = 0;
        while (try_get_u32le(is, name_len)) {
            std::string name(name_len, '\0');
            if (!is.read(name.data(), name_len))
                throw IoError("checkpoint: truncated record name");
            extra_out->emplace_back(std::move(name), read_ytf(is));
        }
    }
    return m;
}

}  // namespace ynet
