#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ynet/rng.hpp"
#include "ynet/tensor.hpp"

namespace ynet {

enum class Split { train, test };

struct SampleRef {
    std::string rel_path;      // "<class>/<file>"
    std::size_t class_index = 0;
    std::uint64_t id = 0;      // stable hash of rel_path
    Split split = Split::train;
};

// Deterministic view of a directory-per-class dataset. Class indices follow
// lexicographic class-name order; the stratified 50:50 split (ceil(n/2) train
// per class) is a pure function of (sample list, split seed).
struct DatasetIndex {
    std::filesystem::path root;
    std::vector<std::string> classes;
    std::vector<SampleRef> samples;
    std::vector<std::string> warnings;  // e.g. empty class directories

    std::size_t num_classes() const { return classes.size(); }
    std::vector<std::size_t> split_rows(Split split) const;
    std::vector<std::size_t> class_counts() const;
};

DatasetIndex index_dataset(const std::filesystem::path& root,
                           std::uint64_t split_seed = 42);

// CSV with header "path,class,split", one row per sample in index order.
void export_split_csv(const DatasetIndex& index, const std::filesystem::path& path);

struct Sample {
    Tensor image;  // [S,S,3] in [0,1]
    std::size_t label = 0;
    std::uint64_t id = 0;
};

// Decode (PPM P6), bilinear-resize to input_size, then scale by 1/255.
Sample load_and_preprocess(const DatasetIndex& index, const SampleRef& ref,
                           std::size_t input_size = 224);

// Independently gated transforms, applied in the fixed order
// hflip, vflip, rot90, brightness/contrast, rgb shift, median blur.
struct AugmentPolicy {
    double p_hflip = 0.5;
    double p_vflip = 0.5;
    double p_rot90 = 0.5;
    double p_brightness_contrast = 0.3;
    double factor_lo = 0.8;  // brightness and contrast factors ~ U(lo, hi)
    double factor_hi = 1.2;
    double p_rgb_shift = 0.5;
    double rgb_shift_max = 20.0 / 255.0;  // per-channel shift ~ U(-max, max)
    double p_median_blur = 0.4;
    std::size_t median_kernel = 3;

    static AugmentPolicy off();  // all probabilities zero
};

struct AugmentTrace {
    bool hflip = false;
    bool vflip = false;
    bool rot90 = false;
    bool brightness_contrast = false;
    bool rgb_shift = false;
    bool median_blur = false;
};

// Geometric primitives, exposed for their involution identities.
Tensor hflip(const Tensor& img);
Tensor vflip(const Tensor& img);
Tensor rot90ccw(const Tensor& img);
Tensor median_blur3(const Tensor& img);

// Applies the policy; output is clamped to [0,1]. The rng should be keyed by
// (epoch, sample id) so repeated calls replay the same transforms.
Tensor augment(const Tensor& img, const AugmentPolicy& policy, Rng& rng,
               AugmentTrace* trace = nullptr);

struct Batch {
    Tensor images;  // [B,S,S,3]
    Tensor onehot;  // [B,K]
    std::vector<std::uint64_t> sample_ids;
    std::vector<std::size_t> rows;  // index positions, batch order
};

// Epoch order: the split's rows shuffled by stream ("shuffle", epoch) of seed.
std::vector<std::size_t> epoch_order(const DatasetIndex& index, Split split,
                                     std::uint64_t seed, std::uint64_t epoch);

// Loads, preprocesses, and (optionally) augments the referenced rows into a
// batch. Augmentation draws from stream ("aug", epoch, sample id) of seed.
// `threads` > 1 prepares samples concurrently; the result is identical to the
// sequential one.
Batch make_batch(const DatasetIndex& index, const std::vector<std::size_t>& rows,
                 std::size_t input_size, bool augmented, const AugmentPolicy& policy,
                 std::uint64_t seed, std::uint64_t epoch, std::size_t threads = 1);

// Data-preparation concurrency: min(hardware, YNET_THREADS if set), at least 1.
std::size_t prep_threads();

}  // namespace ynet
