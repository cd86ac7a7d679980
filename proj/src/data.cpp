#include "ynet/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include "ynet/errors.hpp"
#include "ynet/image.hpp"

namespace ynet {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void require_image(const Tensor& img, const std::string& context) {
    if (img.rank() != 3 || img.dim(2) == 0)
        throw DataError("expected an [H,W,C] image, got " + shape_str(img.shape()) +
                        (context.empty() ? "" : " (" + context + ")"));
}

void require_rgb(const Tensor& img, const std::string& context) {
    if (img.rank() != 3 || img.dim(2) != 3)
        throw DataError("expected an RGB image, got " + shape_str(img.shape()) +
                        (context.empty() ? "" : " (" + context + ")"));
}

}  // namespace

std::vector<std::size_t> DatasetIndex::split_rows(Split split) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].split == split) rows.push_back(i);
    return rows;
}

std::vector<std::size_t> DatasetIndex::class_counts() const {
    std::vector<std::size_t> counts(classes.size(), 0);
    for (const auto& s : samples) ++counts[s.class_index];
    return counts;
}

DatasetIndex index_dataset(const fs::path& root, std::uint64_t split_seed) {
    if (!fs::exists(root) || !fs::is_directory(root))
        throw DataError("dataset root is not a directory: " + root.string());

    DatasetIndex idx;
    idx.root = root;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) idx.classes.push_back(entry.path().filename().string());
    std::sort(idx.classes.begin(), idx.classes.end());
    if (idx.classes.empty())
        throw DataError("dataset root has no class directories: " + root.string());

    for (std::size_t k = 0; k < idx.classes.size(); ++k) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(root / idx.classes[k]))
            if (entry.is_regular_file()) files.push_back(entry.path().filename().string());
        std::sort(files.begin(), files.end());
        if (files.empty())
            idx.warnings.push_back("class '" + idx.classes[k] + "' has no files");

        // stratified 50:50: shuffle this class's rows, first ceil(n/2) train
        std::vector<std::size_t> order(files.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        Rng rng(split_seed, Rng::stream("split", k));
        shuffle(order, rng);
        const std::size_t n_train = (files.size() + 1) / 2;
        std::vector<Split> assign(files.size(), Split::test);
        for (std::size_t i = 0; i < n_train; ++i) assign[order[i]] = Split::train;

        for (std::size_t i = 0; i < files.size(); ++i) {
            SampleRef ref;
            ref.rel_path = idx.classes[k] + "/" + files[i];
            ref.class_index = k;
            ref.id = fnv1a(ref.rel_path);
            ref.split = assign[i];
            idx.samples.push_back(std::move(ref));
        }
    }
    return idx;
}

void export_split_csv(const DatasetIndex& index, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for write: " + path.string());
    os << "path,class,split\n";
    for (const auto& s : index.samples)
        os << s.rel_path << "," << index.classes[s.class_index] << ","
           << (s.split == Split::train ? "train" : "test") << "\n";
    if (!os.flush()) throw IoError("write failed: " + path.string());
}

Sample load_and_preprocess(const DatasetIndex& index, const SampleRef& ref,
                           std::size_t input_size) {
    Tensor raw;
    try {
        raw = read_ppm(index.root / ref.rel_path);
    } catch (const IoError& e) {
        throw DataError(std::string("cannot decode sample: ") + e.what());
    }
    require_rgb(raw, ref.rel_path);
    Tensor resized = resize_bilinear(raw, input_size, input_size);
    Sample s;
    s.image = Tensor(resized.shape());
    for (std::size_t i = 0; i < resized.size(); ++i)
        s.image.data()[i] = resized.data()[i] / 255.0;
    s.label = ref.class_index;
    s.id = ref.id;
    return s;
}

AugmentPolicy AugmentPolicy::off() {
    AugmentPolicy p;
    p.p_hflip = p.p_vflip = p.p_rot90 = 0.0;
    p.p_brightness_contrast = p.p_rgb_shift = p.p_median_blur = 0.0;
    return p;
}

Tensor hflip(const Tensor& img) {
    require_image(img, "hflip");
    const std::size_t H = img.dim(0), W = img.dim(1), C = img.dim(2);
    Tensor out(img.shape());
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t w = 0; w < W; ++w)
            for (std::size_t c = 0; c < C; ++c)
                out.at({h, w, c}) = img.at({h, W - 1 - w, c});
    return out;
}

Tensor vflip(const Tensor& img) {
    require_image(img, "vflip");
    const std::size_t H = img.dim(0), W = img.dim(1), C = img.dim(2);
    Tensor out(img.shape());
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t w = 0; w < W; ++w)
            for (std::size_t c = 0; c < C; ++c)
                out.at({h, w, c}) = img.at({H - 1 - h, w, c});
    return out;
}

Tensor rot90ccw(const Tensor& img) {
    require_image(img, "rot90");
    const std::size_t H = img.dim(0), W = img.dim(1), C = img.dim(2);
    Tensor out({W, H, C});
    // input (h, w) lands at output (W-1-w, h)
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t w = 0; w < W; ++w)
            for (std::size_t c = 0; c < C; ++c)
                out.at({W - 1 - w, h, c}) = img.at({h, w, c});
    return out;
}

Tensor median_blur3(const Tensor& img) {
    require_image(img, "median_blur");
    const std::size_t H = img.dim(0), W = img.dim(1), C = img.dim(2);
    Tensor out(img.shape());
    double window[9];
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t w = 0; w < W; ++w)
            for (std::size_t c = 0; c < C; ++c) {
                // in-bounds window: edges use their valid neighbors only
                std::size_t n = 0;
                const std::size_t h0 = h > 0 ? h - 1 : 0, h1 = std::min(h + 1, H - 1);
                const std::size_t w0 = w > 0 ? w - 1 : 0, w1 = std::min(w + 1, W - 1);
                for (std::size_t hh = h0; hh <= h1; ++hh)
                    for (std::size_t ww = w0; ww <= w1; ++ww)
                        window[n++] = img.at({hh, ww, c});
                std::sort(window, window + n);
                out.at({h, w, c}) = window[(n - 1) / 2];  // lower median
            }
    return out;
}

Tensor augment(const Tensor& img, const AugmentPolicy& policy, Rng& rng,
               AugmentTrace* trace) {
    require_rgb(img, "augment");
    AugmentTrace local;
    AugmentTrace& t = trace ? *trace : local;
    Tensor out = img;

    if (rng.bernoulli(policy.p_hflip)) {
        t.hflip = true;
        out = hflip(out);
    }
    if (rng.bernoulli(policy.p_vflip)) {
        t.vflip = true;
        out = vflip(out);
    }
    if (rng.bernoulli(policy.p_rot90)) {
        t.rot90 = true;
        out = rot90ccw(out);
    }
    if (rng.bernoulli(policy.p_brightness_contrast)) {
        t.brightness_contrast = true;
        const double contrast = rng.uniform(policy.factor_lo, policy.factor_hi);
        const double brightness = rng.uniform(policy.factor_lo, policy.factor_hi);
        double mean = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) mean += out.data()[i];
        mean /= static_cast<double>(out.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out.data()[i] = ((out.data()[i] - mean) * contrast + mean) * brightness;
    }
    if (rng.bernoulli(policy.p_rgb_shift)) {
        t.rgb_shift = true;
        double shift[3];
        for (double& s : shift) s = rng.uniform(-policy.rgb_shift_max, policy.rgb_shift_max);
        const std::size_t C = out.dim(2);
        for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += shift[i % C];
    }
    if (rng.bernoulli(policy.p_median_blur)) {
        t.median_blur = true;
        if (policy.median_kernel != 3)
            throw Error("augment: only median kernel 3 is implemented");
        out = median_blur3(out);
    }

    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] = std::clamp(out.data()[i], 0.0, 1.0);
    return out;
}

std::vector<std::size_t> epoch_order(const DatasetIndex& index, Split split,
                                     std::uint64_t seed, std::uint64_t epoch) {
    std::vector<std::size_t> rows = index.split_rows(split);
    if (rows.empty()) throw DataError("split has no samples");
    Rng rng(seed, Rng::stream("shuffle", epoch));
    shuffle(rows, rng);
    return rows;
}

Batch make_batch(const DatasetIndex& index, const std::vector<std::size_t>& rows,
                 std::size_t input_size, bool augmented, const AugmentPolicy& policy,
                 std::uint64_t seed, std::uint64_t epoch, std::size_t threads) {
    if (rows.empty()) throw DataError("empty batch requested");
    const std::size_t B = rows.size(), K = index.num_classes();
    Batch batch;
    batch.images = Tensor({B, input_size, input_size, 3});
    batch.onehot = Tensor({B, K});
    batch.sample_ids.resize(B);
    batch.rows = rows;

    const std::size_t stride = input_size * input_size * 3;
    std::string first_error;
    std::mutex error_mu;

    auto prepare = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const SampleRef& ref = index.samples.at(rows[i]);
                Sample s = load_and_preprocess(index, ref, input_size);
                Tensor img = s.image;
                if (augmented) {
                    Rng rng(seed, Rng::stream("aug", epoch, ref.id));
                    img = augment(img, policy, rng);
                }
                std::copy(img.data(), img.data() + stride,
                          batch.images.data() + i * stride);
                batch.onehot.at({i, s.label}) = 1.0;
                batch.sample_ids[i] = s.id;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, B));
    if (workers == 1) {
        prepare(0, B);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (B + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            if (begin >= B) break;
            pool.emplace_back(prepare, begin, std::min(begin + chunk, B));
        }
        for (auto& th : pool) th.join();
    }
    if (!first_error.empty()) throw DataError(first_error);
    return batch;
}

std::size_t prep_threads() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("YNET_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1) n = std::min<std::size_t>(n, v);
    }
    return n;
}

}  // namespace ynet
