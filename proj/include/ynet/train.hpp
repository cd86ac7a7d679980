#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ynet/data.hpp"
#include "ynet/metrics.hpp"
#include "ynet/model.hpp"

namespace ynet {

// Run settings; the defaults are the full-scale training recipe
// (200 epochs, batch 32, lr 1e-3 cosine-annealed to 1e-6 with restarts
// every 50 epochs, dropout 0.3/0.2, 224x224 inputs).
struct RunConfig {
    std::filesystem::path data_root;
    std::uint64_t seed = 42;
    std::uint64_t split_seed = 42;  // train/test assignment; fixed across runs
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    double lr = 1e-3;
    double lr_min = 1e-6;
    std::size_t restart_period = 50;
    double dropout1 = 0.3;
    double dropout2 = 0.2;
    std::size_t num_classes = 30;  // echo only; the dataset determines K
    std::size_t input_size = 224;
    AugmentPolicy augment;
    std::filesystem::path checkpoint;  // resume source, or the model to load
    std::filesystem::path out_dir = "runs/default";
    bool fusam_bypass = false;
    bool tiny = false;  // reduced channel plan and 32x32 inputs
    std::size_t repeat = 1;
    Split eval_split = Split::test;
    std::size_t threads = 0;  // 0 = prep_threads()
};

// One key=value assignment (config file line or CLI override).
// Unknown keys and unparsable values raise ConfigError.
void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value);

// Line-oriented key=value file; blank lines and '#' comments are skipped.
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

// Architecture implied by the run settings and the dataset's class list.
ModelConfig model_config_for(const RunConfig& cfg, std::size_t num_classes,
                             std::vector<std::string> class_names);

struct TrainArtifacts {
    std::filesystem::path history_csv;
    std::filesystem::path best_checkpoint;
    std::filesystem::path final_checkpoint;
    std::filesystem::path manifest;
    std::vector<EpochStats> history;
    double best_test_acc = 0.0;
    std::size_t best_epoch = 0;  // 1-based; 0 = no epoch ran
};

// Full training run: per-epoch SGDR lr, augmented shuffled train batches,
// Adam steps, test-split evaluation, best/final checkpoints, history CSV,
// and a JSON manifest. Setting cfg.checkpoint resumes from that file.
TrainArtifacts cmd_train(const RunConfig& cfg, std::ostream& log);

// Eval-mode pass over cfg.eval_split of the dataset using cfg.checkpoint;
// writes report/confusion/predictions/scores CSVs and embeddings.
void cmd_eval(const RunConfig& cfg, std::ostream& log);

// Top-1 class (and optionally the full distribution CSV) per input image,
// rows in input order.
void cmd_predict(const RunConfig& cfg,
                 const std::vector<std::filesystem::path>& images,
                 const std::filesystem::path& distribution_csv, std::ostream& out);

// Finite-difference suites for every layer plus the tiny whole model;
// prints one row per parameter group. Returns true when all pass.
bool cmd_gradcheck(std::uint64_t seed, std::ostream& out);

// Architecture summary of a checkpoint: parameter table, head widths,
// and the full shape trace.
void cmd_inspect(const std::filesystem::path& checkpoint, std::ostream& out);

}  // namespace ynet
