#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "ynet/errors.hpp"
#include "ynet/train.hpp"

namespace {

// Records which settings were given on the command line so they override the
// config file in argument order: defaults < --config file < explicit flags.
struct KvCapture {
    CLI::App* cmd;
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    explicit KvCapture(CLI::App* c) : cmd(c) {
        cmd->add_option("--config", config_path, "key=value config file")
            ->check(CLI::ExistingFile);
    }
    void opt(const std::string& flag, const std::string& key, const std::string& desc) {
        cmd->add_option_function<std::string>(
            flag,
            [this, key](const std::string& v) { overrides.emplace_back(key, v); },
            desc);
    }
    void flag(const std::string& name, const std::string& key, const std::string& desc) {
        cmd->add_flag_function(
            name,
            [this, key](std::int64_t n) {
                if (n) overrides.emplace_back(key, "true");
            },
            desc);
    }
    ynet::RunConfig resolve() const {
        ynet::RunConfig cfg;
        if (!config_path.empty()) ynet::load_config_file(cfg, config_path);
        for (const auto& [k, v] : overrides) ynet::apply_config_kv(cfg, k, v);
        return cfg;
    }
};

int run_train(const ynet::RunConfig& cfg) {
    if (cfg.repeat <= 1) {
        ynet::cmd_train(cfg, std::cout);
        return ynet::exit_code::ok;
    }
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream summary(cfg.out_dir / "repeats.csv");
    if (!summary) throw ynet::IoError("cannot open for write: repeats.csv");
    summary << "run,seed,best_epoch,best_test_acc,final_test_acc\n";
    for (std::size_t i = 0; i < cfg.repeat; ++i) {
        ynet::RunConfig run = cfg;
        run.repeat = 1;
        run.seed = cfg.seed + i;
        run.out_dir = cfg.out_dir / ("repeat_" + std::to_string(i));
        std::cout << "=== repeat " << i << " (seed " << run.seed << ") ===\n";
        ynet::TrainArtifacts art = ynet::cmd_train(run, std::cout);
        char row[128];
        std::snprintf(row, sizeof row, "%zu,%llu,%zu,%.2f,%.2f\n", i,
                      static_cast<unsigned long long>(run.seed), art.best_epoch,
                      art.best_test_acc,
                      art.history.empty() ? 0.0 : art.history.back().test_acc);
        summary << row;
    }
    if (!summary.flush()) throw ynet::IoError("write failed: repeats.csv");
    return ynet::exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aerial-Y-Net: dual-branch attention CNN for aerial scene classification"};
    app.require_subcommand(1);

    CLI::App* train = app.add_subcommand("train", "Train a model on a dataset");
    KvCapture train_kv(train);
    train_kv.opt("--data-root", "data_root", "directory-per-class dataset root");
    train_kv.opt("--seed", "seed", "training seed");
    train_kv.opt("--epochs", "epochs", "number of epochs");
    train_kv.opt("--batch-size", "batch_size", "batch size");
    train_kv.opt("--lr", "lr", "peak learning rate");
    train_kv.opt("--checkpoint", "checkpoint", "resume from this checkpoint");
    train_kv.opt("--out-dir", "out_dir", "artifact directory");
    train_kv.opt("--repeat", "repeat", "run N times with consecutive seeds");
    train_kv.flag("--tiny", "tiny", "reduced architecture and 32x32 inputs");
    train_kv.flag("--fusam-bypass", "fusam_bypass", "force the attention map to 1");

    CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a split");
    KvCapture eval_kv(eval);
    eval_kv.opt("--data-root", "data_root", "directory-per-class dataset root");
    eval_kv.opt("--checkpoint", "checkpoint", "checkpoint to evaluate");
    eval_kv.opt("--out-dir", "out_dir", "artifact directory");
    eval_kv.opt("--batch-size", "batch_size", "evaluation batch size");
    eval_kv.opt("--split", "eval_split", "train or test");
    eval_kv.flag("--fusam-bypass", "fusam_bypass", "force the attention map to 1");

    CLI::App* predict = app.add_subcommand("predict", "Classify images");
    KvCapture predict_kv(predict);
    predict_kv.opt("--checkpoint", "checkpoint", "model checkpoint");
    predict_kv.flag("--fusam-bypass", "fusam_bypass", "force the attention map to 1");
    std::vector<std::string> image_args;
    predict->add_option("images", image_args, "PPM images to classify")->required();
    std::string distribution_csv;
    predict->add_option("--distribution", distribution_csv,
                        "also write the full per-class probabilities here");

    CLI::App* gradcheck = app.add_subcommand(
        "gradcheck", "Verify analytic gradients against finite differences");
    std::uint64_t gc_seed = 12345;
    gradcheck->add_option("--seed", gc_seed, "probe seed");

    CLI::App* inspect = app.add_subcommand("inspect", "Describe a checkpoint");
    std::string inspect_path;
    inspect->add_option("checkpoint", inspect_path, "checkpoint file")->required();

    try {
        app.parse(argc, argv);

        if (train->parsed()) return run_train(train_kv.resolve());
        if (eval->parsed()) {
            ynet::cmd_eval(eval_kv.resolve(), std::cout);
            return ynet::exit_code::ok;
        }
        if (predict->parsed()) {
            std::vector<std::filesystem::path> images(image_args.begin(),
                                                      image_args.end());
            ynet::cmd_predict(predict_kv.resolve(), images, distribution_csv,
                              std::cout);
            return ynet::exit_code::ok;
        }
        if (gradcheck->parsed())
            return ynet::cmd_gradcheck(gc_seed, std::cout) ? ynet::exit_code::ok
                                                           : ynet::exit_code::failure;
        if (inspect->parsed()) {
            ynet::cmd_inspect(inspect_path, std::cout);
            return ynet::exit_code::ok;
        }
        return ynet::exit_code::config;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ynet::exit_code::ok : ynet::exit_code::config;
    } catch (const ynet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ynet::exit_code::config;
    } catch (const ynet::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return ynet::exit_code::data;
    } catch (const ynet::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return ynet::exit_code::numeric;
    } catch (const ynet::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return ynet::exit_code::io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ynet::exit_code::failure;
    }
}
