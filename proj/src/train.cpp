#include "ynet/train.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>

#include "ynet/errors.hpp"
#include "ynet/gradcheck.hpp"
#include "ynet/image.hpp"
#include "ynet/layers.hpp"
#include "ynet/optim.hpp"

namespace ynet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Tensor scalar(double v) {
    Tensor t{Shape{}};
    t.data()[0] = v;
    return t;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    }
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size() || (!value.empty() && value[0] == '-'))
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("bad boolean value for " + key + ": '" + value + "'");
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::size_t argmax_row(const Tensor& probs, std::size_t row) {
    const std::size_t k = probs.dim(1);
    const double* p = probs.data() + row * k;
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j)
        if (p[j] > p[best]) best = j;
    return best;
}

// Mean cross entropy of already-normalized probability rows.
double mean_nll(const Tensor& probs, const Tensor& onehot) {
    const std::size_t n = probs.dim(0), k = probs.dim(1);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (onehot.at({i, j}) == 1.0)
                loss -= std::log(std::max(probs.at({i, j}), 1e-300));
    return loss / static_cast<double>(n);
}

std::vector<std::vector<std::size_t>> chunk(const std::vector<std::size_t>& rows,
                                            std::size_t batch_size) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t at = 0; at < rows.size(); at += batch_size)
        out.emplace_back(rows.begin() + at,
                         rows.begin() + std::min(at + batch_size, rows.size()));
    return out;
}

struct SplitEval {
    double loss = 0.0;
    ConfusionMatrix cm;
    std::vector<SampleOutcome> outcomes;
    Tensor embeddings;  // [N,D] when requested
};

SplitEval evaluate_split(const YNetModel& m, const DatasetIndex& idx, Split split,
                         std::size_t batch_size, std::size_t threads,
                         bool want_embeddings) {
    SplitEval ev{0.0, ConfusionMatrix(idx.classes), {}, Tensor()};
    const auto rows = idx.split_rows(split);
    if (rows.empty()) throw DataError("evaluation split has no samples");
    const std::size_t k = idx.num_classes();
    std::size_t done = 0;
    for (const auto& batch_rows : chunk(rows, batch_size)) {
        Batch batch = make_batch(idx, batch_rows, m.cfg.input_size, false,
                                 AugmentPolicy::off(), 0, 0, threads);
        ForwardResult res = forward_eval(m, batch.images);
        const std::size_t b = batch_rows.size();
        ev.loss += mean_nll(res.probs, batch.onehot) * static_cast<double>(b);
        Tensor emb;
        if (want_embeddings) {
            emb = embed(m, batch.images);
            if (done == 0) ev.embeddings = Tensor({rows.size(), emb.dim(1)});
        }
        for (std::size_t i = 0; i < b; ++i) {
            const SampleRef& ref = idx.samples[batch_rows[i]];
            const std::size_t pred = argmax_row(res.probs, i);
            ev.cm.accumulate(ref.class_index, pred);
            SampleOutcome o;
            o.sample_id = ref.id;
            o.label = ref.class_index;
            o.predicted = pred;
            o.probs.resize(k);
            for (std::size_t j = 0; j < k; ++j) o.probs[j] = res.probs.at({i, j});
            ev.outcomes.push_back(std::move(o));
            if (want_embeddings)
                std::copy(emb.data() + i * emb.dim(1), emb.data() + (i + 1) * emb.dim(1),
                          ev.embeddings.data() + (done + i) * emb.dim(1));
        }
        done += b;
    }
    ev.loss /= static_cast<double>(rows.size());
    return ev;
}

json config_json(const RunConfig& cfg) {
    json j;
    j["data_root"] = cfg.data_root.string();
    j["seed"] = cfg.seed;
    j["split_seed"] = cfg.split_seed;
    j["epochs"] = cfg.epochs;
    j["batch_size"] = cfg.batch_size;
    j["lr"] = cfg.lr;
    j["lr_min"] = cfg.lr_min;
    j["restart_period"] = cfg.restart_period;
    j["dropout1"] = cfg.dropout1;
    j["dropout2"] = cfg.dropout2;
    j["num_classes"] = cfg.num_classes;
    j["input_size"] = cfg.input_size;
    j["checkpoint"] = cfg.checkpoint.string();
    j["out_dir"] = cfg.out_dir.string();
    j["fusam_bypass"] = cfg.fusam_bypass;
    j["tiny"] = cfg.tiny;
    j["repeat"] = cfg.repeat;
    j["eval_split"] = cfg.eval_split == Split::train ? "train" : "test";
    j["threads"] = cfg.threads;
    j["augment"] = {{"p_hflip", cfg.augment.p_hflip},
                    {"p_vflip", cfg.augment.p_vflip},
                    {"p_rot90", cfg.augment.p_rot90},
                    {"p_brightness_contrast", cfg.augment.p_brightness_contrast},
                    {"factor_lo", cfg.augment.factor_lo},
                    {"factor_hi", cfg.augment.factor_hi},
                    {"p_rgb_shift", cfg.augment.p_rgb_shift},
                    {"rgb_shift_max", cfg.augment.rgb_shift_max},
                    {"p_median_blur", cfg.augment.p_median_blur},
                    {"median_kernel", cfg.augment.median_kernel}};
    return j;
}

void write_manifest(const fs::path& path, const json& manifest) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw IoError("cannot open for write: " + tmp.string());
        os << manifest.dump(2) << "\n";
        if (!os.flush()) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string join_ids(const std::vector<std::uint64_t>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(ids[i]);
    }
    return out;
}

}  // namespace

void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "data_root") cfg.data_root = value;
    else if (key == "seed") cfg.seed = parse_count(key, value);
    else if (key == "split_seed") cfg.split_seed = parse_count(key, value);
    else if (key == "epochs") cfg.epochs = parse_count(key, value);
    else if (key == "batch_size") cfg.batch_size = parse_count(key, value);
    else if (key == "lr") cfg.lr = parse_double(key, value);
    else if (key == "lr_min") cfg.lr_min = parse_double(key, value);
    else if (key == "restart_period") cfg.restart_period = parse_count(key, value);
    else if (key == "dropout1") cfg.dropout1 = parse_double(key, value);
    else if (key == "dropout2") cfg.dropout2 = parse_double(key, value);
    else if (key == "num_classes") cfg.num_classes = parse_count(key, value);
    else if (key == "input_size") cfg.input_size = parse_count(key, value);
    else if (key == "checkpoint") cfg.checkpoint = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "fusam_bypass") cfg.fusam_bypass = parse_bool(key, value);
    else if (key == "tiny") cfg.tiny = parse_bool(key, value);
    else if (key == "repeat") cfg.repeat = parse_count(key, value);
    else if (key == "threads") cfg.threads = parse_count(key, value);
    else if (key == "eval_split") {
        if (value == "train") cfg.eval_split = Split::train;
        else if (value == "test") cfg.eval_split = Split::test;
        else throw ConfigError("eval_split must be 'train' or 'test', got '" + value + "'");
    } else if (key == "aug_hflip") cfg.augment.p_hflip = parse_double(key, value);
    else if (key == "aug_vflip") cfg.augment.p_vflip = parse_double(key, value);
    else if (key == "aug_rot90") cfg.augment.p_rot90 = parse_double(key, value);
    else if (key == "aug_brightness_contrast")
        cfg.augment.p_brightness_contrast = parse_double(key, value);
    else if (key == "aug_factor_lo") cfg.augment.factor_lo = parse_double(key, value);
    else if (key == "aug_factor_hi") cfg.augment.factor_hi = parse_double(key, value);
    else if (key == "aug_rgb_shift") cfg.augment.p_rgb_shift = parse_double(key, value);
    else if (key == "aug_rgb_shift_max") cfg.augment.rgb_shift_max = parse_double(key, value);
    else if (key == "aug_median_blur") cfg.augment.p_median_blur = parse_double(key, value);
    else throw ConfigError("unknown config key: '" + key + "'");
}

void load_config_file(RunConfig& cfg, const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        apply_config_kv(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
}

ModelConfig model_config_for(const RunConfig& cfg, std::size_t num_classes,
                             std::vector<std::string> class_names) {
    ModelConfig mc = cfg.tiny ? tiny_config(num_classes) : ModelConfig{};
    // tiny keeps its 32x32 preset unless input_size was overridden
    if (!(cfg.tiny && cfg.input_size == 224)) mc.input_size = cfg.input_size;
    mc.num_classes = num_classes;
    mc.dropout1 = cfg.dropout1;
    mc.dropout2 = cfg.dropout2;
    mc.fusam_bypass = cfg.fusam_bypass;
    mc.class_names = std::move(class_names);
    return mc;
}

TrainArtifacts cmd_train(const RunConfig& cfg, std::ostream& log) {
    if (cfg.epochs == 0) throw ConfigError("epochs must be at least 1");
    if (cfg.batch_size == 0) throw ConfigError("batch_size must be at least 1");
    if (cfg.lr_min > cfg.lr) throw ConfigError("lr_min must not exceed lr");

    const std::string started = iso_now();
    DatasetIndex idx = index_dataset(cfg.data_root, cfg.split_seed);
    for (const auto& w : idx.warnings) log << "warning: " << w << "\n";
    const std::size_t k = idx.num_classes();
    const ModelConfig mc = model_config_for(cfg, k, idx.classes);
    const std::size_t threads = cfg.threads ? cfg.threads : prep_threads();

    fs::create_directories(cfg.out_dir);
    TrainArtifacts art;
    art.history_csv = cfg.out_dir / "history.csv";
    art.best_checkpoint = cfg.out_dir / "best.ynck";
    art.final_checkpoint = cfg.out_dir / "final.ynck";
    art.manifest = cfg.out_dir / "manifest.json";
    export_split_csv(idx, cfg.out_dir / "split.csv");

    AdamState opt;
    opt.lr = cfg.lr;
    std::size_t completed = 0;

    YNetModel m = [&] {
        if (cfg.checkpoint.empty()) return create_model(mc, cfg.seed);
        std::vector<std::pair<std::string, Tensor>> extra;
        YNetModel loaded = load_checkpoint(cfg.checkpoint, &mc, &extra);
        restore_adam(opt, extra);
        for (const auto& [name, t] : extra) {
            if (name == "progress.epoch") completed = static_cast<std::size_t>(t.data()[0]);
            else if (name == "progress.best_acc") art.best_test_acc = t.data()[0];
            else if (name == "progress.best_epoch")
                art.best_epoch = static_cast<std::size_t>(t.data()[0]);
            else if (name == "progress.history") {
                for (std::size_t r = 0; r < t.dim(0); ++r) {
                    EpochStats e;
                    e.epoch = static_cast<std::size_t>(t.at({r, 0}));
                    e.train_loss = t.at({r, 1});
                    e.train_acc = t.at({r, 2});
                    e.test_loss = t.at({r, 3});
                    e.test_acc = t.at({r, 4});
                    e.lr = t.at({r, 5});
                    art.history.push_back(e);
                }
            }
        }
        if (completed >= cfg.epochs)
            throw ConfigError("checkpoint already covers " + std::to_string(completed) +
                              " epochs; nothing to resume for epochs=" +
                              std::to_string(cfg.epochs));
        log << "resuming from " << cfg.checkpoint.string() << " after epoch "
            << completed << "\n";
        return loaded;
    }();

    const SgdrSchedule sched{cfg.lr, cfg.lr_min, static_cast<double>(cfg.restart_period),
                             1.0};
    const auto train_rows = idx.split_rows(Split::train);
    if (train_rows.empty()) throw DataError("train split has no samples");

    auto progress_extras = [&](std::size_t epochs_done) {
        std::vector<std::pair<std::string, Tensor>> extra = adam_records(opt);
        extra.emplace_back("progress.epoch", scalar(static_cast<double>(epochs_done)));
        extra.emplace_back("progress.best_acc", scalar(art.best_test_acc));
        extra.emplace_back("progress.best_epoch",
                           scalar(static_cast<double>(art.best_epoch)));
        Tensor hist({art.history.size(), 6});
        for (std::size_t r = 0; r < art.history.size(); ++r) {
            hist.at({r, 0}) = static_cast<double>(art.history[r].epoch);
            hist.at({r, 1}) = art.history[r].train_loss;
            hist.at({r, 2}) = art.history[r].train_acc;
            hist.at({r, 3}) = art.history[r].test_loss;
            hist.at({r, 4}) = art.history[r].test_acc;
            hist.at({r, 5}) = art.history[r].lr;
        }
        extra.emplace_back("progress.history", std::move(hist));
        return extra;
    };

    for (std::size_t epoch = completed; epoch < cfg.epochs; ++epoch) {
        const double lr = sgdr_lr(sched, static_cast<double>(epoch));
        opt.lr = lr;

        const auto order = epoch_order(idx, Split::train, cfg.seed, epoch);
        double loss_sum = 0.0;
        std::size_t correct = 0, seen = 0, batch_index = 0;
        for (const auto& rows : chunk(order, cfg.batch_size)) {
            Batch batch = make_batch(idx, rows, mc.input_size, true, cfg.augment,
                                     cfg.seed, epoch, threads);
            Rng drop_rng(cfg.seed, Rng::stream("drop", epoch, batch_index));
            ForwardCache cache;
            ForwardResult res = forward(m, batch.images, Mode::train, drop_rng, &cache);
            const double loss = mean_nll(res.probs, batch.onehot);
            if (!std::isfinite(loss))
                throw NumericError("non-finite loss in epoch " + std::to_string(epoch + 1) +
                                   " batch " + std::to_string(batch_index) +
                                   "; sample ids: " + join_ids(batch.sample_ids));
            loss_sum += loss * static_cast<double>(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (argmax_row(res.probs, i) == idx.samples[rows[i]].class_index)
                    ++correct;
            seen += rows.size();

            GradMap grads = backward(m, cache, batch.onehot);
            std::vector<AdamParam> params;
            for (auto& p : m.parameters())
                params.push_back({p.name, p.tensor, &grads.at(p.name)});
            adam_step(opt, params);
            ++batch_index;
        }

        SplitEval ev = evaluate_split(m, idx, Split::test, cfg.batch_size, threads, false);
        MetricsReport report = compute_report(ev.cm);

        EpochStats stats;
        stats.epoch = epoch + 1;
        stats.train_loss = loss_sum / static_cast<double>(seen);
        stats.train_acc = 100.0 * static_cast<double>(correct) / static_cast<double>(seen);
        stats.test_loss = ev.loss;
        stats.test_acc = report.accuracy;
        stats.lr = lr;
        art.history.push_back(stats);
        export_history_csv(art.history, art.history_csv);

        if (stats.test_acc > art.best_test_acc || art.best_epoch == 0) {
            art.best_test_acc = stats.test_acc;
            art.best_epoch = stats.epoch;
            save_checkpoint(m, art.best_checkpoint, progress_extras(epoch + 1));
        }
        save_checkpoint(m, art.final_checkpoint, progress_extras(epoch + 1));

        char line[192];
        std::snprintf(line, sizeof line,
                      "epoch %zu/%zu  lr %.3e  train loss %.4f acc %.2f%%  "
                      "test loss %.4f acc %.2f%%\n",
                      stats.epoch, cfg.epochs, lr, stats.train_loss, stats.train_acc,
                      stats.test_loss, stats.test_acc);
        log << line;
    }

    json manifest;
    manifest["artifact_version"] = 1;
    manifest["config"] = config_json(cfg);
    manifest["dataset"]["root"] = cfg.data_root.string();
    manifest["dataset"]["classes"] = idx.classes;
    manifest["dataset"]["per_class_counts"] = idx.class_counts();
    manifest["dataset"]["train_samples"] = train_rows.size();
    manifest["dataset"]["test_samples"] = idx.split_rows(Split::test).size();
    manifest["started"] = started;
    manifest["finished"] = iso_now();
    manifest["epochs_run"] = art.history.size();
    if (!art.history.empty()) {
        const EpochStats& last = art.history.back();
        manifest["final"] = {{"train_loss", last.train_loss},
                             {"train_acc", last.train_acc},
                             {"test_loss", last.test_loss},
                             {"test_acc", last.test_acc}};
    }
    manifest["best"] = {{"test_acc", art.best_test_acc}, {"epoch", art.best_epoch}};
    manifest["artifacts"] = {{"history", art.history_csv.string()},
                             {"best_checkpoint", art.best_checkpoint.string()},
                             {"final_checkpoint", art.final_checkpoint.string()}};
    write_manifest(art.manifest, manifest);
    return art;
}

void cmd_eval(const RunConfig& cfg, std::ostream& log) {
    if (cfg.checkpoint.empty()) throw ConfigError("eval requires a checkpoint");
    DatasetIndex idx = index_dataset(cfg.data_root, cfg.split_seed);
    YNetModel m = load_checkpoint(cfg.checkpoint);
    if (m.cfg.num_classes != idx.num_classes())
        throw DataError("checkpoint has " + std::to_string(m.cfg.num_classes) +
                        " classes but the dataset has " +
                        std::to_string(idx.num_classes()));
    m.cfg.fusam_bypass = cfg.fusam_bypass;

    const std::size_t threads = cfg.threads ? cfg.threads : prep_threads();
    SplitEval ev = evaluate_split(m, idx, cfg.eval_split, cfg.batch_size, threads, true);
    MetricsReport report = compute_report(ev.cm);

    fs::create_directories(cfg.out_dir);
    const std::string split = cfg.eval_split == Split::train ? "train" : "test";
    export_report_csv(report, cfg.out_dir / ("report_" + split + ".csv"));
    export_confusion_csv(ev.cm, cfg.out_dir / ("confusion_" + split + ".csv"));
    export_predictions_csv(ev.outcomes, idx.classes,
                           cfg.out_dir / ("predictions_" + split + ".csv"));
    export_scores_csv(ev.outcomes, idx.classes,
                      cfg.out_dir / ("scores_" + split + ".csv"));
    export_embeddings(ev.embeddings, ev.outcomes,
                      cfg.out_dir / ("embeddings_" + split + ".ytf"),
                      cfg.out_dir / ("embeddings_" + split + ".csv"));

    char line[192];
    std::snprintf(line, sizeof line,
                  "split=%s  samples=%zu  loss %.4f  accuracy %.2f%%  macro "
                  "P %.2f%% R %.2f%% F1 %.2f%%\n",
                  split.c_str(), ev.outcomes.size(), ev.loss, report.accuracy,
                  report.macro_precision, report.macro_recall, report.macro_f1);
    log << line;
}

void cmd_predict(const RunConfig& cfg, const std::vector<fs::path>& images,
                 const fs::path& distribution_csv, std::ostream& out) {
    if (cfg.checkpoint.empty()) throw ConfigError("predict requires a checkpoint");
    if (images.empty()) throw ConfigError("predict requires at least one image");
    YNetModel m = load_checkpoint(cfg.checkpoint);
    m.cfg.fusam_bypass = cfg.fusam_bypass;
    const std::size_t s = m.cfg.input_size, k = m.cfg.num_classes;
    std::vector<std::string> classes = m.cfg.class_names;
    if (classes.size() != k) {
        classes.resize(k);
        for (std::size_t j = 0; j < k; ++j) classes[j] = "class_" + std::to_string(j);
    }

    Tensor x({images.size(), s, s, 3});
    const std::size_t stride = s * s * 3;
    for (std::size_t i = 0; i < images.size(); ++i) {
        Tensor img;
        try {
            img = read_ppm(images[i]);
        } catch (const IoError& e) {
            throw DataError(std::string("cannot decode image: ") + e.what());
        }
        Tensor resized = resize_bilinear(img, s, s);
        for (std::size_t j = 0; j < stride; ++j)
            x.data()[i * stride + j] = resized.data()[j] / 255.0;
    }

    ForwardResult res = forward_eval(m, x);
    out << "path,class,probability\n";
    char buf[64];
    for (std::size_t i = 0; i < images.size(); ++i) {
        const std::size_t pred = argmax_row(res.probs, i);
        std::snprintf(buf, sizeof buf, ",%.6f\n", res.probs.at({i, pred}));
        out << images[i].string() << "," << classes[pred] << buf;
    }

    if (!distribution_csv.empty()) {
        std::ofstream os(distribution_csv);
        if (!os) throw IoError("cannot open for write: " + distribution_csv.string());
        os << "path";
        for (const auto& name : classes) os << "," << name;
        os << "\n";
        for (std::size_t i = 0; i < images.size(); ++i) {
            os << images[i].string();
            for (std::size_t j = 0; j < k; ++j) {
                std::snprintf(buf, sizeof buf, ",%.6f", res.probs.at({i, j}));
                os << buf;
            }
            os << "\n";
        }
        if (!os.flush()) throw IoError("write failed: " + distribution_csv.string());
    }
}

bool cmd_gradcheck(std::uint64_t seed, std::ostream& out) {
    char line[160];
    out << "group                             checked  skipped  max rel err  result\n";
    bool all_ok = true;
    double total_seconds = 0.0;

    auto print_row = [&](const std::string& name, std::size_t checked,
                         std::size_t skipped, double max_error, bool ok) {
        std::snprintf(line, sizeof line, "%-33s %8zu %8zu   %10.3e  %s\n", name.c_str(),
                      checked, skipped, max_error, ok ? "pass" : "FAIL");
        out << line;
    };

    for (const SuiteResult& suite : run_layer_checks(seed)) {
        print_row(suite.name, suite.report.checked, suite.report.skipped,
                  suite.report.max_error, suite.report.ok());
        all_ok = all_ok && suite.report.ok();
        total_seconds += suite.seconds;
    }

    const SuiteResult model_suite = run_model_check(seed, {});
    total_seconds += model_suite.seconds;
    for (const FdGroupStat& g : model_suite.report.groups)
        print_row("model." + g.name, g.checked, g.skipped, g.max_error, g.failed == 0);
    all_ok = all_ok && model_suite.report.ok();

    std::snprintf(line, sizeof line, "total %.1f s  overall max %.3e  %s\n",
                  total_seconds, model_suite.report.max_error, all_ok ? "PASS" : "FAIL");
    out << line;
    return all_ok;
}

void cmd_inspect(const fs::path& checkpoint, std::ostream& out) {
    YNetModel m = load_checkpoint(checkpoint);
    const ModelConfig& mc = m.cfg;

    out << "input: " << mc.input_size << "x" << mc.input_size << "x" << mc.in_channels
        << "\n";
    out << "head: " << mc.fused_width();
    for (std::size_t w : mc.head_widths) out << "->" << w;
    out << "->" << mc.num_classes << "\n\n";

    out << "parameters\n";
    char line[160];
    for (const ParamCount& p : count_parameters(m)) {
        std::string shape;
        for (std::size_t i = 0; i < p.shape.size(); ++i)
            shape += (i ? "x" : "") + std::to_string(p.shape[i]);
        std::snprintf(line, sizeof line, "  %-24s %-16s (%zu)\n", p.name.c_str(),
                      shape.c_str(), p.trainable);
        out << line;
    }
    std::snprintf(line, sizeof line, "total trainable: %zu\n\n", total_trainable(m));
    out << line;

    out << "shape trace (batch 1)\n";
    Tensor zeros({1, mc.input_size, mc.input_size, mc.in_channels});
    ForwardResult res = forward_eval(m, zeros, true);
    for (const ShapeTraceEntry& e : res.trace) {
        std::string shape;
        for (std::size_t i = 0; i < e.shape.size(); ++i)
            shape += (i ? "x" : "") + std::to_string(e.shape[i]);
        std::snprintf(line, sizeof line, "  %-20s %s\n", e.name.c_str(), shape.c_str());
        out << line;
    }
}

}  // namespace ynet
