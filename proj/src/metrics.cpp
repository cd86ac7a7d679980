#include "ynet/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ynet/errors.hpp"

namespace ynet {

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for write: " + path.string());
    return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
    if (!os.flush()) throw IoError("write failed: " + path.string());
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : classes(std::move(class_names)), counts(classes.size() * classes.size(), 0) {
    if (classes.empty()) throw Error("confusion matrix needs at least one class");
}

void ConfusionMatrix::accumulate(std::size_t true_class, std::size_t predicted_class) {
    const std::size_t k = num_classes();
    if (true_class >= k || predicted_class >= k)
        throw Error("confusion matrix index out of range");
    ++counts[true_class * k + predicted_class];
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    if (other.classes != classes)
        throw Error("cannot merge confusion matrices over different classes");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t n = 0;
    for (std::uint64_t c : counts) n += c;
    return n;
}

bool MetricsReport::any_zero_support() const {
    for (const auto& s : per_class)
        if (s.zero_precision_support || s.zero_recall_support) return true;
    return false;
}

MetricsReport compute_report(const ConfusionMatrix& cm) {
    const std::size_t k = cm.num_classes();
    const std::uint64_t n = cm.total();
    if (n == 0) throw Error("cannot report on an empty confusion matrix");

    MetricsReport report;
    report.per_class.resize(k);
    std::uint64_t trace = 0;
    for (std::size_t c = 0; c < k; ++c) {
        std::uint64_t row = 0, col = 0;
        for (std::size_t j = 0; j < k; ++j) {
            row += cm.at(c, j);
            col += cm.at(j, c);
        }
        const std::uint64_t tp = cm.at(c, c);
        trace += tp;

        ClassScore& s = report.per_class[c];
        s.name = cm.classes[c];
        s.zero_precision_support = (col == 0);
        s.zero_recall_support = (row == 0);
        s.precision = col ? 100.0 * static_cast<double>(tp) / static_cast<double>(col) : 0.0;
        s.recall = row ? 100.0 * static_cast<double>(tp) / static_cast<double>(row) : 0.0;
        s.f1 = (s.precision + s.recall > 0.0)
                   ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                   : 0.0;

        report.macro_precision += s.precision;
        report.macro_recall += s.recall;
        report.macro_f1 += s.f1;
    }
    report.accuracy = 100.0 * static_cast<double>(trace) / static_cast<double>(n);
    report.macro_precision /= static_cast<double>(k);
    report.macro_recall /= static_cast<double>(k);
    report.macro_f1 /= static_cast<double>(k);
    return report;
}

void export_report_csv(const MetricsReport& report, const std::filesystem::path& path) {
    std::ofstream os = open_out(path);
    os << "class,precision,recall,f1\n";
    for (const auto& s : report.per_class)
        os << s.name << "," << fixed2(s.precision) << "," << fixed2(s.recall) << ","
           << fixed2(s.f1) << "\n";
    os << "__macro__," << fixed2(report.macro_precision) << ","
       << fixed2(report.macro_recall) << "," << fixed2(report.macro_f1) << "\n";
    finish(os, path);
}

void export_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path) {
    std::ofstream os = open_out(path);
    os << "true\\pred";
    for (const auto& name : cm.classes) os << "," << name;
    os << "\n";
    const std::size_t k = cm.num_classes();
    for (std::size_t t = 0; t < k; ++t) {
        os << cm.classes[t];
        for (std::size_t p = 0; p < k; ++p) os << "," << cm.at(t, p);
        os << "\n";
    }
    finish(os, path);
}

void export_history_csv(const std::vector<EpochStats>& history,
                        const std::filesystem::path& path) {
    std::ofstream os = open_out(path);
    os << "epoch,train_loss,train_acc,test_loss,test_acc,lr\n";
    char buf[160];
    for (const auto& e : history) {
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%.2f,%.6f,%.2f,%.9e\n", e.epoch,
                      e.train_loss, e.train_acc, e.test_loss, e.test_acc, e.lr);
        os << buf;
    }
    finish(os, path);
}

std::vector<EpochStats> parse_history_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(is, line) || line != "epoch,train_loss,train_acc,test_loss,test_acc,lr")
        throw IoError("bad history header in " + path.string());
    std::vector<EpochStats> history;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        EpochStats e;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf,%lf", &e.epoch,
                        &e.train_loss, &e.train_acc, &e.test_loss, &e.test_acc,
                        &e.lr) != 6)
            throw IoError("bad history row in " + path.string() + ": " + line);
        history.push_back(e);
    }
    return history;
}

void export_predictions_csv(const std::vector<SampleOutcome>& outcomes,
                            const std::vector<std::string>& classes,
                            const std::filesystem::path& path) {
    (void)classes;
    std::ofstream os = open_out(path);
    os << "sample_id,label,predicted,max_prob\n";
    char buf[128];
    for (const auto& o : outcomes) {
        const double max_prob = o.probs.empty() ? 0.0 : o.probs[o.predicted];
        std::snprintf(buf, sizeof buf, "%llu,%zu,%zu,%.6f\n",
                      static_cast<unsigned long long>(o.sample_id), o.label,
                      o.predicted, max_prob);
        os << buf;
    }
    finish(os, path);
}

void export_scores_csv(const std::vector<SampleOutcome>& outcomes,
                       const std::vector<std::string>& classes,
                       const std::filesystem::path& path) {
    std::ofstream os = open_out(path);
    os << "sample_id,label";
    for (const auto& name : classes) os << "," << name;
    os << "\n";
    char buf[32];
    for (const auto& o : outcomes) {
        if (o.probs.size() != classes.size())
            throw Error("score row width does not match the class list");
        os << o.sample_id << "," << o.label;
        for (double p : o.probs) {
            std::snprintf(buf, sizeof buf, ",%.6f", p);
            os << buf;
        }
        os << "\n";
    }
    finish(os, path);
}

void export_embeddings(const Tensor& embeddings,
                       const std::vector<SampleOutcome>& outcomes,
                       const std::filesystem::path& ytf_path,
                       const std::filesystem::path& csv_path) {
    if (embeddings.rank() != 2 || embeddings.dim(0) != outcomes.size())
        throw Error("embedding rows must match the outcome list");
    write_ytf(ytf_path, embeddings);
    std::ofstream os = open_out(csv_path);
    os << "sample_id,label\n";
    for (const auto& o : outcomes) os << o.sample_id << "," << o.label << "\n";
    finish(os, csv_path);
}

}  // namespace ynet
