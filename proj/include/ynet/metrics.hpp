#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ynet/tensor.hpp"

namespace ynet {

// K x K counts, rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::uint64_t> counts;  // row-major K*K

    explicit ConfusionMatrix(std::vector<std::string> class_names);

    std::size_t num_classes() const { return classes.size(); }
    std::uint64_t at(std::size_t t, std::size_t p) const {
        return counts[t * num_classes() + p];
    }
    void accumulate(std::size_t true_class, std::size_t predicted_class);
    void merge(const ConfusionMatrix& other);  // elementwise add, same classes
    std::uint64_t total() const;
};

// All rates are percentages in [0,100].
struct ClassScore {
    std::string name;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool zero_precision_support = false;  // column sum was 0
    bool zero_recall_support = false;     // row sum was 0
};

struct MetricsReport {
    std::vector<ClassScore> per_class;
    double accuracy = 0.0;         // trace / total
    double macro_precision = 0.0;  // unweighted class means
    double macro_recall = 0.0;
    double macro_f1 = 0.0;

    bool any_zero_support() const;
};

// Requires total() >= 1. Zero-denominator classes score 0 and are flagged.
MetricsReport compute_report(const ConfusionMatrix& cm);

// "class,precision,recall,f1", two decimals, K class rows then "__macro__".
void export_report_csv(const MetricsReport& report, const std::filesystem::path& path);

// Integer grid with class-name header row and column.
void export_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path);

struct EpochStats {
    std::size_t epoch = 0;   // 1-based
    double train_loss = 0.0;
    double train_acc = 0.0;  // percent
    double test_loss = 0.0;
    double test_acc = 0.0;   // percent
    double lr = 0.0;
};

// "epoch,train_loss,train_acc,test_loss,test_acc,lr", one row per epoch.
// Formatting is fixed so identical runs produce byte-identical files.
void export_history_csv(const std::vector<EpochStats>& history,
                        const std::filesystem::path& path);
std::vector<EpochStats> parse_history_csv(const std::filesystem::path& path);

// Per-sample evaluation artifacts for external analysis.
struct SampleOutcome {
    std::uint64_t sample_id = 0;
    std::size_t label = 0;
    std::size_t predicted = 0;
    std::vector<double> probs;  // length K
};

// "sample_id,label,predicted,max_prob" rows.
void export_predictions_csv(const std::vector<SampleOutcome>& outcomes,
                            const std::vector<std::string>& classes,
                            const std::filesystem::path& path);

// "sample_id,label,<class name per column>" with the full probability rows,
// for external ROC plotting.
void export_scores_csv(const std::vector<SampleOutcome>& outcomes,
                       const std::vector<std::string>& classes,
                       const std::filesystem::path& path);

// [N,D] embedding rows as YTF next to a "sample_id,label" sidecar CSV.
void export_embeddings(const Tensor& embeddings,
                       const std::vector<SampleOutcome>& outcomes,
                       const std::filesystem::path& ytf_path,
                       const std::filesystem::path& csv_path);

}  // namespace ynet
