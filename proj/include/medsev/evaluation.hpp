#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medsev/corpus.hpp"
#include "medsev/pipeline.hpp"

// Precision/recall/F1, k-fold cross-validation of the full pipeline,
// leave-one-view-out ablation, and the paired t-test.

namespace medsev {

struct ConfusionMatrix {
    std::vector<std::string> class_order;
    std::vector<std::vector<std::int64_t>> counts; // counts[i][j] = #(true i, pred j)

    std::int64_t total() const;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 const std::vector<std::string>& class_order);

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;
};

struct MetricsReport {
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    std::int64_t total = 0;
};

// Per-class P/R/F1 with zero-denominator cases scored 0, plus macro
// (unweighted mean) and weighted (support-weighted mean) aggregates.
MetricsReport precision_recall_f1(const ConfusionMatrix& cm);

struct CvFold {
    int fold = 0;
    ConfusionMatrix confusion;
    MetricsReport metrics;
    FitAudit audit; // filled when collect_audit
};

struct CvResult {
    std::vector<CvFold> folds;
    double mean_macro_f1 = 0.0, std_macro_f1 = 0.0;
    double mean_weighted_f1 = 0.0, std_weighted_f1 = 0.0;
};

// For each fold: fit idf, scaling, wGCCA and the classifier on the training
// folds only, then classify the held-out fold. Deterministic for a fixed
// config and plan. Errors are rethrown with the fold index. std is the
// sample standard deviation over folds.
CvResult cross_validate(const PipelineData& data, const PipelineConfig& config,
                        const FoldPlan& plan, bool collect_audit = false);

struct AblationRow {
    std::string removed_view; // "All" for the baseline row
    double macro_f1 = 0.0;
    double weighted_f1 = 0.0;
    double delta_macro_f1 = 0.0; // baseline minus this row
};

struct AblationTable {
    std::vector<AblationRow> rows; // baseline first
};

// Cross-validate with all views, then once per active view with that view's
// weight forced to 0. Needs at least two active views.
AblationTable ablate(const PipelineData& data, const PipelineConfig& config,
                     const FoldPlan& plan);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
};

// Paired two-tailed t-test. Zero-variance differences use the declared
// conventions: all-zero differences -> t=0, p=1; nonzero mean with zero
// variance -> t=+/-inf, p=0.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Student-t CDF helper used by the t-test (regularized incomplete beta).
double student_t_cdf(double t, int dof);

// Grid-tune the active view weights over {0.25, 0.5, 1.0} on one held-out
// validation fold (fold 0 of a fresh split); returns name -> weight for the
// active views. Deterministic; ties keep the first combination enumerated.
std::map<std::string, double> tune_view_weights(const PipelineData& data,
                                                const PipelineConfig& config,
                                                int validation_folds, std::uint64_t seed);

} // namespace medsev
