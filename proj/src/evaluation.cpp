#include "medsev/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "medsev/error.hpp"

namespace medsev {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (const auto& row : counts)
        for (std::int64_t v : row) t += v;
    return t;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 const std::vector<std::string>& class_order) {
    if (y_true.empty()) throw Error("confusion_matrix: empty inputs");
    if (y_true.size() != y_pred.size()) throw Error("confusion_matrix: length mismatch");
    const std::size_t k = class_order.size();
    ConfusionMatrix cm;
    cm.class_order = class_order;
    cm.counts.assign(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if (t < 0 || static_cast<std::size_t>(t) >= k || p < 0 ||
            static_cast<std::size_t>(p) >= k)
            throw Error("confusion_matrix: label outside class set");
        ++cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
    }
    return cm;
}

MetricsReport precision_recall_f1(const ConfusionMatrix& cm) {
    const std::size_t k = cm.class_order.size();
    if (cm.counts.size() != k) throw Error("precision_recall_f1: malformed confusion matrix");

    MetricsReport report;
    report.total = cm.total();
    report.per_class.resize(k);

    std::vector<std::int64_t> col_sums(k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) col_sums[j] += cm.counts[i][j];

    double support_total = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const std::int64_t tp = cm.counts[c][c];
        std::int64_t row_sum = 0;
        for (std::size_t j = 0; j < k; ++j) row_sum += cm.counts[c][j];
        ClassMetrics& m = report.per_class[c];
        m.label = cm.class_order[c];
        m.support = row_sum;
        m.precision = col_sums[c] > 0 ? static_cast<double>(tp) / static_cast<double>(col_sums[c])
                                      : 0.0;
        m.recall = row_sum > 0 ? static_cast<double>(tp) / static_cast<double>(row_sum) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        report.macro_precision += m.precision;
        report.macro_recall += m.recall;
        report.macro_f1 += m.f1;
        const double w = static_cast<double>(row_sum);
        report.weighted_precision += w * m.precision;
        report.weighted_recall += w * m.recall;
        report.weighted_f1 += w * m.f1;
        support_total += w;
    }
    report.macro_precision /= static_cast<double>(k);
    report.macro_recall /= static_cast<double>(k);
    report.macro_f1 /= static_cast<double>(k);
    if (support_total > 0.0) {
        report.weighted_precision /= support_total;
        report.weighted_recall /= support_total;
        report.weighted_f1 /= support_total;
    }
    return report;
}

namespace {

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

CvResult cross_validate_impl(const PipelineData& data, const PipelineConfig& config,
                             const FoldPlan& plan, bool collect_audit,
                             const std::map<std::string, double>* weight_override) {
    if (!data.inputs) throw Error("cross_validate: pipeline data not prepared");
    const Corpus& corpus = data.inputs->corpus;
    const TaskKind task = corpus.single_task();
    const std::vector<std::string> class_names(task_labels(task).begin(),
                                               task_labels(task).end());

    CvResult result;
    std::vector<double> macro_f1s, weighted_f1s;
    for (int fold = 0; fold < plan.k; ++fold) {
        try {
            const auto train_idx = fold_train_indices(corpus, plan, fold);
            const auto test_idx = fold_test_indices(corpus, plan, fold);
            if (test_idx.empty()) throw Error("empty test fold");

            CvFold cv_fold;
            cv_fold.fold = fold;
            FitAudit* audit = collect_audit ? &cv_fold.audit : nullptr;
            const TrainedModel model =
                fit_model(data, config, train_idx, nullptr, audit, weight_override);

            std::vector<int> y_true, y_pred;
            y_true.reserve(test_idx.size());
            y_pred.reserve(test_idx.size());
            for (std::size_t idx : test_idx) {
                y_true.push_back(corpus.post(idx).label);
                y_pred.push_back(classify_index(data, model, idx).label);
            }
            cv_fold.confusion = confusion_matrix(y_true, y_pred, class_names);
            cv_fold.metrics = precision_recall_f1(cv_fold.confusion);
            macro_f1s.push_back(cv_fold.metrics.macro_f1);
            weighted_f1s.push_back(cv_fold.metrics.weighted_f1);
            result.folds.push_back(std::move(cv_fold));
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(fold) + ": " + e.what());
        }
    }
    mean_std(macro_f1s, result.mean_macro_f1, result.std_macro_f1);
    mean_std(weighted_f1s, result.mean_weighted_f1, result.std_weighted_f1);
    return result;
}

} // namespace

CvResult cross_validate(const PipelineData& data, const PipelineConfig& config,
                        const FoldPlan& plan, bool collect_audit) {
    return cross_validate_impl(data, config, plan, collect_audit, nullptr);
}

AblationTable ablate(const PipelineData& data, const PipelineConfig& config,
                     const FoldPlan& plan) {
    const auto spec = active_view_spec(data, config);
    std::size_t active = 0;
    for (const auto& [name, weight] : spec)
        if (weight > 0.0) ++active;
    if (active < 2) throw Error("ablation needs >=2 views");

    AblationTable table;
    const CvResult baseline = cross_validate(data, config, plan);
    table.rows.push_back({"All", baseline.mean_macro_f1, baseline.mean_weighted_f1, 0.0});

    for (const auto& [name, weight] : spec) {
        if (weight <= 0.0) continue;
        const std::map<std::string, double> override_map = {{name, 0.0}};
        const CvResult run = cross_validate_impl(data, config, plan, false, &override_map);
        table.rows.push_back({name, run.mean_macro_f1, run.mean_weighted_f1,
                              baseline.mean_macro_f1 - run.mean_macro_f1});
    }
    return table;
}

// ---------------------------------------------------------------------------
// paired t-test
// ---------------------------------------------------------------------------

namespace {

// Continued fraction for the regularized incomplete beta (Lentz).
double beta_cf(double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 1e-15;
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double dm = static_cast<double>(m);
        const double m2 = 2.0 * dm;
        double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

} // namespace

double student_t_cdf(double t, int dof) {
    if (dof < 1) throw Error("student_t_cdf: dof must be >= 1");
    const double nu = static_cast<double>(dof);
    const double x = nu / (nu + t * t);
    const double tail = 0.5 * reg_inc_beta(0.5 * nu, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error("paired_t_test: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw Error("paired_t_test: need at least 2 pairs");

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (a[i] - b[i]) - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);

    TTestResult result;
    if (var == 0.0) {
        if (mean == 0.0) {
            result.t = 0.0;
            result.p = 1.0;
        } else {
            result.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
            result.p = 0.0;
        }
        return result;
    }
    result.t = mean / std::sqrt(var / static_cast<double>(n));
    const double nu = static_cast<double>(n - 1);
    result.p = reg_inc_beta(0.5 * nu, 0.5, nu / (nu + result.t * result.t));
    return result;
}

// ---------------------------------------------------------------------------
// view-weight grid tune
// ---------------------------------------------------------------------------

std::map<std::string, double> tune_view_weights(const PipelineData& data,
                                                const PipelineConfig& config,
                                                int validation_folds, std::uint64_t seed) {
    if (!data.inputs) throw Error("tune_view_weights: pipeline data not prepared");
    const auto spec = active_view_spec(data, config);
    std::vector<std::string> names;
    for (const auto& [name, weight] : spec)
        if (weight > 0.0) names.push_back(name);
    if (names.empty()) throw Error("tune_view_weights: no active views");
    if (names.size() > 6) throw Error("tune_view_weights: too many views to grid-tune (max 6)");

    const Corpus& corpus = data.inputs->corpus;
    const TaskKind task = corpus.single_task();
    const std::vector<std::string> class_names(task_labels(task).begin(),
                                               task_labels(task).end());
    const FoldPlan plan = split_kfold(corpus, validation_folds, seed, config.stratified);
    const auto train_idx = fold_train_indices(corpus, plan, 0);
    const auto val_idx = fold_test_indices(corpus, plan, 0);

    static const double grid[] = {0.25, 0.5, 1.0};
    std::size_t combos = 1;
    for (std::size_t i = 0; i < names.size(); ++i) combos *= 3;

    std::map<std::string, double> best;
    double best_f1 = -1.0;
    for (std::size_t combo = 0; combo < combos; ++combo) {
        std::map<std::string, double> weights;
        std::size_t rem = combo;
        for (const std::string& name : names) {
            weights[name] = grid[rem % 3];
            rem /= 3;
        }
        const TrainedModel model = fit_model(data, config, train_idx, nullptr, nullptr, &weights);
        std::vector<int> y_true, y_pred;
        for (std::size_t idx : val_idx) {
            y_true.push_back(corpus.post(idx).label);
            y_pred.push_back(classify_index(data, model, idx).label);
        }
        const double f1 = precision_recall_f1(confusion_matrix(y_true, y_pred, class_names))
                              .macro_f1;
        if (f1 > best_f1) {
            best_f1 = f1;
            best = weights;
        }
    }
    return best;
}

} // namespace medsev
