#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "medsev/classifier.hpp"
#include "medsev/corpus.hpp"
#include "medsev/fusion.hpp"
#include "medsev/lexicon.hpp"
#include "medsev/sentiment_views.hpp"
#include "medsev/view_ingest.hpp"

// End-to-end plumbing: assemble the per-post views (lexicon sentiment,
// hashed content, ingested dense views), fit idf → standardization → wGCCA →
// softmax on a chosen subset of posts, and classify posts through the fitted
// model. Cross-validation and the CLI both run through this.

namespace medsev {

inline constexpr const char* kSentimentViewName = "sentiment";
inline constexpr const char* kContentHashViewName = "content_hash";

struct PipelineConfig {
    SentimentParams sentiment;
    bool sentiment_view = true;
    double sentiment_weight = 1.0;
    // Mirrors Lexicon::suffix_retry so predict-time lexica are configured
    // the same way the model was trained.
    bool lexicon_suffix_retry = false;

    bool hashed_view = true;
    int hashed_dim = 256;
    std::uint64_t hashed_seed = 1;
    double hashed_weight = 1.0;

    bool standardize = true;
    int latent_dim = 0;  // 0 -> min(64, min_i d_i, m-1)
    double ridge = -1.0; // < 0 -> 1e-6 * mean trace(X'X)/d

    TrainConfig train;

    int folds = 10;
    std::uint64_t fold_seed = 42;
    bool stratified = true;
};

struct PipelineInputs {
    Corpus corpus; // single task
    Lexicon lexicon;
    std::vector<std::string> stative_verbs = default_stative_verbs();
    std::vector<ViewMatrix> external_views;
};

// Tokenization and view alignment done once per corpus.
struct PipelineData {
    const PipelineInputs* inputs = nullptr;
    std::vector<TokenSequence> tokens;          // per post, corpus order
    std::vector<ViewMatrix> external_aligned;   // corpus order
    AlignReport align_report;
};

PipelineData prepare(const PipelineInputs& inputs);

// Ids consumed by each fitted structure of one fit (the leakage audit).
struct FitAudit {
    std::vector<std::string> idf_ids;
    std::vector<std::string> scaling_ids;
    std::vector<std::string> wgcca_ids;
    std::vector<std::string> classifier_ids;
};

struct TrainedModel {
    TaskKind task = TaskKind::MedicalCondition;
    PipelineConfig config; // featurization settings needed at predict time
    std::vector<std::string> stative_verbs;
    IdfTable idf;
    WgccaModel wgcca;
    SoftmaxModel softmax;
};

// Fit every stage on the posts selected by train_indices only. A non-null
// weight_override replaces the configured weight of any view it names.
TrainedModel fit_model(const PipelineData& data, const PipelineConfig& config,
                       const std::vector<std::size_t>& train_indices,
                       FusedMatrix* fused_out = nullptr, FitAudit* audit = nullptr,
                       const std::map<std::string, double>* weight_override = nullptr);

// Sentiment + hashed-content feature rows for one tokenized post, using the
// model's idf table and featurization settings.
std::map<std::string, std::vector<double>> self_features(const TrainedModel& model,
                                                         const Lexicon& lexicon,
                                                         const TokenSequence& tokens);

struct Prediction {
    int label = 0;
    std::vector<double> proba;
    // L2 norm of each positive-weight view's share of the fused vector.
    std::map<std::string, double> view_contrib;
    std::vector<double> fused;
};

// features must contain a row for every positive-weight view of the model.
Prediction classify_features(const TrainedModel& model,
                             const std::map<std::string, std::vector<double>>& features);

// Classify a post that is part of the prepared corpus (external view rows
// are taken from the aligned matrices).
Prediction classify_index(const PipelineData& data, const TrainedModel& model, std::size_t index);

// Names and weights of the views a config activates, in fitting order.
std::vector<std::pair<std::string, double>> active_view_spec(const PipelineData& data,
                                                             const PipelineConfig& config);

} // namespace medsev
