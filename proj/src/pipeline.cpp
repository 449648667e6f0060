#include "medsev/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "medsev/error.hpp"
#include "medsev/kernels.hpp"

namespace medsev {

PipelineData prepare(const PipelineInputs& inputs) {
    inputs.corpus.single_task(); // rejects empty or mixed-task corpora
    PipelineData data;
    data.inputs = &inputs;
    data.tokens.reserve(inputs.corpus.size());
    for (const ForumPost& p : inputs.corpus.posts()) data.tokens.push_back(tokenize(p.text));
    data.external_aligned = align_views(inputs.corpus, inputs.external_views, &data.align_report);
    return data;
}

std::vector<std::pair<std::string, double>> active_view_spec(const PipelineData& data,
                                                             const PipelineConfig& config) {
    std::vector<std::pair<std::string, double>> spec;
    if (config.sentiment_view) spec.emplace_back(kSentimentViewName, config.sentiment_weight);
    if (config.hashed_view) spec.emplace_back(kContentHashViewName, config.hashed_weight);
    for (const ViewMatrix& v : data.external_aligned) spec.emplace_back(v.name, v.weight);
    return spec;
}

namespace {

std::vector<double> sentiment_row(const SentimentFeatures& f) {
    return {f.ws_pos, f.ws_neg, f.ws_obj, f.ts_pos, f.ts_neg};
}

double overridden_weight(const std::map<std::string, double>* override_map,
                         const std::string& name, double base) {
    if (!override_map) return base;
    auto it = override_map->find(name);
    return it == override_map->end() ? base : it->second;
}

} // namespace

TrainedModel fit_model(const PipelineData& data, const PipelineConfig& config,
                       const std::vector<std::size_t>& train_indices, FusedMatrix* fused_out,
                       FitAudit* audit, const std::map<std::string, double>* weight_override) {
    if (!data.inputs) throw Error("fit_model: pipeline data not prepared");
    const Corpus& corpus = data.inputs->corpus;
    const Lexicon& lexicon = data.inputs->lexicon;
    if (train_indices.empty()) throw Error("fit_model: no training posts");

    const TaskKind task = corpus.single_task();
    const std::size_t m = train_indices.size();

    std::vector<std::string> train_ids;
    train_ids.reserve(m);
    std::vector<TokenSequence> train_tokens;
    train_tokens.reserve(m);
    for (std::size_t idx : train_indices) {
        train_ids.push_back(corpus.post(idx).id);
        train_tokens.push_back(data.tokens[idx]);
    }

    const IdfTable idf = compute_idf(train_tokens);

    std::vector<ViewMatrix> views;
    std::vector<double> weights;
    if (config.sentiment_view) {
        ViewMatrix v;
        v.name = kSentimentViewName;
        v.ids = train_ids;
        v.data = Matrix(m, 5);
        for (std::size_t i = 0; i < m; ++i) {
            const auto row = sentiment_row(sentiment_features(
                train_tokens[i], lexicon, idf, data.inputs->stative_verbs, config.sentiment));
            std::copy(row.begin(), row.end(), v.data.row(i));
        }
        weights.push_back(overridden_weight(weight_override, v.name, config.sentiment_weight));
        views.push_back(std::move(v));
    }
    if (config.hashed_view) {
        ViewMatrix v;
        v.name = kContentHashViewName;
        v.ids = train_ids;
        v.data = Matrix(m, static_cast<std::size_t>(config.hashed_dim));
        for (std::size_t i = 0; i < m; ++i) {
            const auto row =
                hashed_tfidf_row(train_tokens[i], idf, config.hashed_dim, config.hashed_seed);
            std::copy(row.begin(), row.end(), v.data.row(i));
        }
        weights.push_back(overridden_weight(weight_override, v.name, config.hashed_weight));
        views.push_back(std::move(v));
    }
    for (const ViewMatrix& ext : data.external_aligned) {
        ViewMatrix v;
        v.name = ext.name;
        v.ids = train_ids;
        v.weight = ext.weight;
        v.data = Matrix(m, ext.dim());
        for (std::size_t i = 0; i < m; ++i)
            std::copy(ext.data.row(train_indices[i]), ext.data.row(train_indices[i]) + ext.dim(),
                      v.data.row(i));
        weights.push_back(overridden_weight(weight_override, v.name, ext.weight));
        views.push_back(std::move(v));
    }
    if (views.empty()) throw Error("fit_model: no views enabled");

    std::vector<ScalingParams> scalings;
    scalings.reserve(views.size());
    for (ViewMatrix& v : views)
        scalings.push_back(config.standardize ? standardize_view(v)
                                              : ScalingParams::identity(v.dim()));

    const int k = config.latent_dim > 0 ? config.latent_dim : default_latent_dim(views, weights);
    const double ridge = config.ridge >= 0.0 ? config.ridge : default_ridge(views);

    WgccaFit fit = fit_wgcca(views, weights, k, ridge, scalings);

    std::vector<int> labels;
    labels.reserve(m);
    for (std::size_t idx : train_indices) labels.push_back(corpus.post(idx).label);
    std::vector<std::string> class_names(task_labels(task).begin(), task_labels(task).end());
    SoftmaxModel softmax = train_softmax(fit.fused.g, labels, class_names, config.train);

    if (audit) {
        audit->idf_ids = train_ids;
        audit->scaling_ids = train_ids;
        audit->wgcca_ids = fit.fused.ids;
        audit->classifier_ids = fit.fused.ids;
    }
    if (fused_out) *fused_out = fit.fused;

    TrainedModel model;
    model.task = task;
    model.config = config;
    if (weight_override) {
        // persist the effective weights
        if (config.sentiment_view)
            model.config.sentiment_weight =
                overridden_weight(weight_override, kSentimentViewName, config.sentiment_weight);
        if (config.hashed_view)
            model.config.hashed_weight =
                overridden_weight(weight_override, kContentHashViewName, config.hashed_weight);
    }
    model.config.latent_dim = k;
    model.config.ridge = ridge;
    model.stative_verbs = data.inputs->stative_verbs;
    model.idf = idf;
    model.wgcca = std::move(fit.model);
    model.softmax = std::move(softmax);
    return model;
}

std::map<std::string, std::vector<double>> self_features(const TrainedModel& model,
                                                         const Lexicon& lexicon,
                                                         const TokenSequence& tokens) {
    std::map<std::string, std::vector<double>> features;
    if (model.config.sentiment_view) {
        const SentimentFeatures f = sentiment_features(tokens, lexicon, model.idf,
                                                       model.stative_verbs,
                                                       model.config.sentiment);
        features.emplace(kSentimentViewName, sentiment_row(f));
    }
    if (model.config.hashed_view)
        features.emplace(kContentHashViewName,
                         hashed_tfidf_row(tokens, model.idf, model.config.hashed_dim,
                                          model.config.hashed_seed));
    return features;
}

Prediction classify_features(const TrainedModel& model,
                             const std::map<std::string, std::vector<double>>& features) {
    const std::size_t k = static_cast<std::size_t>(model.wgcca.latent_dim);
    double weight_sum = 0.0;
    for (const WgccaView& view : model.wgcca.views)
        if (view.weight > 0.0) weight_sum += view.weight;
    if (weight_sum <= 0.0) throw Error("classify: model has no positive-weight view");

    Prediction pred;
    pred.fused.assign(k, 0.0);
    for (const WgccaView& view : model.wgcca.views) {
        if (view.weight <= 0.0) continue;
        auto it = features.find(view.name);
        if (it == features.end())
            throw Error("classify: missing features for view \"" + view.name + "\"");
        if (it->second.size() != view.u.rows())
            throw Error("classify: view \"" + view.name + "\" expects dimension " +
                        std::to_string(view.u.rows()) + ", got " +
                        std::to_string(it->second.size()));
        std::vector<double> x = it->second;
        apply_scaling(view.scaling, x.data(), x.size());
        std::vector<double> part(k, 0.0);
        for (std::size_t r = 0; r < x.size(); ++r)
            kernels::axpy(x[r], view.u.row(r), part.data(), k);
        const double scale_by = view.weight / weight_sum;
        kernels::scale(part.data(), scale_by, k);
        pred.view_contrib[view.name] = std::sqrt(kernels::sumsq(part.data(), k));
        for (std::size_t j = 0; j < k; ++j) pred.fused[j] += part[j];
    }
    pred.proba = predict_proba(model.softmax, pred.fused);
    pred.label = predict(model.softmax, pred.fused);
    return pred;
}

Prediction classify_index(const PipelineData& data, const TrainedModel& model,
                          std::size_t index) {
    if (!data.inputs) throw Error("classify_index: pipeline data not prepared");
    auto features = self_features(model, data.inputs->lexicon, data.tokens[index]);
    for (const ViewMatrix& ext : data.external_aligned) {
        std::vector<double> row(ext.data.row(index), ext.data.row(index) + ext.dim());
        features.emplace(ext.name, std::move(row));
    }
    return classify_features(model, features);
}

} // namespace medsev
