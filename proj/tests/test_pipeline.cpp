#include <doctest.h>

#include <cmath>
#include <numeric>

#include "medsev/error.hpp"
#include "medsev/fusion.hpp"
#include "medsev/pipeline.hpp"
#include "support/synthetic.hpp"

using namespace medsev;

namespace {

std::vector<std::size_t> all_indices(const Corpus& corpus) {
    std::vector<std::size_t> idx(corpus.size());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

} // namespace

TEST_CASE("prepare rejects mixed-task corpora") {
    std::vector<ForumPost> posts(2);
    posts[0] = {"a", "text one", TaskKind::Medication, 0};
    posts[1] = {"b", "text two", TaskKind::MedicalCondition, 0};
    PipelineInputs inputs;
    inputs.corpus = Corpus(std::move(posts));
    CHECK_THROWS_WITH_AS(prepare(inputs), doctest::Contains("mixes tasks"), Error);
}

TEST_CASE("fit_model trains in-sample to high accuracy on the benchmark") {
    const auto inputs = synth::make_benchmark({.posts_per_class = 20, .seed = 60});
    const PipelineData data = prepare(inputs);
    PipelineConfig config;
    config.hashed_dim = 32;
    config.train.epochs = 80;
    config.train.learning_rate = 0.5;

    FusedMatrix fused;
    const TrainedModel model = fit_model(data, config, all_indices(inputs.corpus), &fused);
    CHECK(fused.g.rows() == inputs.corpus.size());
    CHECK(model.wgcca.latent_dim == 5); // min view dim is the 5-wide sentiment view

    std::size_t correct = 0;
    for (std::size_t i = 0; i < inputs.corpus.size(); ++i) {
        const Prediction pred = classify_index(data, model, i);
        if (pred.label == inputs.corpus.post(i).label) ++correct;
    }
    CHECK(static_cast<double>(correct) / static_cast<double>(inputs.corpus.size()) >= 0.95);
}

TEST_CASE("classify_features agrees with the fusion-module projection") {
    const auto inputs = synth::make_benchmark({.posts_per_class = 8, .seed = 61});
    const PipelineData data = prepare(inputs);
    PipelineConfig config;
    config.hashed_dim = 16;
    config.train.epochs = 20;
    const TrainedModel model = fit_model(data, config, all_indices(inputs.corpus));

    auto features = self_features(model, inputs.lexicon, data.tokens[3]);
    for (const ViewMatrix& ext : data.external_aligned)
        features.emplace(ext.name,
                         std::vector<double>(ext.data.row(3), ext.data.row(3) + ext.dim()));

    const Prediction pred = classify_features(model, features);
    const std::vector<double> g = project(model.wgcca, features);
    REQUIRE(pred.fused.size() == g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
        CHECK(pred.fused[j] == doctest::Approx(g[j]).epsilon(1e-12));

    // per-view contributions exist for every positive-weight view
    CHECK(pred.view_contrib.size() == 3);
    for (const auto& [name, norm] : pred.view_contrib) {
        CHECK(std::isfinite(norm));
        CHECK(norm >= 0.0);
    }
}

TEST_CASE("weight overrides zero a view out of the fit") {
    const auto inputs = synth::make_benchmark({.posts_per_class = 8, .seed = 62});
    const PipelineData data = prepare(inputs);
    PipelineConfig config;
    config.hashed_view = false;
    config.train.epochs = 20;

    const std::map<std::string, double> no_planted = {{"planted", 0.0}};
    const TrainedModel model =
        fit_model(data, config, all_indices(inputs.corpus), nullptr, nullptr, &no_planted);
    for (const WgccaView& v : model.wgcca.views)
        if (v.name == "planted") CHECK(v.weight == 0.0);

    // a weight-0 view is not required at classification time
    auto features = self_features(model, inputs.lexicon, data.tokens[0]);
    CHECK_NOTHROW(classify_features(model, features));
}

TEST_CASE("fit_model error paths") {
    const auto inputs = synth::make_benchmark({.posts_per_class = 4, .seed = 63});
    const PipelineData data = prepare(inputs);
    PipelineConfig config;

    CHECK_THROWS_WITH_AS(fit_model(data, config, {}), doctest::Contains("no training posts"),
                         Error);

    PipelineConfig no_views;
    no_views.sentiment_view = false;
    no_views.hashed_view = false;
    PipelineInputs bare = inputs;
    bare.external_views.clear();
    const PipelineData bare_data = prepare(bare);
    CHECK_THROWS_WITH_AS(fit_model(bare_data, no_views, all_indices(bare.corpus)),
                         doctest::Contains("no views enabled"), Error);

    PipelineConfig big_k;
    big_k.latent_dim = 1000;
    CHECK_THROWS_WITH_AS(fit_model(data, big_k, all_indices(inputs.corpus)),
                         doctest::Contains("latent dimension exceeds sample count"), Error);
}

TEST_CASE("degenerate posts flow through featurization without NaNs") {
    const auto inputs = synth::make_benchmark({.posts_per_class = 8, .seed = 64});
    const PipelineData data = prepare(inputs);
    PipelineConfig config;
    config.hashed_dim = 16;
    config.train.epochs = 10;
    const TrainedModel model = fit_model(data, config, all_indices(inputs.corpus));

    // no lexicon words, no stative verbs, and an empty token sequence
    for (const char* text : {"zzz qqq xxx", "plain words only", ""}) {
        const auto features = self_features(model, inputs.lexicon, tokenize(text));
        for (const auto& [name, row] : features)
            for (double v : row) CHECK(std::isfinite(v));
    }
}
