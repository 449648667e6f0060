// medsev — severity classification for health-forum posts.
//
// Subcommands: featurize, train, eval, ablate, predict. Every run is
// deterministic given its flags; outputs are written atomically.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "medsev/corpus.hpp"
#include "medsev/error.hpp"
#include "medsev/evaluation.hpp"
#include "medsev/lexicon.hpp"
#include "medsev/model_io.hpp"
#include "medsev/pipeline.hpp"
#include "medsev/sentiment_views.hpp"
#include "medsev/view_ingest.hpp"

namespace {

using namespace medsev;

std::string fmt_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "0";
    return std::string(buf, p);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

struct CommonOpts {
    std::string corpus_path;
    std::string corpus_format = "jsonl";
    std::string task; // optional filter for mixed-task corpora
    std::string lexicon_path;
    std::string lexicon_format = "tsv"; // tsv | swn
    std::string negation_cues_path;
    std::string stative_verbs_path;
    std::vector<std::string> view_specs; // path[:weight]
    std::string out_path;

    PipelineConfig config;
    bool no_sentiment_view = false;
    bool no_hashed_view = false;
    bool no_standardize = false;
    bool no_stratified = false;

    std::uint64_t master_seed = 0;
    bool master_seed_set = false;
};

void add_corpus_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--corpus", o.corpus_path, "corpus file (JSONL or CSV)")->required();
    cmd->add_option("--format", o.corpus_format, "corpus format: jsonl|csv (default jsonl)");
    cmd->add_option("--task", o.task,
                    "restrict a mixed corpus to one task: medical_condition|medication");
}

void add_lexicon_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--lexicon", o.lexicon_path, "sentiment lexicon file")->required();
    cmd->add_option("--lexicon-format", o.lexicon_format,
                    "lexicon format: tsv (word<TAB>pos<TAB>neg) | swn (SentiWordNet 3.0)");
    cmd->add_option("--negation-cues", o.negation_cues_path,
                    "negation cue list, one word per line (replaces the default list)");
    cmd->add_option("--stative-verbs", o.stative_verbs_path,
                    "stative verb list, one word per line (replaces the default list)");
    cmd->add_flag("--suffix-retry", o.config.lexicon_suffix_retry,
                  "retry lexicon lookups with -s/-ed/-ing stripped");
    cmd->add_option("--negation-scope", o.config.sentiment.negation_scope,
                    "tokens a negation cue reaches within a sentence (default 3)");
    cmd->add_option("--ts-window", o.config.sentiment.ts_window,
                    "context window around stative verbs (default 5)");
    cmd->add_option("--ts-normalizer", o.config.sentiment.ts_normalizer,
                    "target-view score divisor (default 10)");
}

void add_pipeline_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--view", o.view_specs,
                    "external view file, optionally with weight: path[:weight]; repeatable");
    cmd->add_flag("--no-sentiment-view", o.no_sentiment_view, "disable the sentiment view");
    cmd->add_option("--sentiment-weight", o.config.sentiment_weight,
                    "fusion weight of the sentiment view (default 1)");
    cmd->add_flag("--no-hashed-view", o.no_hashed_view, "disable the hashed content view");
    cmd->add_option("--hashed-dim", o.config.hashed_dim,
                    "hashed content view dimension (default 256)");
    cmd->add_option("--hashed-seed", o.config.hashed_seed, "hashed content view seed");
    cmd->add_option("--hashed-weight", o.config.hashed_weight,
                    "fusion weight of the hashed content view (default 1)");
    cmd->add_flag("--no-standardize", o.no_standardize,
                  "skip per-column standardization before fusion");
    cmd->add_option("--latent-dim", o.config.latent_dim,
                    "fused dimension k (default min(64, min view dim, m-1))");
    cmd->add_option("--ridge", o.config.ridge,
                    "ridge added to every Gram matrix (default 1e-6*trace/d)");
    cmd->add_option("--lr", o.config.train.learning_rate, "softmax learning rate (default 0.1)");
    cmd->add_option("--l2", o.config.train.l2_penalty, "softmax L2 penalty (default 1e-4)");
    cmd->add_option("--epochs", o.config.train.epochs, "softmax epochs (default 200)");
    cmd->add_option("--batch-size", o.config.train.batch_size,
                    "softmax batch size (default 0 = full batch)");
    cmd->add_option("--train-seed", o.config.train.seed, "softmax shuffle seed");
}

void add_cv_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--folds", o.config.folds, "cross-validation folds (default 10)");
    cmd->add_option("--fold-seed", o.config.fold_seed, "fold assignment seed");
    cmd->add_flag("--no-stratified", o.no_stratified, "disable stratified folds");
}

void finalize_options(CommonOpts& o, CLI::App* cmd) {
    o.config.sentiment_view = !o.no_sentiment_view;
    o.config.hashed_view = !o.no_hashed_view;
    o.config.standardize = !o.no_standardize;
    o.config.stratified = !o.no_stratified;
    auto explicitly_set = [&](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt && opt->count() > 0;
    };
    if (o.master_seed_set) {
        if (!explicitly_set("--fold-seed")) o.config.fold_seed = o.master_seed;
        if (!explicitly_set("--train-seed")) o.config.train.seed = o.master_seed;
        if (!explicitly_set("--hashed-seed")) o.config.hashed_seed = o.master_seed;
    }
}

CorpusFormat parse_format(const std::string& s) {
    if (s == "jsonl") return CorpusFormat::Jsonl;
    if (s == "csv") return CorpusFormat::Csv;
    throw Error("unknown corpus format: \"" + s + "\" (expected jsonl or csv)");
}

Lexicon load_lexicon_opts(const CommonOpts& o) {
    Lexicon lex;
    if (o.lexicon_format == "swn")
        lex = load_sentiwordnet(o.lexicon_path);
    else if (o.lexicon_format == "tsv")
        lex = load_simple_lexicon(o.lexicon_path);
    else
        throw Error("unknown lexicon format: \"" + o.lexicon_format + "\"");
    if (!o.negation_cues_path.empty()) load_negation_cues(lex, o.negation_cues_path);
    lex.suffix_retry = o.config.lexicon_suffix_retry;
    return lex;
}

std::pair<std::string, double> parse_view_spec(const std::string& spec) {
    const std::size_t colon = spec.rfind(':');
    if (colon != std::string::npos && colon + 1 < spec.size()) {
        const std::string tail = spec.substr(colon + 1);
        double w = 0.0;
        auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), w);
        if (ec == std::errc() && p == tail.data() + tail.size()) {
            if (w < 0.0) throw Error("view weight must be >= 0: " + spec);
            return {spec.substr(0, colon), w};
        }
    }
    return {spec, 1.0};
}

PipelineInputs load_inputs(const CommonOpts& o) {
    PipelineInputs inputs;
    Corpus corpus = load_corpus(o.corpus_path, parse_format(o.corpus_format));
    if (!o.task.empty()) corpus = corpus.filter_task(parse_task(o.task));
    inputs.corpus = std::move(corpus);
    inputs.lexicon = load_lexicon_opts(o);
    if (!o.stative_verbs_path.empty())
        inputs.stative_verbs = load_word_list(o.stative_verbs_path);
    for (const std::string& spec : o.view_specs) {
        const auto [path, weight] = parse_view_spec(spec);
        ViewMatrix v = load_view_vectors(path);
        v.weight = weight;
        inputs.external_views.push_back(std::move(v));
    }
    return inputs;
}

// ---------------------------------------------------------------------------
// featurize
// ---------------------------------------------------------------------------

int run_featurize(const CommonOpts& o) {
    const Corpus corpus = load_corpus(o.corpus_path, parse_format(o.corpus_format));
    const Lexicon lexicon = load_lexicon_opts(o);
    const std::vector<std::string> verbs = o.stative_verbs_path.empty()
                                               ? default_stative_verbs()
                                               : load_word_list(o.stative_verbs_path);
    const IdfTable idf = compute_idf(corpus);

    std::string csv = "id,ws_pos,ws_neg,ws_obj,ts_pos,ts_neg\n";
    for (const ForumPost& p : corpus.posts()) {
        const SentimentFeatures f =
            sentiment_features(tokenize(p.text), lexicon, idf, verbs, o.config.sentiment);
        csv += csv_quote(p.id) + ',' + fmt_double(f.ws_pos) + ',' + fmt_double(f.ws_neg) + ',' +
               fmt_double(f.ws_obj) + ',' + fmt_double(f.ts_pos) + ',' + fmt_double(f.ts_neg) +
               '\n';
    }
    atomic_write(o.out_path, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

int run_train(const CommonOpts& o, bool tune_weights, std::uint64_t tune_seed,
              const std::string& spectrum_path) {
    const PipelineInputs inputs = load_inputs(o);
    const PipelineData data = prepare(inputs);

    std::map<std::string, double> weight_override;
    if (tune_weights) {
        weight_override = tune_view_weights(data, o.config, 5, tune_seed);
        std::cout << "tuned view weights:";
        for (const auto& [name, w] : weight_override) std::cout << ' ' << name << '=' << w;
        std::cout << '\n';
    }

    std::vector<std::size_t> all_indices(inputs.corpus.size());
    std::iota(all_indices.begin(), all_indices.end(), 0);
    const TrainedModel model =
        fit_model(data, o.config, all_indices, nullptr, nullptr,
                  tune_weights ? &weight_override : nullptr);
    save_model(model, o.out_path);

    if (!spectrum_path.empty()) {
        std::string csv = "index,eigenvalue\n";
        for (std::size_t i = 0; i < model.wgcca.eigenvalues.size(); ++i)
            csv += std::to_string(i) + ',' + fmt_double(model.wgcca.eigenvalues[i]) + '\n';
        atomic_write(spectrum_path, csv);
    }
    std::cout << "trained " << task_name(model.task) << " model on " << inputs.corpus.size()
              << " posts (k=" << model.wgcca.latent_dim << ", ridge=" << model.wgcca.ridge
              << ") -> " << o.out_path << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

nlohmann::json metrics_to_json(const MetricsReport& m) {
    nlohmann::json j;
    j["macro_precision"] = m.macro_precision;
    j["macro_recall"] = m.macro_recall;
    j["macro_f1"] = m.macro_f1;
    j["weighted_precision"] = m.weighted_precision;
    j["weighted_recall"] = m.weighted_recall;
    j["weighted_f1"] = m.weighted_f1;
    nlohmann::json per_class = nlohmann::json::array();
    for (const ClassMetrics& c : m.per_class) {
        per_class.push_back({{"label", c.label},
                             {"precision", c.precision},
                             {"recall", c.recall},
                             {"f1", c.f1},
                             {"support", c.support}});
    }
    j["per_class"] = std::move(per_class);
    return j;
}

int run_eval(const CommonOpts& o) {
    const PipelineInputs inputs = load_inputs(o);
    const PipelineData data = prepare(inputs);
    const FoldPlan plan =
        split_kfold(inputs.corpus, o.config.folds, o.config.fold_seed, o.config.stratified);
    const CvResult cv = cross_validate(data, o.config, plan);

    nlohmann::json j;
    j["task"] = std::string(task_name(inputs.corpus.single_task()));
    j["folds"] = nlohmann::json::array();
    for (const CvFold& fold : cv.folds) {
        nlohmann::json jf = metrics_to_json(fold.metrics);
        jf["fold"] = fold.fold;
        jf["confusion"] = fold.confusion.counts;
        j["folds"].push_back(std::move(jf));
    }
    j["mean_macro_f1"] = cv.mean_macro_f1;
    j["std_macro_f1"] = cv.std_macro_f1;
    j["mean_weighted_f1"] = cv.mean_weighted_f1;
    j["std_weighted_f1"] = cv.std_weighted_f1;
    atomic_write(o.out_path, j.dump(2) + "\n");

    std::printf("%-6s %12s %12s\n", "fold", "macro_f1", "weighted_f1");
    for (const CvFold& fold : cv.folds)
        std::printf("%-6d %12.4f %12.4f\n", fold.fold, fold.metrics.macro_f1,
                    fold.metrics.weighted_f1);
    std::printf("mean   %12.4f %12.4f\n", cv.mean_macro_f1, cv.mean_weighted_f1);
    std::printf("std    %12.4f %12.4f\n", cv.std_macro_f1, cv.std_weighted_f1);
    return 0;
}

// ---------------------------------------------------------------------------
// ablate
// ---------------------------------------------------------------------------

int run_ablate(const CommonOpts& o) {
    Corpus full = load_corpus(o.corpus_path, parse_format(o.corpus_format));
    if (!o.task.empty()) full = full.filter_task(parse_task(o.task));
    const Lexicon lexicon = load_lexicon_opts(o);

    std::vector<std::string> columns;          // one per task present
    std::vector<std::string> row_names;        // "All", then removed views
    std::map<std::string, std::vector<double>> f1_by_row;

    for (TaskKind task : full.tasks_present()) {
        PipelineInputs inputs;
        inputs.corpus = full.filter_task(task);
        inputs.lexicon = lexicon;
        if (!o.stative_verbs_path.empty())
            inputs.stative_verbs = load_word_list(o.stative_verbs_path);
        for (const std::string& spec : o.view_specs) {
            const auto [path, weight] = parse_view_spec(spec);
            ViewMatrix v = load_view_vectors(path);
            v.weight = weight;
            inputs.external_views.push_back(std::move(v));
        }
        const PipelineData data = prepare(inputs);
        const FoldPlan plan = split_kfold(inputs.corpus, o.config.folds, o.config.fold_seed,
                                          o.config.stratified);
        const AblationTable table = ablate(data, o.config, plan);
        columns.push_back(std::string(task_name(task)) + "_macro_f1");
        for (const AblationRow& row : table.rows) {
            const std::string name =
                row.removed_view == "All" ? std::string("All") : "-" + row.removed_view;
            if (f1_by_row.find(name) == f1_by_row.end()) row_names.push_back(name);
            f1_by_row[name].push_back(row.macro_f1);
        }
    }

    std::string csv = "view";
    for (const std::string& col : columns) csv += ',' + col;
    csv += '\n';
    for (const std::string& name : row_names) {
        csv += csv_quote(name);
        for (double f1 : f1_by_row[name]) csv += ',' + fmt_double(f1);
        csv += '\n';
    }
    atomic_write(o.out_path, csv);
    std::cout << csv;
    return 0;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

int run_predict(const CommonOpts& o, const std::string& model_path,
                const std::string& posts_path) {
    TrainedModel model = load_model(model_path);
    Lexicon lexicon = load_lexicon_opts(o);
    lexicon.suffix_retry = model.config.lexicon_suffix_retry;

    // External views the model needs at projection time, with an id index.
    struct IndexedView {
        ViewMatrix view;
        std::map<std::string, std::size_t> row_of;
    };
    std::map<std::string, IndexedView> external;
    for (const std::string& spec : o.view_specs) {
        const auto [path, weight] = parse_view_spec(spec);
        IndexedView iv;
        iv.view = load_view_vectors(path);
        for (std::size_t r = 0; r < iv.view.ids.size(); ++r)
            iv.row_of.emplace(iv.view.ids[r], r);
        const std::string name = iv.view.name;
        external.emplace(name, std::move(iv));
    }

    std::ifstream in(posts_path);
    if (!in) throw Error("cannot open posts file: " + posts_path);

    std::string out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(posts_path + ": line " + std::to_string(line_no) + ": malformed JSON: " +
                        e.what());
        }
        if (!rec.contains("id") || !rec.contains("text"))
            throw Error(posts_path + ": line " + std::to_string(line_no) +
                        ": record needs \"id\" and \"text\"");
        const std::string id = rec["id"].get<std::string>();
        const TokenSequence tokens = tokenize(rec["text"].get<std::string>());

        auto features = self_features(model, lexicon, tokens);
        for (const WgccaView& view : model.wgcca.views) {
            if (view.weight <= 0.0 || features.count(view.name)) continue;
            auto it = external.find(view.name);
            if (it == external.end())
                throw Error("view \"" + view.name +
                            "\" required by the model; pass its file with --view");
            const ViewMatrix& vm = it->second.view;
            auto row_it = it->second.row_of.find(id);
            if (row_it == it->second.row_of.end())
                throw Error("view \"" + view.name + "\" has no row for post id \"" + id + "\"");
            features.emplace(view.name,
                             std::vector<double>(vm.data.row(row_it->second),
                                                 vm.data.row(row_it->second) + vm.dim()));
        }

        const Prediction pred = classify_features(model, features);
        nlohmann::json jr;
        jr["id"] = id;
        jr["label"] = model.softmax.class_names[static_cast<std::size_t>(pred.label)];
        nlohmann::json proba;
        for (std::size_t c = 0; c < pred.proba.size(); ++c)
            proba[model.softmax.class_names[c]] = pred.proba[c];
        jr["proba"] = std::move(proba);
        nlohmann::json views;
        for (const auto& [name, norm] : pred.view_contrib) views[name] = norm;
        jr["views"] = std::move(views);
        out += jr.dump() + "\n";
    }
    atomic_write(o.out_path, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"medsev — multi-view severity classification for health-forum posts"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; explicit flags win");

    CommonOpts feat_opts, train_opts, eval_opts, ablate_opts, predict_opts;
    bool tune_weights = false;
    std::uint64_t tune_seed = 99;
    std::string spectrum_path, model_path, posts_path;

    CLI::App* featurize = app.add_subcommand("featurize", "write the sentiment-view CSV");
    add_corpus_options(featurize, feat_opts);
    add_lexicon_options(featurize, feat_opts);
    featurize->add_option("--out", feat_opts.out_path, "output CSV path")->required();

    CLI::App* train = app.add_subcommand("train", "fit the full pipeline and save the model");
    add_corpus_options(train, train_opts);
    add_lexicon_options(train, train_opts);
    add_pipeline_options(train, train_opts);
    train->add_flag("--tune-weights", tune_weights,
                    "grid-tune view weights over {0.25,0.5,1} on a validation fold");
    train->add_option("--tune-seed", tune_seed, "validation split seed for --tune-weights");
    train->add_option("--spectrum", spectrum_path, "also write the eigenvalue spectrum CSV");
    train->add_option("--seed", train_opts.master_seed, "master seed for fold/train/hash seeds");
    train->add_option("--out", train_opts.out_path, "output model path")->required();

    CLI::App* eval = app.add_subcommand("eval", "k-fold cross-validation metrics");
    add_corpus_options(eval, eval_opts);
    add_lexicon_options(eval, eval_opts);
    add_pipeline_options(eval, eval_opts);
    add_cv_options(eval, eval_opts);
    eval->add_option("--seed", eval_opts.master_seed, "master seed for fold/train/hash seeds");
    eval->add_option("--out", eval_opts.out_path, "output metrics JSON path")->required();

    CLI::App* ablate_cmd = app.add_subcommand("ablate", "leave-one-view-out ablation table");
    add_corpus_options(ablate_cmd, ablate_opts);
    add_lexicon_options(ablate_cmd, ablate_opts);
    add_pipeline_options(ablate_cmd, ablate_opts);
    add_cv_options(ablate_cmd, ablate_opts);
    ablate_cmd->add_option("--seed", ablate_opts.master_seed, "master seed");
    ablate_cmd->add_option("--out", ablate_opts.out_path, "output ablation CSV path")->required();

    CLI::App* predict = app.add_subcommand("predict", "classify posts with a saved model");
    predict->add_option("--model", model_path, "model file from `train`")->required();
    predict->add_option("--posts", posts_path, "JSONL posts with id and text")->required();
    add_lexicon_options(predict, predict_opts);
    predict->add_option("--view", predict_opts.view_specs,
                        "external view file the model requires; repeatable");
    predict->add_option("--out", predict_opts.out_path, "output JSONL path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (featurize->parsed()) {
            finalize_options(feat_opts, featurize);
            return run_featurize(feat_opts);
        }
        if (train->parsed()) {
            train_opts.master_seed_set = train->count("--seed") > 0;
            finalize_options(train_opts, train);
            return run_train(train_opts, tune_weights, tune_seed, spectrum_path);
        }
        if (eval->parsed()) {
            eval_opts.master_seed_set = eval->count("--seed") > 0;
            finalize_options(eval_opts, eval);
            return run_eval(eval_opts);
        }
        if (ablate_cmd->parsed()) {
            ablate_opts.master_seed_set = ablate_cmd->count("--seed") > 0;
            finalize_options(ablate_opts, ablate_cmd);
            return run_ablate(ablate_opts);
        }
        if (predict->parsed()) {
            finalize_options(predict_opts, predict);
            return run_predict(predict_opts, model_path, posts_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
