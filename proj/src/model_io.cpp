#include "medsev/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include <json.hpp>

#include "medsev/error.hpp"

namespace medsev {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = m.values();
    return j;
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.rows() * m.cols()) throw Error("model file: matrix size mismatch");
    std::copy(data.begin(), data.end(), m.data());
    return m;
}

} // namespace

std::string model_to_json(const TrainedModel& model) {
    json j;
    j["format"] = kModelFormat;
    j["version"] = kModelVersion;
    j["task"] = std::string(task_name(model.task));

    json feat;
    feat["negation_scope"] = model.config.sentiment.negation_scope;
    feat["ts_window"] = model.config.sentiment.ts_window;
    feat["ts_normalizer"] = model.config.sentiment.ts_normalizer;
    feat["sentiment_view"] = model.config.sentiment_view;
    feat["sentiment_weight"] = model.config.sentiment_weight;
    feat["lexicon_suffix_retry"] = model.config.lexicon_suffix_retry;
    feat["hashed_view"] = model.config.hashed_view;
    feat["hashed_dim"] = model.config.hashed_dim;
    feat["hashed_seed"] = model.config.hashed_seed;
    feat["hashed_weight"] = model.config.hashed_weight;
    feat["standardize"] = model.config.standardize;
    j["featurize"] = feat;

    json train;
    train["learning_rate"] = model.config.train.learning_rate;
    train["l2_penalty"] = model.config.train.l2_penalty;
    train["epochs"] = model.config.train.epochs;
    train["batch_size"] = model.config.train.batch_size;
    train["seed"] = model.config.train.seed;
    j["train"] = train;

    j["stative_verbs"] = model.stative_verbs;

    json idf;
    idf["corpus_size"] = model.idf.corpus_size;
    idf["values"] = std::map<std::string, double>(model.idf.idf.begin(), model.idf.idf.end());
    j["idf"] = idf;

    json wgcca;
    wgcca["latent_dim"] = model.wgcca.latent_dim;
    wgcca["ridge"] = model.wgcca.ridge;
    wgcca["eigenvalues"] = model.wgcca.eigenvalues;
    json views = json::array();
    for (const WgccaView& v : model.wgcca.views) {
        json jv;
        jv["name"] = v.name;
        jv["weight"] = v.weight;
        jv["mean"] = v.scaling.mean;
        jv["std"] = v.scaling.std_dev;
        jv["u"] = matrix_to_json(v.u);
        views.push_back(std::move(jv));
    }
    wgcca["views"] = std::move(views);
    j["wgcca"] = std::move(wgcca);

    json softmax;
    softmax["class_names"] = model.softmax.class_names;
    softmax["w"] = matrix_to_json(model.softmax.w);
    softmax["b"] = model.softmax.bias;
    j["softmax"] = std::move(softmax);

    return j.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("model file: malformed JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kModelFormat)
            throw Error("model file: unexpected format tag");
        if (j.at("version").get<int>() != kModelVersion)
            throw Error("model file: unsupported version");

        TrainedModel model;
        model.task = parse_task(j.at("task").get<std::string>());

        const json& feat = j.at("featurize");
        model.config.sentiment.negation_scope = feat.at("negation_scope").get<int>();
        model.config.sentiment.ts_window = feat.at("ts_window").get<int>();
        model.config.sentiment.ts_normalizer = feat.at("ts_normalizer").get<int>();
        model.config.sentiment_view = feat.at("sentiment_view").get<bool>();
        model.config.sentiment_weight = feat.at("sentiment_weight").get<double>();
        model.config.lexicon_suffix_retry = feat.at("lexicon_suffix_retry").get<bool>();
        model.config.hashed_view = feat.at("hashed_view").get<bool>();
        model.config.hashed_dim = feat.at("hashed_dim").get<int>();
        model.config.hashed_seed = feat.at("hashed_seed").get<std::uint64_t>();
        model.config.hashed_weight = feat.at("hashed_weight").get<double>();
        model.config.standardize = feat.at("standardize").get<bool>();

        const json& train = j.at("train");
        model.config.train.learning_rate = train.at("learning_rate").get<double>();
        model.config.train.l2_penalty = train.at("l2_penalty").get<double>();
        model.config.train.epochs = train.at("epochs").get<int>();
        model.config.train.batch_size = train.at("batch_size").get<int>();
        model.config.train.seed = train.at("seed").get<std::uint64_t>();

        model.stative_verbs = j.at("stative_verbs").get<std::vector<std::string>>();

        const json& idf = j.at("idf");
        model.idf.corpus_size = idf.at("corpus_size").get<std::size_t>();
        for (const auto& [word, value] : idf.at("values").items())
            model.idf.idf.emplace(word, value.get<double>());

        const json& wgcca = j.at("wgcca");
        model.wgcca.latent_dim = wgcca.at("latent_dim").get<int>();
        model.wgcca.ridge = wgcca.at("ridge").get<double>();
        model.wgcca.eigenvalues = wgcca.at("eigenvalues").get<std::vector<double>>();
        for (const json& jv : wgcca.at("views")) {
            WgccaView v;
            v.name = jv.at("name").get<std::string>();
            v.weight = jv.at("weight").get<double>();
            v.scaling.mean = jv.at("mean").get<std::vector<double>>();
            v.scaling.std_dev = jv.at("std").get<std::vector<double>>();
            v.u = matrix_from_json(jv.at("u"));
            model.wgcca.views.push_back(std::move(v));
        }

        const json& softmax = j.at("softmax");
        model.softmax.class_names = softmax.at("class_names").get<std::vector<std::string>>();
        model.softmax.w = matrix_from_json(softmax.at("w"));
        model.softmax.bias = softmax.at("b").get<std::vector<double>>();
        model.config.latent_dim = model.wgcca.latent_dim;
        model.config.ridge = model.wgcca.ridge;
        return model;
    } catch (const json::exception& e) {
        throw Error(std::string("model file: missing or mistyped field: ") + e.what());
    }
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    const std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    atomic_write(path, model_to_json(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

} // namespace medsev
