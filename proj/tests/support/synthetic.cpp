#include "support/synthetic.hpp"

#include <unistd.h>

#include <atomic>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "medsev/error.hpp"

namespace synth {

using namespace medsev;

namespace {

struct ClassVocab {
    std::vector<std::string> words;
};

// Four class vocabularies with distinct sentiment signatures.
const std::vector<ClassVocab>& class_vocab() {
    static const std::vector<ClassVocab> v = {
        {{"stable", "calm", "better", "relieved"}},
        {{"sore", "ache", "tired", "uneasy"}},
        {{"awful", "worse", "panic", "terrible"}},
        {{"curious", "question", "wonder", "asking"}},
    };
    return v;
}

const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> v = {"i", "the", "today", "again", "and", "was", "my"};
    return v;
}

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, p) : std::string("0");
}

} // namespace

std::string benchmark_lexicon_tsv() {
    // word pos neg; objective mass implied
    return "stable\t0.8\t0.05\n"
           "calm\t0.75\t0.05\n"
           "better\t0.7\t0.1\n"
           "relieved\t0.85\t0.05\n"
           "sore\t0.1\t0.55\n"
           "ache\t0.05\t0.6\n"
           "tired\t0.1\t0.5\n"
           "uneasy\t0.1\t0.6\n"
           "awful\t0.02\t0.9\n"
           "worse\t0.05\t0.85\n"
           "panic\t0.05\t0.9\n"
           "terrible\t0.02\t0.88\n"
           "curious\t0.3\t0.05\n"
           "question\t0.1\t0.1\n"
           "wonder\t0.25\t0.1\n"
           "asking\t0.15\t0.1\n";
}

PipelineInputs make_benchmark(const BenchSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> filler_pick(0, filler_words().size() - 1);
    std::uniform_int_distribution<int> extra_fillers(1, 3);
    std::uniform_int_distribution<int> class_word_count(2, 3);

    const std::size_t total = spec.posts_per_class * static_cast<std::size_t>(kNumClasses);

    std::vector<ForumPost> posts;
    posts.reserve(total);
    ViewMatrix planted;
    planted.name = "planted";
    planted.data = Matrix(total, static_cast<std::size_t>(spec.planted_dim));
    ViewMatrix noise;
    noise.name = "noise";
    if (spec.add_noise_view) noise.data = Matrix(total, static_cast<std::size_t>(spec.noise_dim));

    std::size_t row = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        const auto& vocab = class_vocab()[static_cast<std::size_t>(c)].words;
        std::uniform_int_distribution<std::size_t> vocab_pick(0, vocab.size() - 1);
        for (std::size_t i = 0; i < spec.posts_per_class; ++i, ++row) {
            std::ostringstream text;
            text << filler_words()[filler_pick(rng)];
            text << " feel";
            const int n_class_words = class_word_count(rng);
            for (int w = 0; w < n_class_words; ++w) text << ' ' << vocab[vocab_pick(rng)];
            const int n_fill = extra_fillers(rng);
            for (int w = 0; w < n_fill; ++w) text << ' ' << filler_words()[filler_pick(rng)];
            text << '.';

            ForumPost p;
            p.id = "p" + std::to_string(row);
            p.text = text.str();
            p.task = spec.task;
            p.label = c;
            posts.push_back(std::move(p));

            for (int j = 0; j < spec.planted_dim; ++j) {
                const double mean = (j == c) ? spec.planted_separation : 0.0;
                planted.data(row, static_cast<std::size_t>(j)) =
                    mean + spec.planted_sigma * gauss(rng);
            }
            if (spec.add_noise_view)
                for (int j = 0; j < spec.noise_dim; ++j)
                    noise.data(row, static_cast<std::size_t>(j)) = gauss(rng);
        }
    }

    PipelineInputs inputs;
    inputs.corpus = Corpus(std::move(posts));
    for (std::size_t i = 0; i < total; ++i) {
        planted.ids.push_back(inputs.corpus.post(i).id);
        if (spec.add_noise_view) noise.ids.push_back(inputs.corpus.post(i).id);
    }
    inputs.external_views.push_back(std::move(planted));
    if (spec.add_noise_view) inputs.external_views.push_back(std::move(noise));

    // lexicon from the TSV text via a temp file so the real loader runs
    const auto dir = make_temp_dir("medsev-lex");
    const auto lex_path = dir / "lexicon.tsv";
    write_file(lex_path, benchmark_lexicon_tsv());
    inputs.lexicon = load_simple_lexicon(lex_path);
    std::filesystem::remove_all(dir);
    return inputs;
}

std::filesystem::path make_temp_dir(const std::string& hint) {
    static std::atomic<unsigned> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    while (true) {
        const auto candidate =
            base / (hint + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter.fetch_add(1)));
        std::error_code ec;
        if (std::filesystem::create_directory(candidate, ec)) return candidate;
        if (ec && counter.load() > 10000) throw Error("cannot create temp dir: " + ec.message());
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string corpus_jsonl(const Corpus& corpus) {
    std::string out;
    for (const ForumPost& p : corpus.posts()) {
        nlohmann::json j;
        j["id"] = p.id;
        j["text"] = p.text;
        j["task"] = std::string(task_name(p.task));
        j["label"] = task_labels(p.task)[static_cast<std::size_t>(p.label)];
        out += j.dump() + "\n";
    }
    return out;
}

std::string view_file_text(const ViewMatrix& view) {
    std::string out = "#view " + view.name + " dim=" + std::to_string(view.dim()) + "\n";
    for (std::size_t i = 0; i < view.size(); ++i) {
        out += view.ids[i];
        for (std::size_t j = 0; j < view.dim(); ++j) out += ',' + fmt(view.data(i, j));
        out += '\n';
    }
    return out;
}

} // namespace synth
