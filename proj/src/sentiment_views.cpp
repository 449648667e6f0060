#include "medsev/sentiment_views.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "medsev/error.hpp"

namespace medsev {

double IdfTable::value(const std::string& word) const {
    auto it = idf.find(word);
    if (it != idf.end()) return it->second;
    return std::log(1.0 + static_cast<double>(corpus_size)) + 1.0;
}

namespace {

IdfTable idf_from_docs(std::size_t n_docs,
                       const std::unordered_map<std::string, std::size_t>& df) {
    IdfTable table;
    table.corpus_size = n_docs;
    table.idf.reserve(df.size());
    const double n = static_cast<double>(n_docs);
    for (const auto& [word, count] : df)
        table.idf.emplace(word, std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    return table;
}

} // namespace

IdfTable compute_idf(const Corpus& corpus) {
    if (corpus.size() == 0) throw Error("compute_idf: empty corpus");
    std::vector<TokenSequence> docs;
    docs.reserve(corpus.size());
    for (const ForumPost& p : corpus.posts()) docs.push_back(tokenize(p.text));
    return compute_idf(docs);
}

IdfTable compute_idf(const std::vector<TokenSequence>& documents) {
    if (documents.empty()) throw Error("compute_idf: no documents");
    std::unordered_map<std::string, std::size_t> df;
    std::unordered_set<std::string> seen;
    for (const TokenSequence& doc : documents) {
        seen.clear();
        for (const std::string& tok : doc.tokens)
            if (seen.insert(tok).second) ++df[tok];
    }
    return idf_from_docs(documents.size(), df);
}

std::map<std::string, WordScores> word_sentiment_scores(const TokenSequence& tokens,
                                                        const std::vector<char>& negated_flags,
                                                        const Lexicon& lexicon,
                                                        const IdfTable& idf) {
    if (negated_flags.size() != tokens.size())
        throw Error("word_sentiment_scores: flags not aligned with tokens");

    struct Counts {
        std::size_t tf = 0;
        std::size_t tfn = 0;
        const SentimentPrior* prior = nullptr;
    };
    std::map<std::string, Counts> counts;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const SentimentPrior* prior = lookup_scoring(lexicon, tokens.tokens[i]);
        if (!prior) continue;
        Counts& c = counts[tokens.tokens[i]];
        c.prior = prior;
        if (negated_flags[i])
            ++c.tfn;
        else
            ++c.tf;
    }

    std::map<std::string, WordScores> scores;
    for (const auto& [word, c] : counts) {
        const double tf = static_cast<double>(c.tf);
        const double tfn = static_cast<double>(c.tfn);
        const double w_idf = idf.value(word);
        WordScores s;
        s.pos = (tf * c.prior->pos + tfn * c.prior->neg) * w_idf;
        s.neg = (tf * c.prior->neg + tfn * c.prior->pos) * w_idf;
        s.obj = (tf + tfn) * w_idf * c.prior->obj;
        scores.emplace(word, s);
    }
    return scores;
}

WordSentimentView word_level_view(const TokenSequence& tokens,
                                  const std::vector<char>& negated_flags, const Lexicon& lexicon,
                                  const IdfTable& idf) {
    WordSentimentView view;
    const std::size_t n = tokens.size();
    if (n == 0) return view;
    const auto scores = word_sentiment_scores(tokens, negated_flags, lexicon, idf);
    for (const auto& [word, s] : scores) {
        view.ws_pos += s.pos;
        view.ws_neg += s.neg;
        view.ws_obj += s.obj;
    }
    view.ws_pos /= static_cast<double>(n);
    view.ws_neg /= static_cast<double>(n);
    view.ws_obj /= static_cast<double>(n);
    return view;
}

const std::vector<std::string>& default_stative_verbs() {
    static const std::vector<std::string> verbs = {
        "feel",       "feels",       "feeling",      "felt",
        "suffer",     "suffers",     "suffering",    "suffered",
        "experience", "experiences", "experiencing", "experienced"};
    return verbs;
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open word list file: " + path.string());
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string lower = line;
        for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        words.push_back(lower);
    }
    if (words.empty()) throw Error("word list file has no entries: " + path.string());
    return words;
}

TargetSentimentView target_view(const TokenSequence& tokens, const Lexicon& lexicon,
                                const std::vector<std::string>& stative_verbs, int window,
                                int normalizer) {
    if (window < 1) throw Error("target view window must be >= 1");
    if (normalizer < 1) throw Error("target view normalizer must be >= 1");

    const std::unordered_set<std::string> verbs(stative_verbs.begin(), stative_verbs.end());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(tokens.size());
    const std::ptrdiff_t k = window;

    TargetSentimentView view;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (!verbs.count(tokens.tokens[static_cast<std::size_t>(i)])) continue;
        double score_pos = 0.0;
        double score_neg = 0.0;
        for (std::ptrdiff_t d = 1; d <= k; ++d) {
            const double weight = static_cast<double>(k - d + 1);
            for (const std::ptrdiff_t pos : {i - d, i + d}) {
                if (pos < 0 || pos >= n) continue;
                const SentimentPrior* prior =
                    lookup_scoring(lexicon, tokens.tokens[static_cast<std::size_t>(pos)]);
                if (!prior) continue;
                score_pos += weight * prior->pos;
                score_neg += weight * prior->neg;
            }
        }
        score_pos /= static_cast<double>(normalizer);
        score_neg /= static_cast<double>(normalizer);
        view.ts_pos = std::max(view.ts_pos, score_pos);
        view.ts_neg = std::max(view.ts_neg, score_neg);
    }
    return view;
}

SentimentFeatures sentiment_features(const TokenSequence& tokens, const Lexicon& lexicon,
                                     const IdfTable& idf,
                                     const std::vector<std::string>& stative_verbs,
                                     const SentimentParams& params) {
    const auto flags = mark_negated(tokens, lexicon, params.negation_scope);
    const auto ws = word_level_view(tokens, flags, lexicon, idf);
    const auto ts = target_view(tokens, lexicon, stative_verbs, params.ts_window,
                                params.ts_normalizer);
    return SentimentFeatures{ws.ws_pos, ws.ws_neg, ws.ws_obj, ts.ts_pos, ts.ts_neg};
}

} // namespace medsev
