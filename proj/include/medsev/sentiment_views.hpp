#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "medsev/corpus.hpp"
#include "medsev/lexicon.hpp"

// The two lexicon-driven sentiment views of a post: word-level scores
// (tf/idf-weighted positive/negative/objective mass, with negation swapping
// the polar mass) and target-specific scores around stative verbs
// (triangularly weighted context windows, max over verb occurrences).

namespace medsev {

// Smoothed inverse document frequencies: idf(w) = ln((1+N)/(1+df(w))) + 1.
struct IdfTable {
    std::unordered_map<std::string, double> idf;
    std::size_t corpus_size = 0;

    // Stored value, or the unseen-word fallback ln(1+N)+1.
    double value(const std::string& word) const;
};

IdfTable compute_idf(const Corpus& corpus);

// idf computed over a subset of posts (document frequency counted on those
// posts only); used by cross-validation to fit on training folds.
IdfTable compute_idf(const std::vector<TokenSequence>& documents);

struct WordScores {
    double pos = 0.0;
    double neg = 0.0;
    double obj = 0.0;
};

// Per-distinct-word scores: with tf = non-negated occurrences and
// tfn = negated occurrences of word w,
//   pos = (tf*f+ + tfn*f-)*idf, neg = (tf*f- + tfn*f+)*idf,
//   obj = (tf+tfn)*idf*fO.
// Only words the lexicon knows appear in the result.
std::map<std::string, WordScores> word_sentiment_scores(const TokenSequence& tokens,
                                                        const std::vector<char>& negated_flags,
                                                        const Lexicon& lexicon,
                                                        const IdfTable& idf);

struct WordSentimentView {
    double ws_pos = 0.0;
    double ws_neg = 0.0;
    double ws_obj = 0.0;
};

// Sum of the per-word scores divided by the token count n (zeros when the
// post is empty or has no lexicon words).
WordSentimentView word_level_view(const TokenSequence& tokens,
                                  const std::vector<char>& negated_flags, const Lexicon& lexicon,
                                  const IdfTable& idf);

struct TargetSentimentView {
    double ts_pos = 0.0;
    double ts_neg = 0.0;
};

// Built-in stative verb list (feel/suffer/experience with inflections).
const std::vector<std::string>& default_stative_verbs();

std::vector<std::string> load_word_list(const std::filesystem::path& path);

// For each stative-verb occurrence at position i, accumulate
// weight(k - distance + 1) * prior over lexicon words at positions
// [i-k, i-1] and [i+1, i+k] (clipped to the post), divide by `normalizer`,
// and keep the maximum over occurrences; (0,0) when no stative verb occurs.
TargetSentimentView target_view(const TokenSequence& tokens, const Lexicon& lexicon,
                                const std::vector<std::string>& stative_verbs, int window,
                                int normalizer);

// The full 5-dimensional sentiment feature row of one post.
struct SentimentFeatures {
    double ws_pos = 0.0;
    double ws_neg = 0.0;
    double ws_obj = 0.0;
    double ts_pos = 0.0;
    double ts_neg = 0.0;
};

struct SentimentParams {
    int negation_scope = 3;
    int ts_window = 5;
    int ts_normalizer = 10;
};

SentimentFeatures sentiment_features(const TokenSequence& tokens, const Lexicon& lexicon,
                                     const IdfTable& idf,
                                     const std::vector<std::string>& stative_verbs,
                                     const SentimentParams& params);

} // namespace medsev
