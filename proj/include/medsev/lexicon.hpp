#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "medsev/corpus.hpp"

// Sentiment priors per word plus negation-cue detection.

namespace medsev {

// Positive/negative/objective prior mass for one word; the three sum to 1.
struct SentimentPrior {
    double pos = 0.0;
    double neg = 0.0;
    double obj = 1.0;
};

struct Lexicon {
    std::unordered_map<std::string, SentimentPrior> entries;
    std::unordered_set<std::string> negation_cues;
    // When set, scoring lookups retry after stripping -s/-ed/-ing.
    bool suffix_retry = false;

    std::size_t size() const { return entries.size(); }
};

// Built-in negation cue list.
const std::vector<std::string>& default_negation_cues();

// SentiWordNet 3.0 TSV (POS, ID, PosScore, NegScore, SynsetTerms, Gloss;
// '#' comments). The per-word prior is the unweighted mean of the sense
// scores over every sense and POS tag containing the word; multiword synset
// terms (underscore-joined) are skipped and "#rank" markers stripped.
Lexicon load_sentiwordnet(const std::filesystem::path& path);

// Simplified lexicon: word<TAB>pos<TAB>neg per line, obj derived.
Lexicon load_simple_lexicon(const std::filesystem::path& path);

// Negation cue file: one word per line; replaces the default list.
void load_negation_cues(Lexicon& lexicon, const std::filesystem::path& path);

// Exact-match lookup; token must already be lowercase (debug-checked).
// Returns nullptr for non-sentiment words.
const SentimentPrior* lookup(const Lexicon& lexicon, std::string_view token);

// Lookup honoring the suffix_retry flag: exact match first, then the token
// with one of -s/-ed/-ing stripped.
const SentimentPrior* lookup_scoring(const Lexicon& lexicon, std::string_view token);

// flags[i] is true iff tokens[i] is a lexicon entry and a negation cue
// occurs within the preceding `scope` tokens inside the same sentence.
std::vector<char> mark_negated(const TokenSequence& tokens, const Lexicon& lexicon, int scope);

} // namespace medsev
