#include "medsev/lexicon.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "medsev/error.hpp"

namespace medsev {

namespace {

struct ScoreAccum {
    double pos = 0.0;
    double neg = 0.0;
    std::size_t senses = 0;
};

bool parse_double(std::string_view s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

std::vector<std::string> split_tab(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string lowercase_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_lower_token(std::string_view s) {
    for (unsigned char c : s)
        if (std::isupper(c)) return false;
    return true;
}

} // namespace

const std::vector<std::string>& default_negation_cues() {
    static const std::vector<std::string> cues = {
        "not",     "no",     "never", "n't",   "without", "cannot",  "can't",   "don't",
        "doesn't", "didn't", "won't", "isn't", "aren't",  "wasn't",  "weren't"};
    return cues;
}

namespace {

Lexicon finish(std::unordered_map<std::string, ScoreAccum> accum) {
    Lexicon lex;
    lex.entries.reserve(accum.size());
    for (auto& [word, sc] : accum) {
        SentimentPrior prior;
        prior.pos = sc.pos / static_cast<double>(sc.senses);
        prior.neg = sc.neg / static_cast<double>(sc.senses);
        prior.obj = 1.0 - prior.pos - prior.neg;
        lex.entries.emplace(word, prior);
    }
    for (const std::string& cue : default_negation_cues()) lex.negation_cues.insert(cue);
    return lex;
}

} // namespace

Lexicon load_sentiwordnet(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path.string());

    std::unordered_map<std::string, ScoreAccum> accum;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tab(line);
        if (fields.size() != 6)
            throw Error(path.string() + ": line " + std::to_string(line_no) +
                        ": expected 6 tab-separated fields, got " + std::to_string(fields.size()));
        double pos = 0.0, neg = 0.0;
        if (!parse_double(fields[2], pos) || !parse_double(fields[3], neg))
            throw Error(path.string() + ": line " + std::to_string(line_no) +
                        ": bad PosScore/NegScore");
        if (pos < 0.0 || neg < 0.0 || pos + neg > 1.0 + 1e-9)
            throw Error(path.string() + ": line " + std::to_string(line_no) +
                        ": PosScore+NegScore exceeds 1");
        // SynsetTerms: space-separated "lemma#rank" entries.
        std::size_t start = 0;
        const std::string& terms = fields[4];
        while (start < terms.size()) {
            std::size_t end = terms.find(' ', start);
            if (end == std::string::npos) end = terms.size();
            std::string term = terms.substr(start, end - start);
            start = end + 1;
            if (term.empty()) continue;
            const std::size_t hash = term.find('#');
            if (hash != std::string::npos) term.resize(hash);
            if (term.empty() || term.find('_') != std::string::npos) continue;
            auto& sc = accum[lowercase_ascii(term)];
            sc.pos += pos;
            sc.neg += neg;
            ++sc.senses;
        }
    }
    return finish(std::move(accum));
}

Lexicon load_simple_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path.string());

    Lexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tab(line);
        if (fields.size() != 3)
            throw Error(path.string() + ": line " + std::to_string(line_no) +
                        ": expected word<TAB>pos<TAB>neg");
        double pos = 0.0, neg = 0.0;
        if (!parse_double(fields[1], pos) || !parse_double(fields[2], neg))
            throw Error(path.string() + ": line " + std::to_string(line_no) + ": bad scores");
        if (pos < 0.0 || neg < 0.0 || pos > 1.0 || neg > 1.0 || pos + neg > 1.0 + 1e-9)
            throw Error(path.string() + ": line " + std::to_string(line_no) +
                        ": scores outside [0,1] or pos+neg > 1");
        SentimentPrior prior{pos, neg, 1.0 - pos - neg};
        if (!lex.entries.emplace(lowercase_ascii(fields[0]), prior).second)
            throw Error(path.string() + ": line " + std::to_string(line_no) +
                        ": duplicate word \"" + fields[0] + "\"");
    }
    for (const std::string& cue : default_negation_cues()) lex.negation_cues.insert(cue);
    return lex;
}

void load_negation_cues(Lexicon& lexicon, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open negation cue file: " + path.string());
    std::unordered_set<std::string> cues;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        cues.insert(lowercase_ascii(line));
    }
    if (cues.empty()) throw Error("negation cue file has no entries: " + path.string());
    lexicon.negation_cues = std::move(cues);
}

const SentimentPrior* lookup(const Lexicon& lexicon, std::string_view token) {
    MEDSEV_DCHECK(is_lower_token(token), "lookup token must be lowercase");
    auto it = lexicon.entries.find(std::string(token));
    return it == lexicon.entries.end() ? nullptr : &it->second;
}

const SentimentPrior* lookup_scoring(const Lexicon& lexicon, std::string_view token) {
    if (const SentimentPrior* p = lookup(lexicon, token)) return p;
    if (!lexicon.suffix_retry) return nullptr;
    for (std::string_view suffix : {"ing", "ed", "s"}) {
        if (token.size() > suffix.size() && token.ends_with(suffix)) {
            if (const SentimentPrior* p =
                    lookup(lexicon, token.substr(0, token.size() - suffix.size())))
                return p;
        }
    }
    return nullptr;
}

std::vector<char> mark_negated(const TokenSequence& tokens, const Lexicon& lexicon, int scope) {
    if (scope < 1) throw Error("negation scope must be >= 1");
    std::vector<char> flags(tokens.size(), 0);
    for (const auto& [begin, end] : tokens.sentences) {
        for (std::size_t i = begin; i < end; ++i) {
            if (!lookup_scoring(lexicon, tokens.tokens[i])) continue;
            const std::size_t window_begin =
                i >= static_cast<std::size_t>(scope) ? i - static_cast<std::size_t>(scope) : 0;
            const std::size_t lo = std::max(window_begin, begin);
            for (std::size_t j = lo; j < i; ++j) {
                if (lexicon.negation_cues.count(tokens.tokens[j])) {
                    flags[i] = 1;
                    break;
                }
            }
        }
    }
    return flags;
}

} // namespace medsev
