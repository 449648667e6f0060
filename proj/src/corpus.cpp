#include "medsev/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "medsev/error.hpp"

namespace medsev {

namespace {

const std::array<std::string, kNumClasses> kConditionLabels = {
    "recover", "exist", "deteriorate", "other"};
const std::array<std::string, kNumClasses> kMedicationLabels = {
    "effective", "ineffective", "serious_adverse_effect", "other"};

std::string trim_copy(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace

const std::array<std::string, kNumClasses>& task_labels(TaskKind task) {
    return task == TaskKind::MedicalCondition ? kConditionLabels : kMedicationLabels;
}

std::string_view task_name(TaskKind task) {
    return task == TaskKind::MedicalCondition ? "medical_condition" : "medication";
}

TaskKind parse_task(std::string_view name) {
    if (name == "medical_condition") return TaskKind::MedicalCondition;
    if (name == "medication") return TaskKind::Medication;
    throw Error("unknown task: \"" + std::string(name) + "\"");
}

int parse_label(TaskKind task, std::string_view label) {
    const auto& labels = task_labels(task);
    for (int i = 0; i < kNumClasses; ++i)
        if (labels[i] == label) return i;
    throw Error("label \"" + std::string(label) + "\" invalid for task " +
                std::string(task_name(task)));
}

Corpus::Corpus(std::vector<ForumPost> posts) : posts_(std::move(posts)) {
    index_.reserve(posts_.size());
    for (std::size_t i = 0; i < posts_.size(); ++i) {
        const ForumPost& p = posts_[i];
        if (p.id.empty()) throw Error("post with empty id");
        if (trim_copy(p.text).empty())
            throw Error("post \"" + p.id + "\" has empty text");
        if (p.label < 0 || p.label >= kNumClasses)
            throw Error("post \"" + p.id + "\" has out-of-range label");
        if (!index_.emplace(p.id, i).second)
            throw Error("duplicate post id \"" + p.id + "\"");
    }
}

std::ptrdiff_t Corpus::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::array<std::size_t, kNumClasses> Corpus::class_histogram(TaskKind task) const {
    std::array<std::size_t, kNumClasses> h{};
    for (const ForumPost& p : posts_)
        if (p.task == task) ++h[static_cast<std::size_t>(p.label)];
    return h;
}

std::vector<TaskKind> Corpus::tasks_present() const {
    bool cond = false, med = false;
    for (const ForumPost& p : posts_)
        (p.task == TaskKind::MedicalCondition ? cond : med) = true;
    std::vector<TaskKind> out;
    if (cond) out.push_back(TaskKind::MedicalCondition);
    if (med) out.push_back(TaskKind::Medication);
    return out;
}

TaskKind Corpus::single_task() const {
    auto tasks = tasks_present();
    if (tasks.empty()) throw Error("corpus is empty");
    if (tasks.size() > 1)
        throw Error("corpus mixes tasks; filter to a single task first");
    return tasks[0];
}

Corpus Corpus::filter_task(TaskKind task) const {
    std::vector<ForumPost> keep;
    for (const ForumPost& p : posts_)
        if (p.task == task) keep.push_back(p);
    return Corpus(std::move(keep));
}

Corpus Corpus::subset(const std::vector<std::size_t>& indices) const {
    std::vector<ForumPost> keep;
    keep.reserve(indices.size());
    for (std::size_t i : indices) keep.push_back(posts_.at(i));
    return Corpus(std::move(keep));
}

// ---------------------------------------------------------------------------
// tokenizer
// ---------------------------------------------------------------------------

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) || c == '\'' || c >= 0x80;
}

bool has_alnum(const std::string& tok) {
    for (unsigned char c : tok)
        if (std::isalnum(c) || c >= 0x80) return true;
    return false;
}

} // namespace

TokenSequence tokenize(std::string_view text) {
    TokenSequence seq;
    std::string current;
    std::size_t sentence_start = 0;

    auto flush_token = [&] {
        if (!current.empty()) {
            if (has_alnum(current)) seq.tokens.push_back(current);
            current.clear();
        }
    };
    auto flush_sentence = [&] {
        if (seq.tokens.size() > sentence_start) {
            seq.sentences.emplace_back(sentence_start, seq.tokens.size());
            sentence_start = seq.tokens.size();
        }
    };

    for (unsigned char c : text) {
        if (is_word_char(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush_token();
            if (c == '.' || c == '!' || c == '?') flush_sentence();
        }
    }
    flush_token();
    flush_sentence();
    return seq;
}

// ---------------------------------------------------------------------------
// loaders
// ---------------------------------------------------------------------------

namespace {

ForumPost make_post(const std::string& id, const std::string& text,
                    const std::string& task_str, const std::string& label_str,
                    std::size_t line_no) {
    ForumPost p;
    p.id = id;
    p.text = text;
    try {
        p.task = parse_task(task_str);
        p.label = parse_label(p.task, label_str);
    } catch (const Error& e) {
        throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (p.id.empty())
        throw Error("line " + std::to_string(line_no) + ": empty id");
    if (trim_copy(p.text).empty())
        throw Error("line " + std::to_string(line_no) + ": empty text for id \"" + id + "\"");
    return p;
}

Corpus load_jsonl(std::istream& in) {
    std::vector<ForumPost> posts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_copy(line).empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
        }
        for (const char* key : {"id", "text", "task", "label"})
            if (!rec.contains(key) || !rec[key].is_string())
                throw Error("line " + std::to_string(line_no) + ": missing string field \"" +
                            key + "\"");
        posts.push_back(make_post(rec["id"], rec["text"], rec["task"], rec["label"], line_no));
    }
    return Corpus(std::move(posts));
}

// RFC-4180 record reader; quoted fields may contain commas, escaped quotes
// and newlines. Returns false at end of stream. line_no tracks the line the
// record started on.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    while (true) {
        if (c == EOF) {
            fields.push_back(field);
            return true;
        }
        any = true;
        if (quoted) {
            if (c == '"') {
                int next = in.get();
                if (next == '"') {
                    field.push_back('"');
                } else {
                    quoted = false;
                    c = next;
                    continue;
                }
            } else {
                if (c == '\n') ++line_no;
                field.push_back(static_cast<char>(c));
            }
        } else {
            if (c == '"' && field.empty()) {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(field);
                field.clear();
            } else if (c == '\n') {
                ++line_no;
                if (!field.empty() && field.back() == '\r') field.pop_back();
                fields.push_back(field);
                return true;
            } else {
                field.push_back(static_cast<char>(c));
            }
        }
        c = in.get();
    }
    (void)any;
}

Corpus load_csv(std::istream& in) {
    std::vector<ForumPost> posts;
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    if (!read_csv_record(in, fields, line_no))
        throw Error("line 1: empty CSV file");
    if (fields != std::vector<std::string>{"id", "text", "task", "label"})
        throw Error("line 1: CSV header must be id,text,task,label");
    while (true) {
        const std::size_t record_line = line_no;
        if (!read_csv_record(in, fields, line_no)) break;
        if (fields.size() == 1 && trim_copy(fields[0]).empty()) continue;
        if (fields.size() != 4)
            throw Error("line " + std::to_string(record_line) + ": expected 4 fields, got " +
                        std::to_string(fields.size()));
        posts.push_back(make_post(fields[0], fields[1], fields[2], fields[3], record_line));
    }
    return Corpus(std::move(posts));
}

} // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file: " + path.string());
    try {
        return format == CorpusFormat::Jsonl ? load_jsonl(in) : load_csv(in);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// k-fold
// ---------------------------------------------------------------------------

int FoldPlan::fold_of(const std::string& id) const {
    auto it = assignment.find(id);
    if (it == assignment.end()) throw Error("id not in fold plan: \"" + id + "\"");
    return it->second;
}

FoldPlan split_kfold(const Corpus& corpus, int k, std::uint64_t seed, bool stratified) {
    if (k < 2) throw Error("k-fold split needs k >= 2");
    if (corpus.size() < static_cast<std::size_t>(k))
        throw Error("k=" + std::to_string(k) + " exceeds corpus size " +
                    std::to_string(corpus.size()));

    std::mt19937_64 rng(seed);
    FoldPlan plan;
    plan.k = k;

    auto deal = [&](std::vector<std::size_t>& indices, int start_fold) {
        std::shuffle(indices.begin(), indices.end(), rng);
        for (std::size_t j = 0; j < indices.size(); ++j) {
            const int fold = static_cast<int>((start_fold + j) % static_cast<std::size_t>(k));
            plan.assignment.emplace(corpus.post(indices[j]).id, fold);
        }
    };

    if (!stratified) {
        std::vector<std::size_t> all(corpus.size());
        std::iota(all.begin(), all.end(), 0);
        deal(all, 0);
        return plan;
    }

    // Group by (task, label); deal classes in a fixed order, rotating the
    // starting fold so overall fold sizes stay balanced.
    std::array<std::vector<std::size_t>, 2 * kNumClasses> groups;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const ForumPost& p = corpus.post(i);
        const std::size_t g =
            (p.task == TaskKind::Medication ? kNumClasses : 0) + static_cast<std::size_t>(p.label);
        groups[g].push_back(i);
    }
    for (TaskKind task : corpus.tasks_present()) {
        const auto hist = corpus.class_histogram(task);
        for (int c = 0; c < kNumClasses; ++c)
            if (hist[static_cast<std::size_t>(c)] == 0)
                throw Error("stratified split: class \"" +
                            task_labels(task)[static_cast<std::size_t>(c)] + "\" of task " +
                            std::string(task_name(task)) + " has no members");
    }
    int start = 0;
    for (auto& g : groups) {
        if (g.empty()) continue;
        deal(g, start);
        start = static_cast<int>((start + g.size()) % static_cast<std::size_t>(k));
    }
    return plan;
}

std::vector<std::size_t> fold_test_indices(const Corpus& corpus, const FoldPlan& plan, int fold) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (plan.fold_of(corpus.post(i).id) == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> fold_train_indices(const Corpus& corpus, const FoldPlan& plan, int fold) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (plan.fold_of(corpus.post(i).id) != fold) out.push_back(i);
    return out;
}

} // namespace medsev
