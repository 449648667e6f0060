#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Labeled forum-post dataset: loading, validation, tokenization and k-fold
// partitioning.

namespace medsev {

enum class TaskKind { MedicalCondition, Medication };

inline constexpr int kNumClasses = 4;

// Class labels in canonical order; the index of a label in this array is its
// class id everywhere else (confusion matrices, softmax outputs, tie breaks).
const std::array<std::string, kNumClasses>& task_labels(TaskKind task);

// Wire name of the task ("medical_condition" / "medication").
std::string_view task_name(TaskKind task);

// Parse a wire-format task name; throws medsev::Error on unknown names.
TaskKind parse_task(std::string_view name);

// Parse a wire-format (snake_case) label for the task; returns the class id.
// Throws medsev::Error when the label is not valid for the task.
int parse_label(TaskKind task, std::string_view label);

struct ForumPost {
    std::string id;
    std::string text;
    TaskKind task = TaskKind::MedicalCondition;
    int label = 0; // index into task_labels(task)
};

class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<ForumPost> posts);

    std::size_t size() const { return posts_.size(); }
    const std::vector<ForumPost>& posts() const { return posts_; }
    const ForumPost& post(std::size_t i) const { return posts_[i]; }

    // Index of the post with this id, or -1.
    std::ptrdiff_t index_of(std::string_view id) const;

    // Per-class counts for one task (posts of the other task ignored).
    std::array<std::size_t, kNumClasses> class_histogram(TaskKind task) const;

    std::vector<TaskKind> tasks_present() const;

    // The single task of a homogeneous corpus; throws if mixed or empty.
    TaskKind single_task() const;

    // Posts restricted to one task, corpus order preserved.
    Corpus filter_task(TaskKind task) const;

    // Subset by post indices, order preserved.
    Corpus subset(const std::vector<std::size_t>& indices) const;

private:
    std::vector<ForumPost> posts_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct TokenSequence {
    std::vector<std::string> tokens;
    // Half-open token-index ranges, one per sentence, strictly increasing.
    std::vector<std::pair<std::size_t, std::size_t>> sentences;

    std::size_t size() const { return tokens.size(); }
};

// Lowercase, split on whitespace and punctuation (apostrophes stay inside
// words, so "i'm" and "don't" survive), drop tokens with no alphanumeric
// character, and close a sentence at '.', '!' or '?'. Bytes >= 0x80 are kept
// verbatim as word characters.
TokenSequence tokenize(std::string_view text);

enum class CorpusFormat { Jsonl, Csv };

// Load and validate a corpus. JSONL: one object per line with keys
// "id","text","task","label". CSV: header id,text,task,label, RFC-4180
// quoting. Errors carry the offending line number.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

struct FoldPlan {
    int k = 0;
    std::unordered_map<std::string, int> assignment; // post id -> fold in [0, k)

    int fold_of(const std::string& id) const;
};

// Deterministic k-fold split. Stratified mode deals each class round-robin
// after a seeded shuffle, so per-class fold counts differ by at most one.
// In a mixed-task corpus the stratification class is the (task, label) pair.
FoldPlan split_kfold(const Corpus& corpus, int k, std::uint64_t seed, bool stratified);

// Indices of posts in fold `fold` / outside it, in corpus order.
std::vector<std::size_t> fold_test_indices(const Corpus& corpus, const FoldPlan& plan, int fold);
std::vector<std::size_t> fold_train_indices(const Corpus& corpus, const FoldPlan& plan, int fold);

} // namespace medsev
