#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "medsev/corpus.hpp"
#include "medsev/matrix.hpp"
#include "medsev/sentiment_views.hpp"

// Externally computed dense views (content embeddings, emotion, sarcasm,
// personality vectors) arrive as files; this module loads them, aligns all
// views to the corpus row order, standardizes columns, and supplies a
// deterministic hashed tf-idf content view as a self-contained stand-in.

namespace medsev {

// One named m×d feature matrix with a nonnegative fusion weight.
struct ViewMatrix {
    std::string name;
    std::vector<std::string> ids;
    Matrix data;
    double weight = 1.0;

    std::size_t dim() const { return data.cols(); }
    std::size_t size() const { return ids.size(); }
};

// Per-column mean/std used to standardize training rows and, later, held-out
// rows. Stored stds are floored at 1e-8.
struct ScalingParams {
    std::vector<double> mean;
    std::vector<double> std_dev;

    static ScalingParams identity(std::size_t dim);
    std::size_t dim() const { return mean.size(); }
};

// View vector file: first line "#view <name> dim=<d>", then "id,v1,...,vd"
// rows (floats parsed as IEEE-754 double). Rejects dimension mismatches,
// non-finite entries and duplicate ids.
ViewMatrix load_view_vectors(const std::filesystem::path& path);

// Feature-hashed tf-idf content view: every token is hashed to a bucket in
// [0, dim) with a +/-1 sign hash; bucket += sign * idf(token); nonzero rows
// are L2-normalized. Deterministic for a fixed seed.
ViewMatrix hashed_tfidf_view(const Corpus& corpus, const IdfTable& idf, int dim,
                             std::uint64_t seed);

// Same hashing applied to one tokenized post (the projection path).
std::vector<double> hashed_tfidf_row(const TokenSequence& tokens, const IdfTable& idf, int dim,
                                     std::uint64_t seed);

struct AlignReport {
    // Ids present in a view but absent from the corpus, dropped per view.
    std::vector<std::size_t> dropped_per_view;
};

// Reorder every view to corpus id order. Throws when a corpus id is missing
// from a view (the message names both); extra rows are dropped and counted.
std::vector<ViewMatrix> align_views(const Corpus& corpus, std::vector<ViewMatrix> views,
                                    AlignReport* report = nullptr);

// Standardize columns to mean 0 / std 1 (population std, floored at 1e-8 for
// constant columns). Returns the fitted params for held-out rows.
ScalingParams standardize_view(ViewMatrix& view);

void apply_scaling(const ScalingParams& params, double* row, std::size_t dim);
void invert_scaling(const ScalingParams& params, double* row, std::size_t dim);

} // namespace medsev
