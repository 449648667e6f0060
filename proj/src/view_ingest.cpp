#include "medsev/view_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "medsev/error.hpp"
#include "medsev/kernels.hpp"

namespace medsev {

ScalingParams ScalingParams::identity(std::size_t dim) {
    ScalingParams p;
    p.mean.assign(dim, 0.0);
    p.std_dev.assign(dim, 1.0);
    return p;
}

namespace {

bool parse_double(std::string_view s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

bool parse_int(std::string_view s, int& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

std::vector<std::string> split_comma(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// 64-bit FNV-1a mixed with the seed; stable across platforms.
std::uint64_t token_hash(std::string_view token, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ull ^ seed;
    for (unsigned char c : token) {
        h ^= c;
        h *= 1099511628211ull;
    }
    // splitmix64 finalizer
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return h;
}

} // namespace

ViewMatrix load_view_vectors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open view file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": empty view file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    // header: "#view <name> dim=<d>"
    std::istringstream header(line);
    std::string tag, name, dim_field;
    header >> tag >> name >> dim_field;
    int dim = 0;
    if (tag != "#view" || name.empty() || dim_field.rfind("dim=", 0) != 0 ||
        !parse_int(dim_field.substr(4), dim) || dim < 1)
        throw Error(path.string() + ": first line must be \"#view <name> dim=<d>\"");

    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    std::unordered_set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_comma(line);
        const std::string& id = fields[0];
        if (id.empty())
            throw Error(path.string() + ": line " + std::to_string(line_no) + ": empty id");
        if (fields.size() != static_cast<std::size_t>(dim) + 1)
            throw Error(path.string() + ": row \"" + id + "\" has " +
                        std::to_string(fields.size() - 1) + " values, expected " +
                        std::to_string(dim));
        if (!seen.insert(id).second)
            throw Error(path.string() + ": duplicate id \"" + id + "\"");
        std::vector<double> row(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            double v = 0.0;
            if (!parse_double(fields[static_cast<std::size_t>(j) + 1], v) || !std::isfinite(v))
                throw Error(path.string() + ": row \"" + id + "\": non-finite or unparsable value \"" +
                            fields[static_cast<std::size_t>(j) + 1] + "\"");
            row[static_cast<std::size_t>(j)] = v;
        }
        ids.push_back(id);
        rows.push_back(std::move(row));
    }

    ViewMatrix view;
    view.name = name;
    view.ids = std::move(ids);
    view.data = Matrix(rows.size(), static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), view.data.row(i));
    return view;
}

std::vector<double> hashed_tfidf_row(const TokenSequence& tokens, const IdfTable& idf, int dim,
                                     std::uint64_t seed) {
    if (dim < 2) throw Error("hashed view dimension must be >= 2");
    std::vector<double> row(static_cast<std::size_t>(dim), 0.0);
    for (const std::string& tok : tokens.tokens) {
        const std::uint64_t h = token_hash(tok, seed);
        const std::size_t bucket = static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim));
        const double sign = (h >> 63) ? -1.0 : 1.0;
        row[bucket] += sign * idf.value(tok);
    }
    const double norm_sq = kernels::sumsq(row.data(), row.size());
    if (norm_sq > 0.0) kernels::scale(row.data(), 1.0 / std::sqrt(norm_sq), row.size());
    return row;
}

ViewMatrix hashed_tfidf_view(const Corpus& corpus, const IdfTable& idf, int dim,
                             std::uint64_t seed) {
    if (dim < 2) throw Error("hashed view dimension must be >= 2");
    ViewMatrix view;
    view.name = "content_hash";
    view.data = Matrix(corpus.size(), static_cast<std::size_t>(dim));
    view.ids.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const ForumPost& p = corpus.post(i);
        view.ids.push_back(p.id);
        const auto row = hashed_tfidf_row(tokenize(p.text), idf, dim, seed);
        std::copy(row.begin(), row.end(), view.data.row(i));
    }
    return view;
}

std::vector<ViewMatrix> align_views(const Corpus& corpus, std::vector<ViewMatrix> views,
                                    AlignReport* report) {
    if (report) report->dropped_per_view.assign(views.size(), 0);
    for (std::size_t v = 0; v < views.size(); ++v) {
        ViewMatrix& view = views[v];
        std::unordered_map<std::string, std::size_t> row_of;
        row_of.reserve(view.ids.size());
        for (std::size_t i = 0; i < view.ids.size(); ++i) row_of.emplace(view.ids[i], i);

        Matrix aligned(corpus.size(), view.dim());
        std::vector<std::string> ids;
        ids.reserve(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const std::string& id = corpus.post(i).id;
            auto it = row_of.find(id);
            if (it == row_of.end())
                throw Error("view \"" + view.name + "\" is missing post id \"" + id + "\"");
            std::copy(view.data.row(it->second), view.data.row(it->second) + view.dim(),
                      aligned.row(i));
            ids.push_back(id);
        }
        if (report)
            report->dropped_per_view[v] = view.ids.size() - corpus.size();
        view.data = std::move(aligned);
        view.ids = std::move(ids);
    }
    return views;
}

ScalingParams standardize_view(ViewMatrix& view) {
    const std::size_t m = view.data.rows();
    const std::size_t d = view.data.cols();
    if (m < 2) throw Error("standardize_view needs at least 2 rows");

    ScalingParams params;
    params.mean.assign(d, 0.0);
    params.std_dev.assign(d, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = view.data.row(i);
        for (std::size_t j = 0; j < d; ++j) params.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) params.mean[j] /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = view.data.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double c = row[j] - params.mean[j];
            params.std_dev[j] += c * c;
        }
    }
    for (std::size_t j = 0; j < d; ++j)
        params.std_dev[j] = std::max(std::sqrt(params.std_dev[j] / static_cast<double>(m)), 1e-8);

    for (std::size_t i = 0; i < m; ++i) apply_scaling(params, view.data.row(i), d);
    return params;
}

void apply_scaling(const ScalingParams& params, double* row, std::size_t dim) {
    if (params.dim() != dim) throw Error("scaling params dimension mismatch");
    for (std::size_t j = 0; j < dim; ++j) row[j] = (row[j] - params.mean[j]) / params.std_dev[j];
}

void invert_scaling(const ScalingParams& params, double* row, std::size_t dim) {
    if (params.dim() != dim) throw Error("scaling params dimension mismatch");
    for (std::size_t j = 0; j < dim; ++j) row[j] = row[j] * params.std_dev[j] + params.mean[j];
}

} // namespace medsev
