// Acceptance suite: every release-gating property of the pipeline, one
// pass/fail line each. argv[1] (optional) is the path to the built CLI
// binary, used by the determinism criterion.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "medsev/classifier.hpp"
#include "medsev/corpus.hpp"
#include "medsev/error.hpp"
#include "medsev/evaluation.hpp"
#include "medsev/fusion.hpp"
#include "medsev/lexicon.hpp"
#include "medsev/matrix.hpp"
#include "medsev/model_io.hpp"
#include "medsev/pipeline.hpp"
#include "medsev/sentiment_views.hpp"
#include "medsev/view_ingest.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace medsev;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli_path;
int g_failures = 0;

struct Criterion {
    int number;
    std::string description;
    std::vector<std::string> problems;
    Clock::time_point start = Clock::now();

    Criterion(int n, std::string desc) : number(n), description(std::move(desc)) {}

    void require(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
    void require_close(double actual, double expected, double tol, const std::string& what) {
        if (!(std::abs(actual - expected) <= tol)) {
            std::ostringstream os;
            os << what << " (got " << actual << ", want " << expected << " +/- " << tol << ")";
            problems.push_back(os.str());
        }
    }
    void require_runtime(double budget_seconds) {
        const double elapsed =
            std::chrono::duration<double>(Clock::now() - start).count();
        if (elapsed >= budget_seconds) {
            std::ostringstream os;
            os << "runtime " << elapsed << "s exceeds budget " << budget_seconds << "s";
            problems.push_back(os.str());
        }
    }
    void finish() {
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (problems.empty()) {
            std::printf("[PASS] criterion %d: %s (%.2fs)\n", number, description.c_str(),
                        elapsed);
        } else {
            ++g_failures;
            std::printf("[FAIL] criterion %d: %s (%.2fs)\n", number, description.c_str(),
                        elapsed);
            std::size_t shown = 0;
            for (const std::string& p : problems) {
                if (++shown > 5) {
                    std::printf("       ... and %zu more\n", problems.size() - 5);
                    break;
                }
                std::printf("       - %s\n", p.c_str());
            }
        }
        std::fflush(stdout);
    }
};

// ---------------------------------------------------------------------------
// criterion 1: sentiment-view oracle equivalence
// ---------------------------------------------------------------------------

void criterion_1() {
    Criterion c(1, "sentiment views equal the literal equations on 1000 random posts");

    std::mt19937_64 rng(0xC0FFEE);
    const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "feel",
                                            "omega", "sigma", "tau",  "phi",   "chi",
                                            "mu",    "nu"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> len_pick(0, 12);
    std::uniform_int_distribution<int> lex_size(1, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 1000 && c.problems.size() < 20; ++trial) {
        std::map<std::string, oracle::Prior> priors;
        const int words = lex_size(rng);
        for (int w = 0; w < words; ++w) {
            const double pos = unit(rng);
            const double neg = unit(rng) * (1.0 - pos);
            priors[vocab[pick(rng)]] = {pos, neg, 1.0 - pos - neg};
        }
        std::map<std::string, double> idf_values;
        for (const auto& [word, p] : priors)
            if (unit(rng) < 0.7) idf_values[word] = 0.5 + 2.0 * unit(rng);
        const std::size_t n_docs = 1 + static_cast<std::size_t>(9.0 * unit(rng));
        const double fallback = std::log(1.0 + static_cast<double>(n_docs)) + 1.0;

        const int n = len_pick(rng);
        TokenSequence seq;
        std::vector<char> flags;
        for (int i = 0; i < n; ++i) {
            seq.tokens.push_back(vocab[pick(rng)]);
            flags.push_back(unit(rng) < 0.3 ? 1 : 0);
        }
        if (n > 0) seq.sentences.emplace_back(0, seq.tokens.size());

        Lexicon lex;
        for (const auto& [word, p] : priors)
            lex.entries.emplace(word, SentimentPrior{p.pos, p.neg, p.obj});
        IdfTable idf;
        idf.corpus_size = n_docs;
        for (const auto& [w, v] : idf_values) idf.idf.emplace(w, v);

        const auto view = word_level_view(seq, flags, lex, idf);
        const auto expect = oracle::word_level(seq.tokens, flags, priors, idf_values, fallback);
        c.require(std::abs(view.ws_pos - expect.pos) <= 1e-10, "ws_pos mismatch");
        c.require(std::abs(view.ws_neg - expect.neg) <= 1e-10, "ws_neg mismatch");
        c.require(std::abs(view.ws_obj - expect.obj) <= 1e-10, "ws_obj mismatch");

        const auto ts = target_view(seq, lex, {"feel", "mu"}, 5, 10);
        const auto [tp, tn] = oracle::target_scores(seq.tokens, priors, {"feel", "mu"}, 5, 10);
        c.require(std::abs(ts.ts_pos - tp) <= 1e-10, "ts_pos mismatch");
        c.require(std::abs(ts.ts_neg - tn) <= 1e-10, "ts_neg mismatch");

        for (double v : {view.ws_pos, view.ws_neg, view.ws_obj, ts.ts_pos, ts.ts_neg})
            c.require(std::isfinite(v) && v >= 0.0, "non-finite or negative view output");
    }
    c.require_runtime(5.0);
    c.finish();
}

// ---------------------------------------------------------------------------
// criterion 2: wGCCA correctness on random multi-view instances
// ---------------------------------------------------------------------------

void criterion_2() {
    Criterion c(2, "wGCCA orthonormality, residuals, oracle eigenvalues, optimality (50 runs)");

    std::mt19937_64 rng(0xACCA);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> m_pick(6, 20);
    std::uniform_int_distribution<int> views_pick(2, 4);
    std::uniform_int_distribution<int> d_pick(2, 6);
    std::uniform_real_distribution<double> w_pick(0.25, 1.5);

    for (int trial = 0; trial < 50 && c.problems.size() < 20; ++trial) {
        const std::size_t m = static_cast<std::size_t>(m_pick(rng));
        const int n_views = views_pick(rng);
        std::vector<ViewMatrix> views;
        std::vector<double> weights;
        std::vector<ScalingParams> scalings;
        std::size_t min_d = 64;
        for (int v = 0; v < n_views; ++v) {
            ViewMatrix view;
            view.name = "v" + std::to_string(v);
            const std::size_t d = static_cast<std::size_t>(d_pick(rng));
            min_d = std::min(min_d, d);
            view.data = Matrix(m, d);
            for (std::size_t i = 0; i < m; ++i) {
                view.ids.push_back("p" + std::to_string(i));
                for (std::size_t j = 0; j < d; ++j) view.data(i, j) = gauss(rng);
            }
            views.push_back(std::move(view));
            weights.push_back(w_pick(rng));
            scalings.push_back(ScalingParams::identity(d));
        }
        const int k = static_cast<int>(std::min<std::size_t>(min_d, m - 1));
        const double ridge = 1e-6;

        const WgccaFit fit = fit_wgcca(views, weights, k, ridge, scalings);

        // G'G = I within 1e-8
        const Matrix gtg = matmul_at_b(fit.fused.g, fit.fused.g);
        for (std::size_t i = 0; i < gtg.rows(); ++i)
            for (std::size_t j = 0; j < gtg.cols(); ++j)
                c.require(std::abs(gtg(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-8,
                          "G'G deviates from identity");

        // literal P for residuals and the independent eigensolver
        Matrix p(m, m);
        for (std::size_t v = 0; v < views.size(); ++v) {
            Matrix g = gram(views[v].data);
            for (std::size_t j = 0; j < g.rows(); ++j) g(j, j) += ridge;
            const Matrix inv_xt = oracle::lin_solve(g, views[v].data.transposed());
            const Matrix q = matmul(views[v].data, inv_xt);
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t col = 0; col < m; ++col) p(r, col) += weights[v] * q(r, col);
        }
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t col = r + 1; col < m; ++col) {
                const double v = 0.5 * (p(r, col) + p(col, r));
                p(r, col) = v;
                p(col, r) = v;
            }

        const double lambda1 = std::max(1.0, fit.model.eigenvalues[0]);
        for (int j = 0; j < k; ++j) {
            double resid = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double pv = 0.0;
                for (std::size_t l = 0; l < m; ++l)
                    pv += p(i, l) * fit.fused.g(l, static_cast<std::size_t>(j));
                const double r =
                    pv - fit.model.eigenvalues[static_cast<std::size_t>(j)] *
                             fit.fused.g(i, static_cast<std::size_t>(j));
                resid += r * r;
            }
            c.require(std::sqrt(resid) <= 1e-6 * lambda1, "eigen residual too large");
        }

        const oracle::EigenPairs ref = oracle::dense_sym_eig(p);
        for (int j = 0; j < k; ++j)
            c.require(std::abs(fit.model.eigenvalues[static_cast<std::size_t>(j)] -
                               ref.values[static_cast<std::size_t>(j)]) <= 1e-8,
                      "eigenvalue disagrees with the independent dense solver");

        // fitted objective beats 100 random orthonormal candidates
        std::vector<Matrix> u_fit;
        for (const auto& mv : fit.model.views) u_fit.push_back(mv.u);
        const double fitted = wgcca_objective(fit.fused.g, views, u_fit, weights);
        for (int candidate = 0; candidate < 100; ++candidate) {
            const Matrix g_rand =
                oracle::random_orthonormal(m, static_cast<std::size_t>(k), rng);
            std::vector<Matrix> u_cand;
            for (const auto& view : views) {
                Matrix gm = gram(view.data);
                for (std::size_t j = 0; j < gm.rows(); ++j) gm(j, j) += ridge;
                u_cand.push_back(oracle::lin_solve(gm, matmul_at_b(view.data, g_rand)));
            }
            const double obj = wgcca_objective(g_rand, views, u_cand, weights);
            c.require(fitted <= obj + 1e-9, "random candidate beat the fitted objective");
        }
    }
    c.require_runtime(10.0);
    c.finish();
}

// ---------------------------------------------------------------------------
// criterion 3: softmax gradient check
// ---------------------------------------------------------------------------

void criterion_3() {
    Criterion c(3, "softmax gradients match central differences (rel err <= 1e-4, 20 runs)");

    std::mt19937_64 rng(0x6EAD);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double eps = 1e-5;
    double worst = 0.0;

    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(trial % 8);
        const std::size_t rows = 3 + static_cast<std::size_t>(trial % 5);
        SoftmaxModel model;
        model.w = Matrix(k, 4);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < 4; ++j) model.w(i, j) = gauss(rng);
        model.bias = {gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
        model.class_names = {"a", "b", "c", "d"};

        Matrix inputs(rows, k);
        std::vector<int> labels(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < k; ++j) inputs(i, j) = gauss(rng);
            labels[i] = static_cast<int>(i % 4);
        }
        const double l2 = trial % 2 == 0 ? 0.0 : 0.02;
        const LossGrad lg = loss_and_grad(model, inputs, labels, l2);

        auto loss_of = [&](SoftmaxModel& mm) { return loss_and_grad(mm, inputs, labels, l2).loss; };
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                SoftmaxModel plus = model, minus = model;
                plus.w(i, j) += eps;
                minus.w(i, j) -= eps;
                const double numeric = (loss_of(plus) - loss_of(minus)) / (2.0 * eps);
                const double rel = std::abs(lg.grad_w(i, j) - numeric) /
                                   std::max({std::abs(lg.grad_w(i, j)), std::abs(numeric), 1e-8});
                worst = std::max(worst, rel);
            }
        for (std::size_t j = 0; j < 4; ++j) {
            SoftmaxModel plus = model, minus = model;
            plus.bias[j] += eps;
            minus.bias[j] -= eps;
            const double numeric = (loss_of(plus) - loss_of(minus)) / (2.0 * eps);
            const double rel = std::abs(lg.grad_b[j] - numeric) /
                               std::max({std::abs(lg.grad_b[j]), std::abs(numeric), 1e-8});
            worst = std::max(worst, rel);
        }
    }
    std::ostringstream os;
    os << "max relative gradient error " << worst;
    c.require(worst <= 1e-4, os.str());
    c.require_runtime(2.0);
    c.finish();
}

// ---------------------------------------------------------------------------
// criterion 4: end-to-end synthetic benchmark through the file interfaces
// ---------------------------------------------------------------------------

PipelineConfig benchmark_config() {
    PipelineConfig config;
    config.hashed_view = false; // the benchmark fuses exactly two views
    config.latent_dim = 9;      // wide enough to span both view ranges
    config.train.epochs = 120;
    config.train.learning_rate = 0.5;
    config.folds = 10;
    return config;
}

void criterion_4() {
    Criterion c(4, "10-fold CV on the 400-post synthetic benchmark: mean macro-F1 >= 0.95");

    const auto dir = synth::make_temp_dir("medsev-acc4");
    try {
        synth::BenchSpec spec;
        spec.posts_per_class = 100;
        spec.seed = 20200825;
        const PipelineInputs generated = synth::make_benchmark(spec);

        // round-trip everything through the real file loaders
        synth::write_file(dir / "corpus.jsonl", synth::corpus_jsonl(generated.corpus));
        synth::write_file(dir / "lexicon.tsv", synth::benchmark_lexicon_tsv());
        synth::write_file(dir / "planted.csv",
                          synth::view_file_text(generated.external_views[0]));

        PipelineInputs inputs;
        inputs.corpus = load_corpus(dir / "corpus.jsonl", CorpusFormat::Jsonl);
        inputs.lexicon = load_simple_lexicon(dir / "lexicon.tsv");
        inputs.external_views.push_back(load_view_vectors(dir / "planted.csv"));

        const PipelineConfig config = benchmark_config();
        const PipelineData data = prepare(inputs);
        const FoldPlan plan = split_kfold(inputs.corpus, 10, config.fold_seed, true);
        const CvResult cv = cross_validate(data, config, plan);

        c.require(cv.folds.size() == 10, "expected 10 folds");
        std::ostringstream os;
        os << "mean macro-F1 " << cv.mean_macro_f1;
        c.require(cv.mean_macro_f1 >= 0.95, os.str());
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    std::filesystem::remove_all(dir);
    c.require_runtime(60.0);
    c.finish();
}

// ---------------------------------------------------------------------------
// criterion 5: ablation ordering across 20 seeds
// ---------------------------------------------------------------------------

void criterion_5() {
    Criterion c(5, "removing the planted view hurts more than the noise view (>=19/20 seeds)");

    int ordered = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        synth::BenchSpec spec;
        spec.posts_per_class = 100;
        spec.add_noise_view = true;
        spec.seed = 9000 + static_cast<std::uint64_t>(s);
        const PipelineInputs inputs = synth::make_benchmark(spec);
        const PipelineData data = prepare(inputs);
        PipelineConfig config = benchmark_config();
        config.train.epochs = 60;
        config.fold_seed = 100 + static_cast<std::uint64_t>(s);
        const FoldPlan plan = split_kfold(inputs.corpus, 10, config.fold_seed, true);

        const AblationTable table = ablate(data, config, plan);
        double planted_drop = 0.0, noise_drop = 0.0;
        for (const AblationRow& row : table.rows) {
            if (row.removed_view == "planted") planted_drop = row.delta_macro_f1;
            if (row.removed_view == "noise") noise_drop = row.delta_macro_f1;
        }
        if (planted_drop > noise_drop) ++ordered;
    }
    std::ostringstream os;
    os << "ordering held on " << ordered << "/" << seeds << " seeds";
    c.require(ordered >= 19, os.str());
    c.finish();
}

// ---------------------------------------------------------------------------
// criterion 6: no-leakage audit
// ---------------------------------------------------------------------------

void criterion_6() {
    Criterion c(6, "instrumented CV fits idf/scaling/wGCCA/classifier off held-out ids");

    synth::BenchSpec spec;
    spec.posts_per_class = 100;
    spec.seed = 31337;
    const PipelineInputs inputs = synth::make_benchmark(spec);
    const PipelineData data = prepare(inputs);
    const PipelineConfig config = benchmark_config();
    const FoldPlan plan = split_kfold(inputs.corpus, 10, config.fold_seed, true);

    const CvResult cv = cross_validate(data, config, plan, /*collect_audit=*/true);
    c.require(cv.folds.size() == 10, "expected 10 folds");
    for (const CvFold& fold : cv.folds) {
        std::set<std::string> held_out;
        for (const ForumPost& p : inputs.corpus.posts())
            if (plan.fold_of(p.id) == fold.fold) held_out.insert(p.id);
        const std::size_t expected_train = inputs.corpus.size() - held_out.size();
        const struct {
            const char* name;
            const std::vector<std::string>* ids;
        } audits[] = {{"idf", &fold.audit.idf_ids},
                      {"scaling", &fold.audit.scaling_ids},
                      {"wgcca", &fold.audit.wgcca_ids},
                      {"classifier", &fold.audit.classifier_ids}};
        for (const auto& a : audits) {
            c.require(a.ids->size() == expected_train,
                      std::string(a.name) + " fit id count wrong in fold " +
                          std::to_string(fold.fold));
            for (const std::string& id : *a.ids)
                if (held_out.count(id))
                    c.require(false, std::string(a.name) + " saw held-out id " + id +
                                         " in fold " + std::to_string(fold.fold));
        }
    }
    c.finish();
}

// ---------------------------------------------------------------------------
// criterion 7: CLI determinism (featurize / train / eval)
// ---------------------------------------------------------------------------

int run_cli(const std::string& args, const std::filesystem::path& dir) {
    const std::string cmd = g_cli_path + " " + args + " > " + (dir / "cli_out.txt").string() +
                            " 2> " + (dir / "cli_err.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_7() {
    Criterion c(7, "featurize/train/eval reruns are bitwise identical");

    const auto dir = synth::make_temp_dir("medsev-acc7");
    try {
        synth::BenchSpec spec;
        spec.posts_per_class = 12;
        spec.seed = 555;
        const PipelineInputs generated = synth::make_benchmark(spec);
        synth::write_file(dir / "corpus.jsonl", synth::corpus_jsonl(generated.corpus));
        synth::write_file(dir / "lexicon.tsv", synth::benchmark_lexicon_tsv());
        synth::write_file(dir / "planted.csv",
                          synth::view_file_text(generated.external_views[0]));

        const std::string base = "--corpus " + (dir / "corpus.jsonl").string() + " --lexicon " +
                                 (dir / "lexicon.tsv").string();
        const std::string view = " --view " + (dir / "planted.csv").string();

        const struct {
            const char* name;
            std::string args;
            std::filesystem::path out_a, out_b;
        } runs[] = {
            {"featurize", "featurize " + base, dir / "f_a.csv", dir / "f_b.csv"},
            {"train", "train " + base + view + " --epochs 40", dir / "m_a.json",
             dir / "m_b.json"},
            {"eval", "eval " + base + view + " --folds 4 --epochs 40", dir / "e_a.json",
             dir / "e_b.json"},
        };
        for (const auto& run : runs) {
            const int code_a = run_cli(run.args + " --out " + run.out_a.string(), dir);
            const int code_b = run_cli(run.args + " --out " + run.out_b.string(), dir);
            c.require(code_a == 0 && code_b == 0, std::string(run.name) + " exited nonzero");
            if (code_a == 0 && code_b == 0)
                c.require(synth::read_file(run.out_a) == synth::read_file(run.out_b),
                          std::string(run.name) + " outputs differ between reruns");
        }
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    std::filesystem::remove_all(dir);
    c.finish();
}

// ---------------------------------------------------------------------------
// criterion 8: degenerate inputs return contracted values or errors
// ---------------------------------------------------------------------------

void criterion_8() {
    Criterion c(8, "degenerate inputs give contracted values or errors, never NaN/crash");

    try {
        // empty text: tokenizer contract + loader rejection
        c.require(tokenize("").tokens.empty(), "tokenize(\"\") not empty");
        const auto dir = synth::make_temp_dir("medsev-acc8");
        synth::write_file(dir / "empty.jsonl",
                          "{\"id\":\"e\",\"text\":\"  \",\"task\":\"medication\","
                          "\"label\":\"other\"}\n");
        bool rejected = false;
        try {
            load_corpus(dir / "empty.jsonl", CorpusFormat::Jsonl);
        } catch (const Error&) {
            rejected = true;
        }
        c.require(rejected, "empty-text record was not rejected");
        std::filesystem::remove_all(dir);

        // posts with no lexicon words / no stative verbs
        Lexicon lex;
        lex.entries.emplace("good", SentimentPrior{0.7, 0.1, 0.2});
        for (const auto& cue : default_negation_cues()) lex.negation_cues.insert(cue);
        IdfTable idf;
        idf.corpus_size = 3;
        const auto seq = tokenize("nothing matches in here");
        const auto flags = mark_negated(seq, lex, 3);
        const auto ws = word_level_view(seq, flags, lex, idf);
        c.require(ws.ws_pos == 0.0 && ws.ws_neg == 0.0 && ws.ws_obj == 0.0,
                  "no-lexicon-word post must give a zero word view");
        const auto ts = target_view(seq, lex, default_stative_verbs(), 5, 10);
        c.require(ts.ts_pos == 0.0 && ts.ts_neg == 0.0,
                  "no-stative-verb post must give a zero target view");

        // constant feature columns survive standardization and fusion
        synth::BenchSpec spec;
        spec.posts_per_class = 10;
        spec.seed = 808;
        PipelineInputs inputs = synth::make_benchmark(spec);
        ViewMatrix constant;
        constant.name = "constant";
        constant.data = Matrix(inputs.corpus.size(), 2);
        for (std::size_t i = 0; i < inputs.corpus.size(); ++i) {
            constant.ids.push_back(inputs.corpus.post(i).id);
            constant.data(i, 0) = 42.0;
            constant.data(i, 1) = static_cast<double>(i % 2);
        }
        inputs.external_views.push_back(std::move(constant));
        const PipelineData data = prepare(inputs);
        PipelineConfig config = benchmark_config();
        config.train.epochs = 30;
        std::vector<std::size_t> all(inputs.corpus.size());
        std::iota(all.begin(), all.end(), 0);
        FusedMatrix fused;
        const TrainedModel model = fit_model(data, config, all, &fused);
        for (double v : fused.g.values())
            c.require(std::isfinite(v), "fused representation has a non-finite entry");
        for (std::size_t i = 0; i < inputs.corpus.size(); ++i) {
            const Prediction pred = classify_index(data, model, i);
            for (double p : pred.proba)
                c.require(std::isfinite(p) && p >= 0.0, "non-finite class probability");
        }

        // single-class fold: the contracted error carries the fold index
        FoldPlan plan;
        plan.k = 3;
        int spread = 0;
        for (const ForumPost& p : inputs.corpus.posts()) {
            if (p.label == 2)
                plan.assignment[p.id] = 0;
            else
                plan.assignment[p.id] = spread++ % 3;
        }
        bool fold_error = false;
        try {
            cross_validate(data, config, plan);
        } catch (const Error& e) {
            fold_error = std::string(e.what()).find("fold 0") != std::string::npos;
        }
        c.require(fold_error, "single-class fold must fail with the fold index");

        // Gram singular at ridge 0 gives the contracted guidance
        ViewMatrix collinear;
        collinear.name = "collinear";
        collinear.data = Matrix(6, 2);
        std::vector<ScalingParams> scalings = {ScalingParams::identity(2)};
        for (std::size_t i = 0; i < 6; ++i) {
            collinear.ids.push_back("p" + std::to_string(i));
            collinear.data(i, 0) = static_cast<double>(i) + 1.0;
            collinear.data(i, 1) = 2.0 * (static_cast<double>(i) + 1.0);
        }
        bool guided = false;
        try {
            fit_wgcca({collinear}, {1.0}, 1, 0.0, scalings);
        } catch (const Error& e) {
            guided = std::string(e.what()).find("ridge") != std::string::npos;
        }
        c.require(guided, "singular Gram at ridge 0 must point at the ridge flag");
    } catch (const std::exception& e) {
        c.require(false, std::string("unexpected exception: ") + e.what());
    }
    c.finish();
}

} // namespace

int main(int argc, char** argv) {
    g_cli_path = argc > 1 ? argv[1] : "./medsev";

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();

    if (g_failures == 0) {
        std::printf("acceptance: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
