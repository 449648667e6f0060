#include <doctest.h>

#include <cmath>
#include <random>

#include "medsev/classifier.hpp"
#include "medsev/error.hpp"

using namespace medsev;

namespace {

const std::vector<std::string> kClasses = {"recover", "exist", "deteriorate", "other"};

SoftmaxModel random_model(std::size_t k, std::size_t num_classes, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SoftmaxModel m;
    m.w = Matrix(k, num_classes);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < num_classes; ++j) m.w(i, j) = gauss(rng);
    m.bias.resize(num_classes);
    for (double& b : m.bias) b = gauss(rng);
    m.class_names.assign(kClasses.begin(), kClasses.begin() + static_cast<long>(num_classes));
    return m;
}

} // namespace

TEST_CASE("zero parameters give the uniform distribution") {
    SoftmaxModel m;
    m.w = Matrix(3, 4);
    m.bias.assign(4, 0.0);
    m.class_names = kClasses;
    const auto p = predict_proba(m, {0.5, -1.0, 2.0});
    for (double v : p) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("huge logits do not overflow") {
    SoftmaxModel m;
    m.w = Matrix(1, 4);
    m.w(0, 0) = 1000.0;
    m.bias.assign(4, 0.0);
    m.class_names = kClasses;
    const auto p = predict_proba(m, {1.0});
    CHECK(std::isfinite(p[0]));
    CHECK(p[0] == doctest::Approx(1.0));
    double total = 0.0;
    for (double v : p) {
        CHECK(v >= 0.0);
        total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("probabilities match a long-double evaluation of the softmax") {
    std::mt19937_64 rng(90);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(trial % 8);
        const SoftmaxModel m = random_model(k, 4, rng);
        std::vector<double> g(k);
        std::normal_distribution<double> gauss(0.0, 2.0);
        for (double& x : g) x = gauss(rng);

        const auto p = predict_proba(m, g);

        // extended-precision oracle, no max subtraction
        std::vector<long double> logits(4, 0.0L);
        for (std::size_t c = 0; c < 4; ++c) {
            long double acc = m.bias[c];
            for (std::size_t i = 0; i < k; ++i)
                acc += static_cast<long double>(g[i]) * static_cast<long double>(m.w(i, c));
            logits[c] = acc;
        }
        long double denom = 0.0L;
        for (long double l : logits) denom += expl(l);
        double total = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            const double expected = static_cast<double>(expl(logits[c]) / denom);
            CHECK(std::abs(p[c] - expected) <= 1e-12);
            total += p[c];
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
    }
}

TEST_CASE("uniform predictions have loss ln 4") {
    SoftmaxModel m;
    m.w = Matrix(2, 4);
    m.bias.assign(4, 0.0);
    m.class_names = kClasses;
    Matrix inputs(3, 2);
    inputs(0, 0) = 1.0;
    inputs(1, 1) = -1.0;
    inputs(2, 0) = 0.5;
    const auto lg = loss_and_grad(m, inputs, {0, 1, 2}, 0.0);
    CHECK(lg.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("confident correct predictions drive the loss to zero") {
    SoftmaxModel m;
    m.w = Matrix(1, 4);
    m.w(0, 0) = 50.0; // class 0 wins by a mile for positive input
    m.bias.assign(4, 0.0);
    m.class_names = kClasses;
    Matrix inputs(2, 1);
    inputs(0, 0) = 1.0;
    inputs(1, 0) = 2.0;
    const auto lg = loss_and_grad(m, inputs, {0, 0}, 0.0);
    CHECK(lg.loss < 1e-12);
}

TEST_CASE("analytic gradients match central finite differences") {
    std::mt19937_64 rng(91);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double eps = 1e-5;
    double worst = 0.0;

    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(trial % 8);
        const std::size_t m_rows = 3 + static_cast<std::size_t>(trial % 4);
        SoftmaxModel model = random_model(k, 4, rng);
        Matrix inputs(m_rows, k);
        std::vector<int> labels(m_rows);
        for (std::size_t i = 0; i < m_rows; ++i) {
            for (std::size_t j = 0; j < k; ++j) inputs(i, j) = gauss(rng);
            labels[i] = static_cast<int>(i % 4);
        }
        const double l2 = (trial % 2 == 0) ? 0.0 : 0.01;
        const auto lg = loss_and_grad(model, inputs, labels, l2);

        auto loss_at = [&](SoftmaxModel& mm) {
            return loss_and_grad(mm, inputs, labels, l2).loss;
        };
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c < 4; ++c) {
                SoftmaxModel plus = model, minus = model;
                plus.w(i, c) += eps;
                minus.w(i, c) -= eps;
                const double numeric = (loss_at(plus) - loss_at(minus)) / (2.0 * eps);
                const double analytic = lg.grad_w(i, c);
                const double rel = std::abs(analytic - numeric) /
                                   std::max({std::abs(analytic), std::abs(numeric), 1e-8});
                worst = std::max(worst, rel);
            }
        for (std::size_t c = 0; c < 4; ++c) {
            SoftmaxModel plus = model, minus = model;
            plus.bias[c] += eps;
            minus.bias[c] -= eps;
            const double numeric = (loss_at(plus) - loss_at(minus)) / (2.0 * eps);
            const double rel = std::abs(lg.grad_b[c] - numeric) /
                               std::max({std::abs(lg.grad_b[c]), std::abs(numeric), 1e-8});
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("training separable clusters reaches perfect accuracy") {
    // two Gaussian clusters with a wide margin, mapped onto 4 classes pairwise
    std::mt19937_64 rng(92);
    std::normal_distribution<double> noise(0.0, 0.15);
    const std::size_t per_class = 50;
    Matrix inputs(4 * per_class, 2);
    std::vector<int> labels(4 * per_class);
    const double centers[4][2] = {{2, 0}, {-2, 0}, {0, 2}, {0, -2}};
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::size_t row = c * per_class + i;
            inputs(row, 0) = centers[c][0] + noise(rng);
            inputs(row, 1) = centers[c][1] + noise(rng);
            labels[row] = static_cast<int>(c);
        }

    TrainConfig config;
    config.learning_rate = 0.5;
    config.epochs = 200;
    config.l2_penalty = 0.0;
    const SoftmaxModel model = train_softmax(inputs, labels, kClasses, config);

    std::size_t correct = 0;
    for (std::size_t i = 0; i < inputs.rows(); ++i) {
        const std::vector<double> g(inputs.row(i), inputs.row(i) + 2);
        if (predict(model, g) == labels[i]) ++correct;
    }
    CHECK(correct == inputs.rows());
}

TEST_CASE("training is bitwise deterministic for a fixed seed") {
    std::mt19937_64 rng(93);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix inputs(40, 3);
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < 40; ++i) {
        for (std::size_t j = 0; j < 3; ++j) inputs(i, j) = gauss(rng);
        labels[i] = static_cast<int>(i % 4);
    }
    TrainConfig config;
    config.batch_size = 8;
    config.epochs = 20;
    config.seed = 1234;
    const SoftmaxModel a = train_softmax(inputs, labels, kClasses, config);
    const SoftmaxModel b = train_softmax(inputs, labels, kClasses, config);
    CHECK(a.w.values() == b.w.values());
    CHECK(a.bias == b.bias);
}

TEST_CASE("full-batch loss is monotone nonincreasing at a small learning rate") {
    std::mt19937_64 rng(94);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix inputs(30, 3);
    std::vector<int> labels(30);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 3; ++j) inputs(i, j) = gauss(rng);
        labels[i] = static_cast<int>(i % 4);
    }

    SoftmaxModel model;
    model.w = Matrix(3, 4);
    model.bias.assign(4, 0.0);
    model.class_names = kClasses;
    double prev = loss_and_grad(model, inputs, labels, 0.0).loss;
    for (int step = 0; step < 50; ++step) {
        const auto lg = loss_and_grad(model, inputs, labels, 0.0);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t c = 0; c < 4; ++c) model.w(i, c) -= 1e-3 * lg.grad_w(i, c);
        for (std::size_t c = 0; c < 4; ++c) model.bias[c] -= 1e-3 * lg.grad_b[c];
        const double now = loss_and_grad(model, inputs, labels, 0.0).loss;
        CHECK(now <= prev + 1e-15);
        prev = now;
    }
}

TEST_CASE("config and input validation") {
    Matrix inputs(4, 2);
    const std::vector<int> labels = {0, 1, 2, 3};
    TrainConfig bad;
    bad.epochs = 0;
    CHECK_THROWS_AS(train_softmax(inputs, labels, kClasses, bad), Error);

    TrainConfig ok;
    CHECK_THROWS_WITH_AS(train_softmax(inputs, {0, 1, 2, 2}, kClasses, ok),
                         doctest::Contains("absent"), Error); // class "other" missing

    SoftmaxModel m;
    m.w = Matrix(2, 4);
    m.bias.assign(4, 0.0);
    m.class_names = kClasses;
    CHECK_THROWS_AS(predict_proba(m, {1.0}), Error); // dimension mismatch
    CHECK_THROWS_AS(loss_and_grad(m, Matrix(0, 2), {}, 0.0), Error);
    CHECK_THROWS_AS(loss_and_grad(m, inputs, {0, 1, 2, 9}, 0.0), Error);
}

TEST_CASE("argmax ties break to the lowest class index") {
    SoftmaxModel m;
    m.w = Matrix(1, 4);
    m.bias.assign(4, 0.0);
    m.class_names = kClasses;
    CHECK(predict(m, {0.0}) == 0); // uniform probabilities

    m.bias = {0.0, 3.0, 0.0, 0.0};
    CHECK(predict(m, {0.0}) == 1);
}

TEST_CASE("adding a constant to every logit leaves the prediction unchanged") {
    std::mt19937_64 rng(95);
    SoftmaxModel m = random_model(3, 4, rng);
    const std::vector<double> g = {0.4, -0.2, 1.7};
    const int before = predict(m, g);
    for (double& b : m.bias) b += 17.5;
    CHECK(predict(m, g) == before);
}
