#include "medsev/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "medsev/error.hpp"
#include "medsev/kernels.hpp"

namespace medsev {

namespace {

// logits[c] = g . W_col(c) + b[c], accumulated row-wise so the inner loop
// stays contiguous.
void logits_of(const SoftmaxModel& model, const double* g, std::vector<double>& logits) {
    logits.assign(model.bias.begin(), model.bias.end());
    for (std::size_t r = 0; r < model.w.rows(); ++r)
        kernels::axpy(g[r], model.w.row(r), logits.data(), logits.size());
}

void softmax_in_place(std::vector<double>& logits) {
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (double& v : logits) {
        v = std::exp(v - max_logit);
        denom += v;
    }
    for (double& v : logits) v /= denom;
}

} // namespace

std::vector<double> predict_proba(const SoftmaxModel& model, const std::vector<double>& g) {
    if (g.size() != model.input_dim())
        throw Error("predict_proba: input dimension " + std::to_string(g.size()) +
                    " does not match model dimension " + std::to_string(model.input_dim()));
    std::vector<double> p;
    logits_of(model, g.data(), p);
    softmax_in_place(p);
    return p;
}

LossGrad loss_and_grad(const SoftmaxModel& model, const Matrix& inputs,
                       const std::vector<int>& labels, double l2) {
    const std::size_t m = inputs.rows();
    const std::size_t k = model.input_dim();
    const std::size_t num_classes = model.num_classes();
    if (m == 0) throw Error("loss_and_grad: empty batch");
    if (labels.size() != m) throw Error("loss_and_grad: label count mismatch");
    if (inputs.cols() != k) throw Error("loss_and_grad: input dimension mismatch");

    LossGrad out;
    out.grad_w = Matrix(k, num_classes);
    out.grad_b.assign(num_classes, 0.0);

    std::vector<double> p;
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        const int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
            throw Error("loss_and_grad: label out of range");
        logits_of(model, inputs.row(i), p);
        softmax_in_place(p);
        out.loss -= std::log(std::max(p[static_cast<std::size_t>(y)], 1e-300)) * inv_m;
        p[static_cast<std::size_t>(y)] -= 1.0;
        for (std::size_t r = 0; r < k; ++r)
            kernels::axpy(inputs(i, r) * inv_m, p.data(), out.grad_w.row(r), num_classes);
        kernels::axpy(inv_m, p.data(), out.grad_b.data(), num_classes);
    }

    if (l2 > 0.0) {
        out.loss += 0.5 * l2 * model.w.frob_sq();
        for (std::size_t r = 0; r < k; ++r)
            kernels::axpy(l2, model.w.row(r), out.grad_w.row(r), num_classes);
    }
    return out;
}

SoftmaxModel train_softmax(const Matrix& inputs, const std::vector<int>& labels,
                           const std::vector<std::string>& class_names,
                           const TrainConfig& config) {
    const std::size_t m = inputs.rows();
    const std::size_t num_classes = class_names.size();
    if (m == 0) throw Error("train_softmax: no training rows");
    if (labels.size() != m) throw Error("train_softmax: label count mismatch");
    if (config.learning_rate <= 0.0) throw Error("train_softmax: learning rate must be > 0");
    if (config.epochs < 1) throw Error("train_softmax: epochs must be >= 1");
    if (config.batch_size < 0) throw Error("train_softmax: batch size must be >= 1 (or 0 for full batch)");

    std::vector<std::size_t> per_class(num_classes, 0);
    for (int y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
            throw Error("train_softmax: label out of range");
        ++per_class[static_cast<std::size_t>(y)];
    }
    for (std::size_t c = 0; c < num_classes; ++c)
        if (per_class[c] == 0)
            throw Error("train_softmax: class \"" + class_names[c] + "\" absent from training rows");

    SoftmaxModel model;
    model.w = Matrix(inputs.cols(), num_classes);
    model.bias.assign(num_classes, 0.0);
    model.class_names = class_names;

    const std::size_t batch =
        (config.batch_size == 0 || static_cast<std::size_t>(config.batch_size) >= m)
            ? m
            : static_cast<std::size_t>(config.batch_size);

    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < m; start += batch) {
            const std::size_t count = std::min(batch, m - start);
            Matrix bx(count, inputs.cols());
            std::vector<int> by(count);
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t src = order[start + i];
                std::copy(inputs.row(src), inputs.row(src) + inputs.cols(), bx.row(i));
                by[i] = labels[src];
            }
            const LossGrad lg = loss_and_grad(model, bx, by, config.l2_penalty);
            for (std::size_t r = 0; r < model.w.rows(); ++r)
                kernels::axpy(-config.learning_rate, lg.grad_w.row(r), model.w.row(r),
                              num_classes);
            kernels::axpy(-config.learning_rate, lg.grad_b.data(), model.bias.data(),
                          num_classes);
        }
    }
    return model;
}

int predict(const SoftmaxModel& model, const std::vector<double>& g) {
    const std::vector<double> p = predict_proba(model, g);
    int best = 0;
    for (std::size_t c = 1; c < p.size(); ++c)
        if (p[c] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best;
}

} // namespace medsev
