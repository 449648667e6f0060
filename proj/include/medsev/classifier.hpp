#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medsev/matrix.hpp"

// Multinomial softmax over the fused representation, trained by mini-batch
// gradient descent on cross-entropy with L2 on the weights.

namespace medsev {

struct SoftmaxModel {
    Matrix w;                             // k × K
    std::vector<double> bias;             // K
    std::vector<std::string> class_names; // K, canonical label order

    std::size_t input_dim() const { return w.rows(); }
    std::size_t num_classes() const { return bias.size(); }
};

struct TrainConfig {
    double learning_rate = 0.1;
    double l2_penalty = 1e-4;
    int epochs = 200;
    int batch_size = 0; // 0 or >= m means full batch
    std::uint64_t seed = 7;
};

// Class probabilities via max-subtracted softmax; components are positive
// and sum to 1.
std::vector<double> predict_proba(const SoftmaxModel& model, const std::vector<double>& g);

struct LossGrad {
    double loss = 0.0;
    Matrix grad_w;
    std::vector<double> grad_b;
};

// Mean cross-entropy over the batch plus (l2/2)*||W||_F^2, with analytic
// gradients. Bias is not penalized.
LossGrad loss_and_grad(const SoftmaxModel& model, const Matrix& inputs,
                       const std::vector<int>& labels, double l2);

// Deterministic training (fixed shuffle order per seed) from zero-initialized
// parameters. Every class must appear at least once in the labels.
SoftmaxModel train_softmax(const Matrix& inputs, const std::vector<int>& labels,
                           const std::vector<std::string>& class_names, const TrainConfig& config);

// Argmax of predict_proba; ties break to the lowest class index.
int predict(const SoftmaxModel& model, const std::vector<double>& g);

} // namespace medsev
