#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "autosmote/adam.hpp"
#include "autosmote/autodiff.hpp"
#include "autosmote/dataset.hpp"
#include "autosmote/matrix.hpp"
#include "autosmote/rng.hpp"

namespace autosmote {

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t epochs = 200;
    std::size_t batch_size = 500;
    std::uint64_t seed = 0;
    double tau = 1.0;  // gumbel temperature for learnable samplers

    void check() const {
        if (learning_rate <= 0 || epochs == 0 || batch_size == 0 || tau <= 0) {
            throw std::invalid_argument("TrainConfig: all fields must be positive");
        }
    }
};

/// One-hidden-layer rectifier MLP with a softmax head:
/// softmax(relu(X W1 + b1) W2 + b2).
class MlpClassifier {
public:
    static constexpr std::size_t kHiddenUnits = 64;

    MlpClassifier(std::size_t features, std::size_t classes, Rng& init_rng,
                  std::size_t hidden = kHiddenUnits)
        : features_(features), classes_(classes) {
        w1_ = ad::parameter(ad::glorot_uniform(features, hidden, init_rng));
        b1_ = ad::parameter(Matrix(1, hidden, 0.0));
        w2_ = ad::parameter(ad::glorot_uniform(hidden, classes, init_rng));
        b2_ = ad::parameter(Matrix(1, classes, 0.0));
    }

    std::size_t features() const { return features_; }
    std::size_t classes() const { return classes_; }

    std::vector<ad::NodePtr> parameters() const { return {w1_, b1_, w2_, b2_}; }

    ad::NodePtr forward(const ad::NodePtr& batch) const {
        if (batch->value.cols() != features_) {
            throw std::invalid_argument("MlpClassifier::forward: width mismatch");
        }
        auto hidden = ad::relu(ad::add(ad::matmul(batch, w1_), b1_));
        return ad::softmax_rows(ad::add(ad::matmul(hidden, w2_), b2_));
    }

    /// Tape-free probabilities for evaluation loops.
    Matrix predict_probs(const Matrix& batch) const {
        return forward(ad::constant(batch))->value;
    }

    /// Argmax class per row; exact ties resolve to the lowest class index.
    std::vector<int> predict(const Matrix& batch) const {
        const Matrix probs = predict_probs(batch);
        std::vector<int> out(probs.rows());
        for (std::size_t i = 0; i < probs.rows(); ++i) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < probs.cols(); ++j) {
                if (probs.at(i, j) > probs.at(i, best)) best = j;
            }
            out[i] = static_cast<int>(best);
        }
        return out;
    }

private:
    std::size_t features_;
    std::size_t classes_;
    ad::NodePtr w1_, b1_, w2_, b2_;
};

inline constexpr double kProbabilityFloor = 1e-12;

/// -(1/N) sum_i w_i log(max(p[i, y_i], floor)), differentiable in both the
/// probabilities and the weights. Weights are an N x 1 node so the
/// participation gates of learnable samplers receive gradient through
/// their loss contribution.
inline ad::NodePtr weighted_cross_entropy(const ad::NodePtr& probs,
                                          const std::vector<int>& labels,
                                          const ad::NodePtr& weights) {
    const std::size_t n = probs->value.rows();
    const std::size_t c = probs->value.cols();
    if (labels.size() != n) {
        throw std::invalid_argument("cross_entropy: label count mismatch");
    }
    if (weights->value.rows() != n || weights->value.cols() != 1) {
        throw std::invalid_argument("cross_entropy: weights must be N x 1");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= c) {
            throw std::invalid_argument("cross_entropy: label out of range");
        }
        double row_sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) row_sum += probs->value.at(i, j);
        if (std::fabs(row_sum - 1.0) > 1e-6) {
            throw std::invalid_argument("cross_entropy: probabilities are not row-stochastic");
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = std::max(probs->value.at(i, labels[i]), kProbabilityFloor);
        total -= weights->value.at(i, 0) * std::log(p);
    }
    Matrix value(1, 1, total / static_cast<double>(n));

    auto labels_copy = labels;
    return ad::make_op(std::move(value), {probs, weights},
                       [labels = std::move(labels_copy)](ad::Node& self) {
                           const auto& probs = self.parents[0];
                           const auto& weights = self.parents[1];
                           const double g = self.grad.at(0, 0);
                           const auto n = static_cast<double>(labels.size());
                           for (std::size_t i = 0; i < labels.size(); ++i) {
                               const double p = probs->value.at(i, labels[i]);
                               const double w = weights->value.at(i, 0);
                               if (probs->requires_grad && p > kProbabilityFloor) {
                                   probs->grad.at(i, labels[i]) -= g * w / (n * p);
                               }
                               if (weights->requires_grad) {
                                   weights->grad.at(i, 0) -=
                                       g * std::log(std::max(p, kProbabilityFloor)) / n;
                               }
                           }
                       });
}

inline ad::NodePtr cross_entropy(const ad::NodePtr& probs, const std::vector<int>& labels) {
    return weighted_cross_entropy(probs, labels,
                                  ad::constant(Matrix(probs->value.rows(), 1, 1.0)));
}

/// Per-batch augmentation hook. Implementations return the batch with
/// synthetic rows appended (real rows first, in their incoming order) and
/// a per-row loss weight column; their learnable parameters must be
/// registered in the same optimizer as the classifier so one backward
/// sweep trains everything jointly.
class BatchAugmenter {
public:
    struct Augmented {
        ad::NodePtr features;
        std::vector<int> labels;
        ad::NodePtr weights;  // (real + synthetic) x 1
        std::size_t real_rows = 0;
    };

    virtual ~BatchAugmenter() = default;
    virtual Augmented augment(const Dataset& batch, Rng& rng) = 0;
    virtual std::vector<ad::NodePtr> parameters() { return {}; }
};

struct EpochStats {
    double mean_loss = 0.0;
    double train_error = 0.0;
    std::vector<std::size_t> visited_rows;  // original row ids, visit order
    std::vector<int> predictions;           // real-row predictions at batch time
};

/// One pass over the training split: shuffle, batch (remainder kept),
/// optionally augment, forward/backward/step. Returns the row-weighted
/// mean loss and the 0-1 error over real rows as predicted at batch time.
inline EpochStats train_epoch(MlpClassifier& model, const Dataset& train,
                              const TrainConfig& cfg, ad::Adam& opt, Rng& rng,
                              BatchAugmenter* augmenter = nullptr) {
    cfg.check();
    if (train.n() == 0) throw std::invalid_argument("train_epoch: empty dataset");

    std::vector<std::size_t> perm(train.n());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);

    EpochStats stats;
    double loss_weighted = 0.0;
    std::size_t loss_rows = 0;
    std::size_t wrong = 0;

    for (std::size_t start = 0; start < perm.size(); start += cfg.batch_size) {
        const std::size_t stop = std::min(perm.size(), start + cfg.batch_size);
        std::vector<std::size_t> rows(perm.begin() + start, perm.begin() + stop);
        Dataset batch = train.select_rows(rows);

        BatchAugmenter::Augmented aug;
        if (augmenter) {
            aug = augmenter->augment(batch, rng);
        } else {
            aug.features = ad::constant(batch.features);
            aug.labels = batch.labels;
            aug.weights = ad::constant(Matrix(batch.n(), 1, 1.0));
            aug.real_rows = batch.n();
        }

        auto probs = model.forward(aug.features);
        auto loss = weighted_cross_entropy(probs, aug.labels, aug.weights);
        ad::backward(loss);
        opt.step();

        loss_weighted += loss->value.at(0, 0) * static_cast<double>(aug.labels.size());
        loss_rows += aug.labels.size();
        for (std::size_t i = 0; i < aug.real_rows; ++i) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < probs->value.cols(); ++j) {
                if (probs->value.at(i, j) > probs->value.at(i, best)) best = j;
            }
            stats.visited_rows.push_back(rows[i]);
            stats.predictions.push_back(static_cast<int>(best));
            if (static_cast<int>(best) != batch.labels[i]) ++wrong;
        }
    }

    stats.mean_loss = loss_weighted / static_cast<double>(loss_rows);
    stats.train_error =
        static_cast<double>(wrong) / static_cast<double>(stats.predictions.size());
    return stats;
}

}  // namespace autosmote
