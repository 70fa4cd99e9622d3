#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "autosmote/autodiff.hpp"

namespace autosmote::ad {

/// Adam with bias correction over a fixed set of parameter nodes.
/// Betas and epsilon are the usual defaults; only the learning rate is
/// exposed because that is the one knob the training recipes set.
class Adam {
public:
    Adam(std::vector<NodePtr> params, double learning_rate,
         double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8)
        : params_(std::move(params)), lr_(learning_rate),
          beta1_(beta1), beta2_(beta2), eps_(epsilon) {
        for (const auto& p : params_) {
            if (!p->requires_grad) {
                throw std::invalid_argument("Adam: parameter without requires_grad");
            }
            m_.emplace_back(p->value.rows(), p->value.cols(), 0.0);
            v_.emplace_back(p->value.rows(), p->value.cols(), 0.0);
        }
    }

    /// One update from the gradients currently stored on the parameters.
    /// Grads are zeroed afterwards.
    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
        for (std::size_t k = 0; k < params_.size(); ++k) {
            auto& p = *params_[k];
            for (std::size_t i = 0; i < p.value.size(); ++i) {
                const double g = p.grad[i];
                m_[k][i] = beta1_ * m_[k][i] + (1.0 - beta1_) * g;
                v_[k][i] = beta2_ * v_[k][i] + (1.0 - beta2_) * g * g;
                const double mhat = m_[k][i] / bc1;
                const double vhat = v_[k][i] / bc2;
                p.value[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
            }
            p.zero_grad();
        }
    }

    long step_count() const { return t_; }
    const std::vector<NodePtr>& params() const { return params_; }

private:
    std::vector<NodePtr> params_;
    std::vector<Matrix> m_;
    std::vector<Matrix> v_;
    long t_ = 0;
    double lr_;
    double beta1_;
    double beta2_;
    double eps_;
};

}  // namespace autosmote::ad
