#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "autosmote/autodiff.hpp"
#include "autosmote/matrix.hpp"
#include "autosmote/rng.hpp"

namespace autosmote::gumbel {

/// One draw of the relaxed categorical: a differentiable simplex vector
/// plus the hard argmax index used wherever a discrete choice is needed.
struct GumbelSample {
    ad::NodePtr soft;  // 1 x n, positive, sums to 1
    std::size_t hard_index = 0;
    double temperature = 1.0;

    std::size_t size() const { return soft->value.cols(); }
    double soft_at(std::size_t i) const { return soft->value.at(0, i); }
};

/// Standard Gumbel(0,1) via inverse transform, with the uniform clamped
/// away from {0,1} so the double log stays finite.
inline double gumbel_from_uniform(double u) {
    u = std::clamp(u, 1e-12, 1.0 - 1e-12);
    return -std::log(-std::log(u));
}

inline std::vector<double> sample_gumbel_noise(std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_gumbel_noise: n must be >= 1");
    std::vector<double> g(n);
    for (auto& v : g) v = gumbel_from_uniform(rng.uniform01());
    return g;
}

/// Relaxed sample with caller-supplied noise. Composed from tape ops, so
/// the gradient of `soft` with respect to the logits is the exact
/// softmax Jacobian at the noise-shifted, temperature-scaled logits.
inline GumbelSample gumbel_softmax_with_noise(const ad::NodePtr& logits, double tau,
                                              const std::vector<double>& noise) {
    if (!(tau > 0.0)) throw std::invalid_argument("gumbel_softmax: tau must be > 0");
    if (logits->value.rows() != 1 || logits->value.cols() != noise.size()) {
        throw std::invalid_argument("gumbel_softmax: logits/noise shape mismatch");
    }
    auto shifted = ad::add(logits, ad::constant(Matrix::row(noise)));
    auto soft = ad::softmax_rows(ad::scalar_mul(shifted, 1.0 / tau));

    GumbelSample s;
    s.soft = soft;
    s.temperature = tau;
    const auto& row = soft->value;
    for (std::size_t i = 1; i < row.cols(); ++i) {
        if (row.at(0, i) > row.at(0, s.hard_index)) s.hard_index = i;
    }
    return s;
}

inline GumbelSample gumbel_softmax(const ad::NodePtr& logits, double tau, Rng& rng) {
    return gumbel_softmax_with_noise(logits, tau,
                                     sample_gumbel_noise(logits->value.cols(), rng));
}

/// Look up the hard decision in its ordered decision set.
template <typename T>
const T& select_decision(const GumbelSample& s, const std::vector<T>& decision_set) {
    if (decision_set.size() != s.size()) {
        throw std::invalid_argument("select_decision: decision set size mismatch");
    }
    return decision_set[s.hard_index];
}

}  // namespace autosmote::gumbel
