#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "autosmote/matrix.hpp"

namespace autosmote::agg {

/// The six ways a seed instance and its neighbors combine into one
/// synthetic row. Ordinals are stable: decision heads emit logits in
/// this order.
enum class AggregatorKind {
    Interpolation = 0,
    Maximum = 1,
    Minimum = 2,
    Sum = 3,
    Average = 4,
    WeightedAverage = 5,
};

inline constexpr std::size_t kAggregatorCount = 6;

inline const char* to_string(AggregatorKind k) {
    switch (k) {
        case AggregatorKind::Interpolation: return "interpolation";
        case AggregatorKind::Maximum: return "maximum";
        case AggregatorKind::Minimum: return "minimum";
        case AggregatorKind::Sum: return "sum";
        case AggregatorKind::Average: return "average";
        case AggregatorKind::WeightedAverage: return "weighted_average";
    }
    return "?";
}

using Vec = std::vector<double>;
using VecList = std::vector<Vec>;

namespace detail {
inline void check_width(const Vec& x, const VecList& neighbors) {
    for (const auto& nb : neighbors) {
        if (nb.size() != x.size()) {
            throw std::invalid_argument("aggregator: dimension mismatch");
        }
    }
}
}  // namespace detail

/// lambda * x + (1 - lambda) * x_star.
inline Vec interpolate(const Vec& x, const Vec& x_star, double lambda) {
    if (x.size() != x_star.size()) {
        throw std::invalid_argument("interpolate: dimension mismatch");
    }
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = lambda * x[i] + (1.0 - lambda) * x_star[i];
    }
    return out;
}

/// Coordinate-wise maximum over {x} and the neighbors.
inline Vec elementwise_max(const Vec& x, const VecList& neighbors) {
    detail::check_width(x, neighbors);
    Vec out = x;
    for (const auto& nb : neighbors) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], nb[i]);
    }
    return out;
}

/// Coordinate-wise minimum over {x} and the neighbors.
inline Vec elementwise_min(const Vec& x, const VecList& neighbors) {
    detail::check_width(x, neighbors);
    Vec out = x;
    for (const auto& nb : neighbors) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(out[i], nb[i]);
    }
    return out;
}

/// x plus the sum of the neighbors. The one aggregator whose output can
/// leave the input bounding box; it is intentionally not clamped.
inline Vec sum_agg(const Vec& x, const VecList& neighbors) {
    detail::check_width(x, neighbors);
    Vec out = x;
    for (const auto& nb : neighbors) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += nb[i];
    }
    return out;
}

/// Mean of {x} and the neighbors.
inline Vec average_agg(const Vec& x, const VecList& neighbors) {
    Vec out = sum_agg(x, neighbors);
    const double denom = static_cast<double>(neighbors.size() + 1);
    for (double& v : out) v /= denom;
    return out;
}

/// Weighted mean of {x} and the neighbors; weights[0] belongs to x.
inline Vec weighted_average(const Vec& x, const VecList& neighbors, const Vec& weights) {
    detail::check_width(x, neighbors);
    if (weights.size() != neighbors.size() + 1) {
        throw std::invalid_argument("weighted_average: one weight per member required");
    }
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("weighted_average: weights must be > 0");
    }
    Vec out(x.size(), 0.0);
    double total = 0.0;
    auto accumulate = [&](const Vec& v, double w) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * v[i];
        total += w;
    };
    accumulate(x, weights[0]);
    for (std::size_t j = 0; j < neighbors.size(); ++j) accumulate(neighbors[j], weights[j + 1]);
    for (double& v : out) v /= total;
    return out;
}

/// Softmax of negative Euclidean distance to the seed (the seed itself
/// sits at distance zero). Strictly positive, sums to one.
inline Vec inverse_distance_weights(const Vec& x, const VecList& neighbors) {
    detail::check_width(x, neighbors);
    Vec w(neighbors.size() + 1);
    w[0] = 0.0;
    for (std::size_t j = 0; j < neighbors.size(); ++j) {
        w[j + 1] = -euclidean_distance(x.data(), neighbors[j].data(), x.size());
    }
    const double mx = *std::max_element(w.begin(), w.end());
    double sum = 0.0;
    for (double& v : w) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : w) v /= sum;
    return w;
}

/// Uniform dispatcher used by the learnable sampler. `lambda` and
/// `partner_u` are the per-row random draws: lambda is the interpolation
/// coefficient, partner_u in [0,1) picks the interpolation partner, so
/// candidates evaluated at different k share their randomness.
inline Vec apply(AggregatorKind kind, const Vec& x, const VecList& neighbors,
                 double lambda, double partner_u) {
    if (neighbors.empty()) return x;  // defensive identity, k = 0 is barred upstream
    switch (kind) {
        case AggregatorKind::Interpolation: {
            auto idx = static_cast<std::size_t>(partner_u *
                                                static_cast<double>(neighbors.size()));
            if (idx >= neighbors.size()) idx = neighbors.size() - 1;
            return interpolate(x, neighbors[idx], lambda);
        }
        case AggregatorKind::Maximum: return elementwise_max(x, neighbors);
        case AggregatorKind::Minimum: return elementwise_min(x, neighbors);
        case AggregatorKind::Sum: return sum_agg(x, neighbors);
        case AggregatorKind::Average: return average_agg(x, neighbors);
        case AggregatorKind::WeightedAverage:
            return weighted_average(x, neighbors, inverse_distance_weights(x, neighbors));
    }
    throw std::logic_error("apply: unknown aggregator");
}

}  // namespace autosmote::agg
