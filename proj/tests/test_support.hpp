#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "autosmote/autodiff.hpp"
#include "autosmote/matrix.hpp"
#include "autosmote/rng.hpp"

namespace test_support {

using autosmote::Matrix;
using autosmote::Rng;
using autosmote::ad::NodePtr;

inline Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng,
                            double lo = -2.0, double hi = 2.0) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.uniform(lo, hi);
    return m;
}

struct FdReport {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
};

/// Central-difference oracle: perturbs every entry of every listed
/// parameter and compares (L+ - L-) / 2h against the gradient produced
/// by one reverse sweep of `build_loss`. The loss graph is rebuilt for
/// each probe so the oracle never reuses the implementation's tape.
inline FdReport finite_difference_check(
    const std::vector<NodePtr>& params,
    const std::function<NodePtr()>& build_loss,
    double h = 1e-5) {
    for (const auto& p : params) p->zero_grad();
    autosmote::ad::backward(build_loss());

    FdReport report;
    for (const auto& p : params) {
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            const double saved = p->value[i];
            p->value[i] = saved + h;
            const double up = build_loss()->value[0];
            p->value[i] = saved - h;
            const double down = build_loss()->value[0];
            p->value[i] = saved;
            const double fd = (up - down) / (2.0 * h);
            const double an = p->grad[i];
            const double scale = std::max({1e-6, std::fabs(fd), std::fabs(an)});
            report.max_rel_error = std::max(report.max_rel_error, std::fabs(fd - an) / scale);
            ++report.checked;
        }
    }
    return report;
}

/// Sum of all entries as a 1x1 node, composed from matmul so the
/// reduction itself is part of the graph under test.
inline NodePtr sum_all(const NodePtr& x) {
    using namespace autosmote::ad;
    auto left = constant(Matrix(1, x->value.rows(), 1.0));
    auto right = constant(Matrix(x->value.cols(), 1, 1.0));
    return matmul(matmul(left, x), right);
}

}  // namespace test_support
