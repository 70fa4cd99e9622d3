#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "autosmote/matrix.hpp"
#include "autosmote/rng.hpp"

namespace autosmote::ad {

class Node;
using NodePtr = std::shared_ptr<Node>;

/// One vertex of a reverse-mode tape. `value` is the forward result,
/// `grad` accumulates d(loss)/d(value) during backward(). The backprop
/// closure pushes this node's grad into its parents; it must only read
/// `self.grad` and add into `parent->grad`, never overwrite, so that
/// shared subexpressions accumulate correctly.
class Node {
public:
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::vector<NodePtr> parents;
    std::function<void(Node&)> backprop;

    explicit Node(Matrix v, bool rg = false)
        : value(std::move(v)), grad(value.rows(), value.cols(), 0.0), requires_grad(rg) {}

    void zero_grad() { grad.fill(0.0); }
};

inline NodePtr constant(Matrix m) { return std::make_shared<Node>(std::move(m), false); }

inline NodePtr parameter(Matrix m) { return std::make_shared<Node>(std::move(m), true); }

/// Generic op constructor. When no parent carries gradient the result is
/// collapsed to a constant leaf so dead subgraphs are freed eagerly.
inline NodePtr make_op(Matrix value, std::vector<NodePtr> parents,
                       std::function<void(Node&)> backprop) {
    bool rg = false;
    for (const auto& p : parents) rg = rg || p->requires_grad;
    if (!rg) return constant(std::move(value));
    auto n = std::make_shared<Node>(std::move(value), true);
    n->parents = std::move(parents);
    n->backprop = std::move(backprop);
    return n;
}

namespace detail {

inline void matmul_values(const Matrix& a, const Matrix& b, Matrix& out) {
    const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        double* out_i = out.row_ptr(i);
        const double* a_i = a.row_ptr(i);
        for (std::size_t k = 0; k < m; ++k) {
            const double aik = a_i[k];
            if (aik == 0.0) continue;
            const double* b_k = b.row_ptr(k);
            for (std::size_t j = 0; j < p; ++j) out_i[j] += aik * b_k[j];
        }
    }
}

// out += a * b^T
inline void add_matmul_nt(const Matrix& a, const Matrix& b, Matrix& out) {
    const std::size_t n = a.rows(), m = a.cols(), p = b.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const double* a_i = a.row_ptr(i);
        double* out_i = out.row_ptr(i);
        for (std::size_t j = 0; j < p; ++j) {
            const double* b_j = b.row_ptr(j);
            double s = 0.0;
            for (std::size_t k = 0; k < m; ++k) s += a_i[k] * b_j[k];
            out_i[j] += s;
        }
    }
}

// out += a^T * b
inline void add_matmul_tn(const Matrix& a, const Matrix& b, Matrix& out) {
    const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
    for (std::size_t k = 0; k < n; ++k) {
        const double* a_k = a.row_ptr(k);
        const double* b_k = b.row_ptr(k);
        for (std::size_t i = 0; i < m; ++i) {
            const double aki = a_k[i];
            if (aki == 0.0) continue;
            double* out_i = out.row_ptr(i);
            for (std::size_t j = 0; j < p; ++j) out_i[j] += aki * b_k[j];
        }
    }
}

}  // namespace detail

inline NodePtr matmul(const NodePtr& a, const NodePtr& b) {
    if (a->value.cols() != b->value.rows()) {
        throw std::invalid_argument("matmul: inner dimensions disagree");
    }
    Matrix out(a->value.rows(), b->value.cols(), 0.0);
    detail::matmul_values(a->value, b->value, out);
    ensure_finite(out, "matmul");
    return make_op(std::move(out), {a, b}, [](Node& self) {
        const auto& a = self.parents[0];
        const auto& b = self.parents[1];
        if (a->requires_grad) detail::add_matmul_nt(self.grad, b->value, a->grad);
        if (b->requires_grad) detail::add_matmul_tn(a->value, self.grad, b->grad);
    });
}

/// Element-wise addition. Also accepts a 1 x k right operand against an
/// N x k left operand (row-broadcast bias addition).
inline NodePtr add(const NodePtr& a, const NodePtr& b) {
    const bool broadcast = b->value.rows() == 1 && a->value.cols() == b->value.cols() &&
                           a->value.rows() != b->value.rows();
    if (!broadcast && !a->value.same_shape(b->value)) {
        throw std::invalid_argument("add: shape mismatch");
    }
    Matrix out = a->value;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        const double* brow = broadcast ? b->value.row_ptr(0) : b->value.row_ptr(i);
        double* orow = out.row_ptr(i);
        for (std::size_t j = 0; j < out.cols(); ++j) orow[j] += brow[j];
    }
    ensure_finite(out, "add");
    return make_op(std::move(out), {a, b}, [broadcast](Node& self) {
        const auto& a = self.parents[0];
        const auto& b = self.parents[1];
        if (a->requires_grad) {
            for (std::size_t i = 0; i < a->grad.size(); ++i) a->grad[i] += self.grad[i];
        }
        if (b->requires_grad) {
            if (broadcast) {
                for (std::size_t i = 0; i < self.grad.rows(); ++i) {
                    const double* g = self.grad.row_ptr(i);
                    for (std::size_t j = 0; j < self.grad.cols(); ++j) b->grad[j] += g[j];
                }
            } else {
                for (std::size_t i = 0; i < b->grad.size(); ++i) b->grad[i] += self.grad[i];
            }
        }
    });
}

inline NodePtr sub(const NodePtr& a, const NodePtr& b) {
    if (!a->value.same_shape(b->value)) {
        throw std::invalid_argument("sub: shape mismatch");
    }
    Matrix out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b->value[i];
    ensure_finite(out, "sub");
    return make_op(std::move(out), {a, b}, [](Node& self) {
        const auto& a = self.parents[0];
        const auto& b = self.parents[1];
        if (a->requires_grad) {
            for (std::size_t i = 0; i < a->grad.size(); ++i) a->grad[i] += self.grad[i];
        }
        if (b->requires_grad) {
            for (std::size_t i = 0; i < b->grad.size(); ++i) b->grad[i] -= self.grad[i];
        }
    });
}

inline NodePtr hadamard(const NodePtr& a, const NodePtr& b) {
    if (!a->value.same_shape(b->value)) {
        throw std::invalid_argument("hadamard: shape mismatch");
    }
    Matrix out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b->value[i];
    ensure_finite(out, "hadamard");
    return make_op(std::move(out), {a, b}, [](Node& self) {
        const auto& a = self.parents[0];
        const auto& b = self.parents[1];
        if (a->requires_grad) {
            for (std::size_t i = 0; i < a->grad.size(); ++i)
                a->grad[i] += self.grad[i] * b->value[i];
        }
        if (b->requires_grad) {
            for (std::size_t i = 0; i < b->grad.size(); ++i)
                b->grad[i] += self.grad[i] * a->value[i];
        }
    });
}

inline NodePtr scalar_mul(const NodePtr& a, double s) {
    Matrix out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
    ensure_finite(out, "scalar_mul");
    return make_op(std::move(out), {a}, [s](Node& self) {
        const auto& a = self.parents[0];
        if (a->requires_grad) {
            for (std::size_t i = 0; i < a->grad.size(); ++i) a->grad[i] += s * self.grad[i];
        }
    });
}

inline NodePtr relu(const NodePtr& a) {
    Matrix out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, out[i]);
    return make_op(std::move(out), {a}, [](Node& self) {
        const auto& a = self.parents[0];
        if (a->requires_grad) {
            for (std::size_t i = 0; i < a->grad.size(); ++i) {
                if (a->value[i] > 0.0) a->grad[i] += self.grad[i];
            }
        }
    });
}

/// Row-wise softmax with max-subtraction for stability.
inline NodePtr softmax_rows(const NodePtr& a) {
    Matrix out = a->value;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* r = out.row_ptr(i);
        double mx = r[0];
        for (std::size_t j = 1; j < out.cols(); ++j) mx = std::max(mx, r[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < out.cols(); ++j) {
            r[j] = std::exp(r[j] - mx);
            sum += r[j];
        }
        for (std::size_t j = 0; j < out.cols(); ++j) r[j] /= sum;
    }
    ensure_finite(out, "softmax_rows");
    return make_op(std::move(out), {a}, [](Node& self) {
        const auto& a = self.parents[0];
        if (!a->requires_grad) return;
        for (std::size_t i = 0; i < self.value.rows(); ++i) {
            const double* y = self.value.row_ptr(i);
            const double* gy = self.grad.row_ptr(i);
            double* gx = a->grad.row_ptr(i);
            double dot = 0.0;
            for (std::size_t j = 0; j < self.value.cols(); ++j) dot += gy[j] * y[j];
            for (std::size_t j = 0; j < self.value.cols(); ++j)
                gx[j] += y[j] * (gy[j] - dot);
        }
    });
}

inline NodePtr log(const NodePtr& a) {
    Matrix out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] <= 0.0) throw std::domain_error("log: non-positive entry");
        out[i] = std::log(out[i]);
    }
    return make_op(std::move(out), {a}, [](Node& self) {
        const auto& a = self.parents[0];
        if (a->requires_grad) {
            for (std::size_t i = 0; i < a->grad.size(); ++i)
                a->grad[i] += self.grad[i] / a->value[i];
        }
    });
}

inline NodePtr exp(const NodePtr& a) {
    Matrix out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(out[i]);
    ensure_finite(out, "exp");
    return make_op(std::move(out), {a}, [](Node& self) {
        const auto& a = self.parents[0];
        if (a->requires_grad) {
            for (std::size_t i = 0; i < a->grad.size(); ++i)
                a->grad[i] += self.grad[i] * self.value[i];
        }
    });
}

/// Stack parts vertically. All parts must share a column count.
inline NodePtr concat_rows(const std::vector<NodePtr>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat_rows: empty input");
    const std::size_t cols = parts[0]->value.cols();
    std::size_t rows = 0;
    for (const auto& p : parts) {
        if (p->value.cols() != cols) {
            throw std::invalid_argument("concat_rows: column mismatch");
        }
        rows += p->value.rows();
    }
    Matrix out(rows, cols);
    std::size_t r = 0;
    for (const auto& p : parts) {
        std::copy(p->value.data().begin(), p->value.data().end(), out.row_ptr(r));
        r += p->value.rows();
    }
    return make_op(std::move(out), parts, [](Node& self) {
        std::size_t r = 0;
        for (const auto& p : self.parents) {
            if (p->requires_grad) {
                const double* g = self.grad.row_ptr(r);
                for (std::size_t i = 0; i < p->grad.size(); ++i) p->grad[i] += g[i];
            }
            r += p->value.rows();
        }
    });
}

/// Reverse-mode sweep from a scalar loss. Every reachable node with
/// requires_grad receives its accumulated gradient; repeated calls
/// without zeroing add up (accumulation semantics).
inline void backward(const NodePtr& loss) {
    if (loss->value.rows() != 1 || loss->value.cols() != 1) {
        throw std::invalid_argument("backward: loss must be 1x1");
    }
    // Iterative post-order DFS; reversed it yields an order where every
    // node is finalized before its parents are visited.
    std::vector<Node*> order;
    std::unordered_set<Node*> visited;
    std::vector<std::pair<Node*, std::size_t>> stack;
    stack.emplace_back(loss.get(), 0);
    visited.insert(loss.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            Node* p = node->parents[next++].get();
            if (p->requires_grad && !visited.count(p)) {
                visited.insert(p);
                stack.emplace_back(p, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    loss->grad[0] += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if ((*it)->backprop) (*it)->backprop(**it);
    }
}

/// Glorot-style uniform initialization in +-sqrt(6 / (fan_in + fan_out)).
inline Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.uniform(-bound, bound);
    return m;
}

}  // namespace autosmote::ad
