#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "autosmote/dataset.hpp"
#include "autosmote/matrix.hpp"

namespace autosmote {

struct NeighborQuery {
    std::vector<std::size_t> ids;  // ascending by distance
    bool truncated = false;        // fewer than the requested k were available
};

/// Exact same-class nearest-neighbor lists under the Euclidean metric.
/// Distance ties break toward the lower row id so that rebuilding the
/// index is reproducible.
class NeighborIndex {
public:
    NeighborIndex() = default;

    std::size_t k_max() const { return k_max_; }

    bool is_indexed(std::size_t row) const { return lists_.count(row) > 0; }

    const std::vector<std::size_t>& full_list(std::size_t row) const {
        auto it = lists_.find(row);
        if (it == lists_.end()) {
            throw std::invalid_argument("NeighborIndex: row not indexed");
        }
        return it->second;
    }

    NeighborQuery neighbors_of(std::size_t row, std::size_t k) const {
        if (k < 1 || k > k_max_) {
            throw std::invalid_argument("NeighborIndex: k out of range");
        }
        const auto& list = full_list(row);
        NeighborQuery q;
        q.truncated = list.size() < k;
        const std::size_t take = std::min(k, list.size());
        q.ids.assign(list.begin(), list.begin() + take);
        return q;
    }

    friend NeighborIndex build_index(const Dataset& d, int cls, std::size_t k_max);

private:
    std::unordered_map<std::size_t, std::vector<std::size_t>> lists_;
    std::size_t k_max_ = 0;
};

/// Brute-force construction over the rows of one class. Lists have
/// length min(k_max, class_count - 1).
inline NeighborIndex build_index(const Dataset& d, int cls, std::size_t k_max) {
    if (k_max < 1) throw std::invalid_argument("build_index: k_max must be >= 1");
    const auto rows = d.rows_of_class(cls);
    if (rows.size() < 2) {
        throw std::runtime_error("build_index: class has fewer than 2 instances");
    }
    NeighborIndex idx;
    idx.k_max_ = k_max;
    const std::size_t f = d.f();
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t a : rows) {
        order.clear();
        for (std::size_t b : rows) {
            if (b == a) continue;
            order.emplace_back(
                squared_distance(d.features.row_ptr(a), d.features.row_ptr(b), f), b);
        }
        const std::size_t take = std::min(k_max, order.size());
        std::partial_sort(order.begin(), order.begin() + take, order.end());
        std::vector<std::size_t> list;
        list.reserve(take);
        for (std::size_t i = 0; i < take; ++i) list.push_back(order[i].second);
        idx.lists_.emplace(a, std::move(list));
    }
    return idx;
}

/// Nearest rows over the whole dataset regardless of class, excluding
/// the query row. Used by the boundary-sensitive samplers to inspect
/// mixed-class neighborhoods.
inline std::vector<std::size_t> nearest_rows_all_classes(const Dataset& d,
                                                         std::size_t row,
                                                         std::size_t k) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(d.n() - 1);
    for (std::size_t b = 0; b < d.n(); ++b) {
        if (b == row) continue;
        order.emplace_back(
            squared_distance(d.features.row_ptr(row), d.features.row_ptr(b), d.f()), b);
    }
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + take, order.end());
    std::vector<std::size_t> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(order[i].second);
    return out;
}

}  // namespace autosmote
