#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "autosmote/aggregators.hpp"
#include "autosmote/dataset.hpp"
#include "autosmote/neighbors.hpp"
#include "autosmote/rng.hpp"

namespace autosmote {

/// How far to raise each class. Default construction targets the
/// majority count for every class.
struct OversamplePlan {
    std::vector<std::size_t> target_counts;
    std::uint64_t seed = 0;

    static OversamplePlan balance_to_majority(const Dataset& d, std::uint64_t seed) {
        OversamplePlan plan;
        const std::size_t majority =
            *std::max_element(d.class_counts.begin(), d.class_counts.end());
        plan.target_counts.assign(d.num_classes(), majority);
        plan.seed = seed;
        return plan;
    }

    void check_against(const Dataset& d) const {
        if (target_counts.size() != d.num_classes()) {
            throw std::invalid_argument("OversamplePlan: class count mismatch");
        }
        for (std::size_t c = 0; c < target_counts.size(); ++c) {
            if (target_counts[c] < d.class_counts[c]) {
                throw std::invalid_argument("OversamplePlan: target below current count");
            }
        }
    }
};

namespace detail {

/// Append one synthetic feature row with the given label.
struct Augmenter {
    explicit Augmenter(const Dataset& source) : base(source) {}

    void push(const std::vector<double>& row, int label) {
        rows.push_back(row);
        labels.push_back(label);
    }

    Dataset finish() && {
        Dataset out = base;
        if (!rows.empty()) {
            Matrix grown(base.n() + rows.size(), base.f());
            std::copy(base.features.data().begin(), base.features.data().end(),
                      grown.data().begin());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                grown.set_row(base.n() + i, rows[i]);
            }
            out.features = std::move(grown);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                out.labels.push_back(labels[i]);
                out.class_counts[labels[i]]++;
            }
        }
        out.validate();
        return out;
    }

    const Dataset& base;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
};

inline agg::VecList gather_rows(const Dataset& d, const std::vector<std::size_t>& ids) {
    agg::VecList out;
    out.reserve(ids.size());
    for (std::size_t id : ids) out.push_back(d.features.row_values(id));
    return out;
}

}  // namespace detail

/// Duplicates uniformly sampled rows of each under-target class.
inline Dataset random_oversample(const Dataset& d, const OversamplePlan& plan) {
    plan.check_against(d);
    detail::Augmenter aug(d);
    Rng rng(Rng::derive(plan.seed, 0x7a4d));
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
        const std::size_t extra = plan.target_counts[c] - d.class_counts[c];
        if (extra == 0) continue;
        const auto rows = d.rows_of_class(static_cast<int>(c));
        for (std::size_t i = 0; i < extra; ++i) {
            const std::size_t pick = rows[rng.uniform_index(rows.size())];
            aug.push(d.features.row_values(pick), static_cast<int>(c));
        }
    }
    return std::move(aug).finish();
}

/// Classic interpolation oversampling: seeds cycle round-robin over the
/// class rows; each synthetic interpolates toward a uniformly chosen
/// same-class neighbor. Truncated neighbor lists (class smaller than
/// k+1) fall back to whatever neighbors exist.
inline Dataset smote(const Dataset& d, const OversamplePlan& plan, std::size_t k) {
    plan.check_against(d);
    if (k < 1) throw std::invalid_argument("smote: k must be >= 1");
    detail::Augmenter aug(d);
    Rng rng(Rng::derive(plan.seed, 0x5a01));
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
        const std::size_t extra = plan.target_counts[c] - d.class_counts[c];
        if (extra == 0) continue;
        if (d.class_counts[c] < 2) {
            throw std::runtime_error("smote: cannot oversample a class of size 1");
        }
        const auto rows = d.rows_of_class(static_cast<int>(c));
        const auto idx = build_index(d, static_cast<int>(c), k);
        for (std::size_t i = 0; i < extra; ++i) {
            const std::size_t seed_row = rows[i % rows.size()];
            const auto q = idx.neighbors_of(seed_row, k);
            const std::size_t partner = q.ids[rng.uniform_index(q.ids.size())];
            aug.push(agg::interpolate(d.features.row_values(seed_row),
                                      d.features.row_values(partner), rng.uniform01()),
                     static_cast<int>(c));
        }
    }
    return std::move(aug).finish();
}

/// Instances of `cls` whose all-class k-neighborhood is half or more
/// other-class but not entirely so (the "danger" band of the borderline
/// method). Exposed so the seeding rule is directly checkable.
inline std::vector<std::size_t> borderline_danger_set(const Dataset& d, int cls,
                                                      std::size_t k) {
    std::vector<std::size_t> danger;
    for (std::size_t row : d.rows_of_class(cls)) {
        const auto nn = nearest_rows_all_classes(d, row, k);
        std::size_t other = 0;
        for (std::size_t nb : nn) {
            if (d.labels[nb] != cls) ++other;
        }
        const double frac = static_cast<double>(other) / static_cast<double>(nn.size());
        if (frac >= 0.5 && frac < 1.0) danger.push_back(row);
    }
    return danger;
}

/// Borderline variant 1: only danger instances seed generation, partners
/// are same-class neighbors. With an empty danger set the call degrades
/// to plain smote (warned on stderr) rather than failing the run.
inline Dataset borderline_smote(const Dataset& d, const OversamplePlan& plan,
                                std::size_t k) {
    plan.check_against(d);
    detail::Augmenter aug(d);
    Rng rng(Rng::derive(plan.seed, 0xb0bd));
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
        const std::size_t extra = plan.target_counts[c] - d.class_counts[c];
        if (extra == 0) continue;
        if (d.class_counts[c] < 2) {
            throw std::runtime_error("borderline_smote: cannot oversample a class of size 1");
        }
        const auto danger = borderline_danger_set(d, static_cast<int>(c), k);
        if (danger.empty()) {
            std::cerr << "borderline_smote: no danger instances for class "
                      << d.label_names[c] << ", falling back to plain smote\n";
            OversamplePlan sub = plan;
            for (std::size_t j = 0; j < sub.target_counts.size(); ++j) {
                if (j != c) sub.target_counts[j] = d.class_counts[j];
            }
            auto fallback = smote(d, sub, k);
            for (std::size_t i = d.n(); i < fallback.n(); ++i) {
                aug.push(fallback.features.row_values(i), fallback.labels[i]);
            }
            continue;
        }
        const auto idx = build_index(d, static_cast<int>(c), k);
        for (std::size_t i = 0; i < extra; ++i) {
            const std::size_t seed_row = danger[i % danger.size()];
            const auto q = idx.neighbors_of(seed_row, k);
            const std::size_t partner = q.ids[rng.uniform_index(q.ids.size())];
            aug.push(agg::interpolate(d.features.row_values(seed_row),
                                      d.features.row_values(partner), rng.uniform01()),
                     static_cast<int>(c));
        }
    }
    return std::move(aug).finish();
}

namespace detail {

/// Largest-remainder apportionment of `total` across weights.
inline std::vector<std::size_t> largest_remainder(const std::vector<double>& weights,
                                                  std::size_t total) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> alloc(weights.size(), 0);
    if (sum <= 0.0 || total == 0) return alloc;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(total) * weights[i] / sum;
        alloc[i] = static_cast<std::size_t>(exact);
        assigned += alloc[i];
        remainders.emplace_back(-(exact - std::floor(exact)), i);
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::size_t j = 0; assigned < total; ++j, ++assigned) {
        alloc[remainders[j % remainders.size()].second]++;
    }
    return alloc;
}

}  // namespace detail

/// Adaptive allocation: instances with more other-class neighbors get
/// proportionally more synthetics (hardness-weighted interpolation).
inline Dataset adasyn(const Dataset& d, const OversamplePlan& plan, std::size_t k) {
    plan.check_against(d);
    if (k < 1) throw std::invalid_argument("adasyn: k must be >= 1");
    detail::Augmenter aug(d);
    Rng rng(Rng::derive(plan.seed, 0xada5));
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
        const std::size_t extra = plan.target_counts[c] - d.class_counts[c];
        if (extra == 0) continue;
        if (d.class_counts[c] < 2) {
            throw std::runtime_error("adasyn: class too small to find same-class neighbors");
        }
        const auto rows = d.rows_of_class(static_cast<int>(c));
        std::vector<double> hardness;
        hardness.reserve(rows.size());
        for (std::size_t row : rows) {
            const auto nn = nearest_rows_all_classes(d, row, k);
            std::size_t other = 0;
            for (std::size_t nb : nn) {
                if (d.labels[nb] != static_cast<int>(c)) ++other;
            }
            hardness.push_back(static_cast<double>(other) / static_cast<double>(nn.size()));
        }
        if (std::accumulate(hardness.begin(), hardness.end(), 0.0) == 0.0) {
            std::cerr << "adasyn: no mixed neighborhoods for class " << d.label_names[c]
                      << ", allocating uniformly\n";
            hardness.assign(rows.size(), 1.0);
        }
        const auto alloc = detail::largest_remainder(hardness, extra);
        const auto idx = build_index(d, static_cast<int>(c), k);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto q = idx.neighbors_of(rows[i], k);
            for (std::size_t g = 0; g < alloc[i]; ++g) {
                const std::size_t partner = q.ids[rng.uniform_index(q.ids.size())];
                aug.push(agg::interpolate(d.features.row_values(rows[i]),
                                          d.features.row_values(partner), rng.uniform01()),
                         static_cast<int>(c));
            }
        }
    }
    return std::move(aug).finish();
}

}  // namespace autosmote
