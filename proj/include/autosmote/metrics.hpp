#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "autosmote/matrix.hpp"

namespace autosmote::metrics {

struct ClassMetrics {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double accuracy = 0.0;
};

/// One-vs-rest counts per class with macro (unweighted) averaging.
/// Zero-denominator cells score 0 so rankings stay total.
inline MetricsReport compute(const std::vector<int>& preds, const std::vector<int>& truth,
                             std::size_t num_classes) {
    if (preds.size() != truth.size()) {
        throw std::invalid_argument("metrics::compute: length mismatch");
    }
    if (preds.empty()) throw std::invalid_argument("metrics::compute: empty input");
    MetricsReport r;
    r.per_class.resize(num_classes);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = preds[i];
        const int t = truth[i];
        if (p < 0 || t < 0 || static_cast<std::size_t>(p) >= num_classes ||
            static_cast<std::size_t>(t) >= num_classes) {
            throw std::invalid_argument("metrics::compute: label out of range");
        }
        if (p == t) {
            r.per_class[p].tp++;
            ++correct;
        } else {
            r.per_class[p].fp++;
            r.per_class[t].fn++;
        }
    }
    for (auto& c : r.per_class) {
        const double tp = static_cast<double>(c.tp);
        c.precision = c.tp + c.fp == 0 ? 0.0 : tp / static_cast<double>(c.tp + c.fp);
        c.recall = c.tp + c.fn == 0 ? 0.0 : tp / static_cast<double>(c.tp + c.fn);
        c.f1 = c.precision + c.recall == 0.0
                   ? 0.0
                   : 2.0 * c.precision * c.recall / (c.precision + c.recall);
        r.macro_precision += c.precision;
        r.macro_recall += c.recall;
        r.macro_f1 += c.f1;
    }
    r.macro_precision /= static_cast<double>(num_classes);
    r.macro_recall /= static_cast<double>(num_classes);
    r.macro_f1 /= static_cast<double>(num_classes);
    r.accuracy = static_cast<double>(correct) / static_cast<double>(preds.size());
    return r;
}

/// values[dataset][method]: one score per cell, empty when the method
/// failed on that dataset (failed cells rank behind every real value,
/// sharing the trailing positions by midrank).
using ScoreGrid = std::vector<std::vector<std::optional<double>>>;

/// Per-dataset ranks (1 = best, midrank ties) averaged over datasets.
inline std::vector<double> average_rank(const ScoreGrid& values) {
    if (values.empty() || values[0].empty()) {
        throw std::invalid_argument("average_rank: empty table");
    }
    const std::size_t methods = values[0].size();
    std::vector<double> total(methods, 0.0);
    for (const auto& dataset : values) {
        if (dataset.size() != methods) {
            throw std::invalid_argument("average_rank: ragged table");
        }
        // order present methods by value, best (largest) first
        std::vector<std::size_t> present;
        std::vector<std::size_t> missing;
        for (std::size_t m = 0; m < methods; ++m) {
            (dataset[m] ? present : missing).push_back(m);
        }
        std::sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
            if (*dataset[a] != *dataset[b]) return *dataset[a] > *dataset[b];
            return a < b;
        });
        std::vector<double> rank(methods, 0.0);
        std::size_t i = 0;
        while (i < present.size()) {
            std::size_t j = i;
            while (j + 1 < present.size() &&
                   *dataset[present[j + 1]] == *dataset[present[i]]) {
                ++j;
            }
            const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t k = i; k <= j; ++k) rank[present[k]] = shared;
            i = j + 1;
        }
        if (!missing.empty()) {
            const double first = static_cast<double>(present.size() + 1);
            const double last = static_cast<double>(methods);
            const double shared = (first + last) / 2.0;
            for (std::size_t m : missing) rank[m] = shared;
        }
        for (std::size_t m = 0; m < methods; ++m) total[m] += rank[m];
    }
    for (double& t : total) t /= static_cast<double>(values.size());
    return total;
}

/// Mean of the per-metric average ranks, the "overall rank" column.
inline std::vector<double> overall_rank(const std::vector<std::vector<double>>& per_metric) {
    if (per_metric.empty()) throw std::invalid_argument("overall_rank: empty input");
    std::vector<double> out(per_metric[0].size(), 0.0);
    for (const auto& metric : per_metric) {
        for (std::size_t m = 0; m < out.size(); ++m) out[m] += metric[m];
    }
    for (double& v : out) v /= static_cast<double>(per_metric.size());
    return out;
}

}  // namespace autosmote::metrics
