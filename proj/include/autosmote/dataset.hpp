#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "autosmote/matrix.hpp"
#include "autosmote/rng.hpp"

namespace autosmote {

/// Tabular classification data. Labels are dense indices in [0, C),
/// assigned in first-appearance order of the raw label strings. Missing
/// feature cells are held as NaN until impute_and_normalize runs.
struct Dataset {
    Matrix features;                        // N x f
    std::vector<int> labels;                // length N
    std::vector<std::size_t> class_counts;  // length C
    std::vector<std::string> feature_names;
    std::vector<std::string> label_names;

    std::size_t n() const { return labels.size(); }
    std::size_t f() const { return features.cols(); }
    std::size_t num_classes() const { return class_counts.size(); }

    /// Rows of one class, in row order.
    std::vector<std::size_t> rows_of_class(int cls) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) out.push_back(i);
        }
        return out;
    }

    Dataset select_rows(const std::vector<std::size_t>& rows) const {
        Dataset out;
        out.feature_names = feature_names;
        out.label_names = label_names;
        out.features = Matrix(rows.size(), f());
        out.labels.reserve(rows.size());
        out.class_counts.assign(num_classes(), 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < f(); ++j) {
                out.features.at(i, j) = features.at(rows[i], j);
            }
            out.labels.push_back(labels[rows[i]]);
            out.class_counts[labels[rows[i]]]++;
        }
        return out;
    }

    void validate() const {
        if (features.rows() != labels.size()) {
            throw std::logic_error("Dataset: feature/label row counts disagree");
        }
        std::size_t total = std::accumulate(class_counts.begin(), class_counts.end(),
                                            std::size_t{0});
        if (total != labels.size()) {
            throw std::logic_error("Dataset: class counts do not sum to N");
        }
        for (int y : labels) {
            if (y < 0 || static_cast<std::size_t>(y) >= class_counts.size()) {
                throw std::logic_error("Dataset: label index out of range");
            }
        }
    }
};

struct SplitPair {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
    double ratio = 0.0;
};

/// Per-feature training statistics: mean for imputation, min/max for
/// scaling. Fitted on training rows only.
struct NormStats {
    std::vector<double> mean;
    std::vector<double> min;
    std::vector<double> max;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

inline std::optional<double> parse_number(const std::string& cell) {
    const std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::runtime_error("load_csv: non-numeric cell '" + t + "'");
    }
    return value;
}

}  // namespace detail

/// Reads a comma-separated file with one header row. Non-label columns
/// must be numeric or empty (empty = missing, stored as NaN). Label
/// values map to indices in first-appearance order.
inline Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);
    auto header = detail::split_csv_line(line);
    for (auto& h : header) h = detail::trim(h);

    std::size_t label_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == label_column) {
            label_idx = j;
            break;
        }
    }
    if (label_idx == header.size()) {
        throw std::runtime_error("load_csv: label column '" + label_column + "' not found");
    }

    Dataset d;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != label_idx) d.feature_names.push_back(header[j]);
    }

    std::vector<double> values;
    std::unordered_map<std::string, int> label_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("load_csv: row " + std::to_string(line_no) +
                                     " has " + std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(header.size()));
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j == label_idx) {
                const std::string lab = detail::trim(cells[j]);
                if (lab.empty()) {
                    throw std::runtime_error("load_csv: empty label at row " +
                                             std::to_string(line_no));
                }
                auto [it, inserted] =
                    label_ids.emplace(lab, static_cast<int>(d.label_names.size()));
                if (inserted) {
                    d.label_names.push_back(lab);
                    d.class_counts.push_back(0);
                }
                d.labels.push_back(it->second);
                d.class_counts[it->second]++;
            } else {
                auto v = detail::parse_number(cells[j]);
                values.push_back(v ? *v : std::numeric_limits<double>::quiet_NaN());
            }
        }
    }
    if (d.labels.empty()) throw std::runtime_error("load_csv: no data rows in " + path);
    d.features = Matrix(d.labels.size(), d.feature_names.size(), std::move(values));
    d.validate();
    return d;
}

/// Mean-imputes missing cells and min-max scales every feature into
/// [0,1]. Without `stats` the input is treated as the training split and
/// statistics are fitted on it; with `stats` the (test) rows are mapped
/// through the training statistics and clamped into [0,1]. A constant
/// feature maps to 0 everywhere.
inline std::pair<Dataset, NormStats> impute_and_normalize(
    const Dataset& d, const std::optional<NormStats>& stats = std::nullopt) {
    const std::size_t n = d.n(), f = d.f();
    NormStats s;
    if (stats) {
        s = *stats;
        if (s.mean.size() != f) {
            throw std::invalid_argument("impute_and_normalize: stats width mismatch");
        }
    } else {
        s.mean.assign(f, 0.0);
        s.min.assign(f, 0.0);
        s.max.assign(f, 0.0);
        for (std::size_t j = 0; j < f; ++j) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = d.features.at(i, j);
                if (!std::isnan(v)) {
                    sum += v;
                    ++count;
                }
            }
            s.mean[j] = count > 0 ? sum / static_cast<double>(count) : 0.0;
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = 0; i < n; ++i) {
                double v = d.features.at(i, j);
                if (std::isnan(v)) v = s.mean[j];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            s.min[j] = lo;
            s.max[j] = hi;
        }
    }

    Dataset out = d;
    for (std::size_t j = 0; j < f; ++j) {
        const double range = s.max[j] - s.min[j];
        for (std::size_t i = 0; i < n; ++i) {
            double v = out.features.at(i, j);
            if (std::isnan(v)) v = s.mean[j];
            v = range > 0.0 ? (v - s.min[j]) / range : 0.0;
            out.features.at(i, j) = std::clamp(v, 0.0, 1.0);
        }
    }
    ensure_finite(out.features, "impute_and_normalize");
    return {std::move(out), std::move(s)};
}

/// Per-class shuffle with a seed-derived stream, first ceil(ratio * count)
/// rows to train. Deterministic in (d, ratio, seed).
inline SplitPair stratified_split(const Dataset& d, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw std::invalid_argument("stratified_split: ratio must be in (0,1)");
    }
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
        if (d.class_counts[c] < 2) {
            throw std::runtime_error("stratified_split: class '" + d.label_names[c] +
                                     "' has fewer than 2 instances");
        }
    }
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
        auto rows = d.rows_of_class(static_cast<int>(c));
        Rng rng(Rng::derive(seed, c));
        rng.shuffle(rows);
        const auto take = static_cast<std::size_t>(
            std::ceil(ratio * static_cast<double>(rows.size())));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            (i < take ? train_rows : test_rows).push_back(rows[i]);
        }
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    SplitPair pair;
    pair.train = d.select_rows(train_rows);
    pair.test = d.select_rows(test_rows);
    pair.seed = seed;
    pair.ratio = ratio;
    return pair;
}

/// Majority count over minority count.
inline double imbalance_ratio(const Dataset& d) {
    if (d.class_counts.empty()) throw std::invalid_argument("imbalance_ratio: no classes");
    auto [lo, hi] = std::minmax_element(d.class_counts.begin(), d.class_counts.end());
    if (*lo == 0) throw std::runtime_error("imbalance_ratio: empty class");
    return static_cast<double>(*hi) / static_cast<double>(*lo);
}

}  // namespace autosmote
