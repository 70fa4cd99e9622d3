#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace autosmote {

/// Dense row-major matrix of doubles. The numeric substrate for everything
/// in this library; operations that produce non-finite values throw rather
/// than letting NaN/Inf propagate.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("Matrix: dimensions must be positive");
        }
    }

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("Matrix: dimensions must be positive");
        }
        if (data_.size() != rows * cols) {
            throw std::invalid_argument("Matrix: data length does not match shape");
        }
    }

    /// 1 x n row vector.
    static Matrix row(const std::vector<double>& values) {
        return Matrix(1, values.size(), values);
    }

    /// n x 1 column vector.
    static Matrix column(const std::vector<double>& values) {
        return Matrix(values.size(), 1, values);
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        std::size_t r = rows.size();
        std::size_t c = rows.begin()->size();
        Matrix m(r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c) {
                throw std::invalid_argument("Matrix: ragged initializer");
            }
            for (double v : row) m.data_[i++] = v;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
    double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }

    std::vector<double> row_values(std::size_t r) const {
        return std::vector<double>(row_ptr(r), row_ptr(r) + cols_);
    }

    void set_row(std::size_t r, const std::vector<double>& values) {
        if (values.size() != cols_) {
            throw std::invalid_argument("Matrix::set_row: width mismatch");
        }
        for (std::size_t j = 0; j < cols_; ++j) at(r, j) = values[j];
    }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline void ensure_finite(const Matrix& m, const char* op) {
    if (!m.all_finite()) {
        throw std::runtime_error(std::string(op) + ": produced a non-finite value");
    }
}

inline double squared_distance(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double euclidean_distance(const double* a, const double* b, std::size_t n) {
    return std::sqrt(squared_distance(a, b, n));
}

}  // namespace autosmote
