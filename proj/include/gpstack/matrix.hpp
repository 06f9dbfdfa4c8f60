#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gpstack/errors.hpp"

namespace gpstack {

// Dense row-major matrix of doubles. Deliberately minimal: the
// pipeline's matrices are small (hundreds of rows, tens of columns)
// and the tree code wants contiguous rows.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i * cols_ + j];
        return out;
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    void require_cols(std::size_t expected, const char* where) const {
        if (cols_ != expected) {
            throw DataError(std::string(where) + ": feature count mismatch, expected " +
                            std::to_string(expected) + " columns, got " + std::to_string(cols_));
        }
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace gpstack
