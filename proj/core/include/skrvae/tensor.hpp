#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "skrvae/errors.hpp"

namespace skr {

// Dense row-major matrix of 64-bit floats. Shape is fixed at construction;
// assignment replaces the whole value.
class Tensor {
public:
    Tensor() = default;
    Tensor(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Tensor scalar(double v) {
        Tensor t(1, 1);
        t.data_[0] = v;
        return t;
    }

    static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Tensor row_vector(std::span<const double> values);
    static Tensor col_vector(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::span<double> span() noexcept { return {data_.data(), data_.size()}; }
    std::span<const double> span() const noexcept { return {data_.data(), data_.size()}; }
    std::span<double> row_span(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row_span(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    bool same_shape(const Tensor& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool is_scalar() const noexcept { return rows_ == 1 && cols_ == 1; }
    std::string shape_str() const;

    void fill(double v) { data_.assign(data_.size(), v); }
    bool all_finite() const noexcept;

    // Exactly equal, element by element (used by determinism tests).
    bool bit_equal(const Tensor& o) const noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Throws DimensionError naming both shapes when they differ.
void require_same_shape(const Tensor& a, const Tensor& b, const char* op);

#ifndef NDEBUG
#define SKR_DEBUG_CHECK_FINITE(t, what)                                                  \
    do {                                                                                 \
        if (!(t).all_finite()) throw ::skr::NumericalError(std::string("non-finite ") + (what)); \
    } while (0)
#else
#define SKR_DEBUG_CHECK_FINITE(t, what) ((void)0)
#endif

} // namespace skr
