#pragma once

#include "afcec/numerics.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace afcec {

/// n points in R^d, stored row by row, with optional ground-truth labels.
class Dataset {
public:
    Dataset() = default;

    /// Builds from a flat row-major buffer of n·d finite values.
    Dataset(std::size_t d, std::vector<double> values, std::optional<std::vector<int>> labels = {});

    static Dataset from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return d_ == 0 ? 0 : values_.size() / d_; }
    std::size_t dim() const noexcept { return d_; }

    std::span<const double> point(std::size_t i) const { return {values_.data() + i * d_, d_}; }
    double at(std::size_t i, std::size_t j) const { return values_[i * d_ + j]; }

    /// Copy of coordinate j across all points.
    std::vector<double> column(std::size_t j) const;

    const std::vector<double>& values() const noexcept { return values_; }
    const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }

    Dataset subset(std::span<const std::size_t> indices) const;

    /// Point-wise mean and 1/n covariance.
    Vector mean() const;
    Matrix covariance() const;

private:
    std::size_t d_ = 0;
    std::vector<double> values_;
    std::optional<std::vector<int>> labels_;
};

}  // namespace afcec
