#include "afcec/dataset.hpp"

#include "afcec/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace afcec {

Dataset::Dataset(std::size_t d, std::vector<double> values, std::optional<std::vector<int>> labels)
    : d_(d), values_(std::move(values)), labels_(std::move(labels)) {
    if (d_ == 0) throw std::invalid_argument("Dataset: dimension must be positive");
    if (values_.size() % d_ != 0) throw std::invalid_argument("Dataset: value count not a multiple of d");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw ParseError(k / d_, k % d_, "non-finite coordinate");
        }
    }
    if (labels_ && labels_->size() != size()) throw std::invalid_argument("Dataset: label count mismatch");
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("Dataset::from_rows: no rows");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) throw std::invalid_argument("Dataset::from_rows: ragged rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return Dataset(d, std::move(flat));
}

std::vector<double> Dataset::column(std::size_t j) const {
    std::vector<double> c(size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = at(i, j);
    return c;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<double> flat;
    flat.reserve(indices.size() * d_);
    std::optional<std::vector<int>> sub_labels;
    if (labels_) sub_labels.emplace();
    for (std::size_t i : indices) {
        const auto p = point(i);
        flat.insert(flat.end(), p.begin(), p.end());
        if (labels_) sub_labels->push_back((*labels_)[i]);
    }
    Dataset out;
    out.d_ = d_;
    out.values_ = std::move(flat);
    out.labels_ = std::move(sub_labels);
    return out;
}

Vector Dataset::mean() const {
    Vector m(d_);
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d_; ++j) m[j] += at(i, j);
    for (std::size_t j = 0; j < d_; ++j) m[j] /= static_cast<double>(n);
    return m;
}

Matrix Dataset::covariance() const {
    const Vector m = mean();
    const std::size_t n = size();
    Matrix c(d_, d_);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d_; ++a) {
            const double da = at(i, a) - m[a];
            for (std::size_t b = 0; b <= a; ++b) c(a, b) += da * (at(i, b) - m[b]);
        }
    }
    for (std::size_t a = 0; a < d_; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            c(a, b) /= static_cast<double>(n);
            c(b, a) = c(a, b);
        }
    }
    return c;
}

}  // namespace afcec
