#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace afcec {

/// Dense real vector.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim, double value = 0.0) : data_(dim, value) {}
    Vector(std::initializer_list<double> values) : data_(values) {}
    explicit Vector(std::vector<double> values) : data_(std::move(values)) {}
    explicit Vector(std::span<const double> values) : data_(values.begin(), values.end()) {}

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> span() noexcept { return data_; }
    std::span<const double> span() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    bool operator==(const Vector&) const = default;

private:
    std::vector<double> data_;
};

/// Dense row-major matrix. Square instances hold covariances and normal matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t dim);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    double trace() const;
    Matrix transposed() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

/// Replaces m with (m + mᵀ)/2 so the result is exactly symmetric.
Matrix symmetrize(const Matrix& m);

/// Determinant by LU factorization with partial pivoting. Singular input gives 0.
double determinant(const Matrix& m);

/// Lower-triangular Cholesky factor L with L·Lᵀ = A.
///
/// Throws NotPositiveDefinite when a pivot is not strictly positive.
class Cholesky {
public:
    explicit Cholesky(const Matrix& a);

    std::size_t dim() const noexcept { return lower_.rows(); }
    const Matrix& lower() const noexcept { return lower_; }

    /// Smallest diagonal entry of L, squared. Tracks how close A is to singular.
    double min_pivot() const noexcept { return min_pivot_; }

    double log_determinant() const noexcept { return log_det_; }

    Vector solve(const Vector& b) const;

    /// Returns vᵀA⁻¹v using one forward substitution.
    double mahalanobis_squared(std::span<const double> v) const;

private:
    Matrix lower_;
    double min_pivot_ = 0.0;
    double log_det_ = 0.0;
};

Vector solve_spd(const Matrix& a, const Vector& b);

/// Least-squares coefficients c minimizing ‖target − design·c‖².
///
/// Columns are equilibrated to unit norm and the normal equations get a ridge
/// of 1e-10·trace; a few refinement sweeps against the unregularized residual
/// remove the ridge bias whenever the problem is well posed. Throws
/// RankDeficient when the regularized normal matrix is still singular.
Vector least_squares(const Matrix& design, const Vector& target);

/// Composite Simpson rule on [xlo,xhi]×[ylo,yhi] with n (even) panels per axis.
double simpson_2d(const std::function<double(double, double)>& f, double xlo, double xhi,
                  double ylo, double yhi, int n);

/// Composite Simpson weights (1,4,2,...,4,1)·h/3 for n (even) panels.
std::vector<double> simpson_weights(double lo, double hi, int n);

}  // namespace afcec
