#include "afcec/numerics.hpp"

#include "afcec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

namespace afcec {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("Matrix-vector product: shape mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix symmetrize(const Matrix& m) {
    if (!m.is_square()) throw std::invalid_argument("symmetrize: matrix is not square");
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s(i, i) = m(i, i);
        for (std::size_t j = 0; j < i; ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

double determinant(const Matrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant: matrix is not square");
    const std::size_t n = m.rows();
    Matrix lu = m;
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > best) {
                best = std::abs(lu(i, k));
                pivot = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
            det = -det;
        }
        const double diag = lu(k, k);
        det *= diag;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = lu(i, k) / diag;
            if (factor == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
        }
    }
    return det;
}

Cholesky::Cholesky(const Matrix& a) : lower_(a.rows(), a.cols()) {
    if (!a.is_square()) throw std::invalid_argument("Cholesky: matrix is not square");
    const std::size_t n = a.rows();
    min_pivot_ = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= lower_(j, k) * lower_(j, k);
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw NotPositiveDefinite("Cholesky: non-positive pivot at index " + std::to_string(j));
        }
        const double ljj = std::sqrt(diag);
        lower_(j, j) = ljj;
        min_pivot_ = std::min(min_pivot_, diag);
        log_det_ += 2.0 * std::log(ljj);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
            lower_(i, j) = s / ljj;
        }
    }
}

Vector Cholesky::solve(const Vector& b) const {
    const std::size_t n = dim();
    if (b.size() != n) throw std::invalid_argument("Cholesky::solve: dimension mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * y[k];
        y[i] = s / lower_(i, i);
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * x[k];
        x[ii] = s / lower_(ii, ii);
    }
    return x;
}

double Cholesky::mahalanobis_squared(std::span<const double> v) const {
    const std::size_t n = dim();
    // Forward substitution L·z = v; vᵀA⁻¹v = ‖z‖².
    double buffer[16];
    std::vector<double> heap;
    double* z = buffer;
    if (n > 16) {
        heap.resize(n);
        z = heap.data();
    }
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = v[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * z[k];
        z[i] = s / lower_(i, i);
        q += z[i] * z[i];
    }
    return q;
}

Vector solve_spd(const Matrix& a, const Vector& b) { return Cholesky(a).solve(b); }

namespace {

Vector apply_design_transpose(const Matrix& design, const Vector& scale, const Vector& residual) {
    Vector g(design.cols());
    for (std::size_t l = 0; l < design.rows(); ++l) {
        const auto row = design.row(l);
        for (std::size_t j = 0; j < design.cols(); ++j) g[j] += row[j] * residual[l];
    }
    for (std::size_t j = 0; j < g.size(); ++j) g[j] *= scale[j];
    return g;
}

}  // namespace

Vector least_squares(const Matrix& design, const Vector& target) {
    const std::size_t n = design.rows();
    const std::size_t b = design.cols();
    if (target.size() != n) throw std::invalid_argument("least_squares: target length mismatch");
    if (b == 0) throw std::invalid_argument("least_squares: empty design");
    if (n < b) throw RankDeficient("least_squares: fewer rows than basis functions");

    Vector scale(b);
    for (std::size_t j = 0; j < b; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += design(l, j) * design(l, j);
        scale[j] = s > 0.0 ? 1.0 / std::sqrt(s) : 1.0;
    }

    Matrix normal(b, b);
    for (std::size_t l = 0; l < n; ++l) {
        const auto row = design.row(l);
        for (std::size_t i = 0; i < b; ++i) {
            const double ri = row[i] * scale[i];
            for (std::size_t j = 0; j <= i; ++j) normal(i, j) += ri * row[j] * scale[j];
        }
    }
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < i; ++j) normal(j, i) = normal(i, j);

    const double ridge = 1e-10 * normal.trace();
    for (std::size_t i = 0; i < b; ++i) normal(i, i) += ridge;

    std::optional<Cholesky> chol;
    try {
        chol.emplace(normal);
    } catch (const NotPositiveDefinite&) {
        throw RankDeficient("least_squares: regularized normal matrix is singular");
    }

    Vector scaled(b);
    Vector residual = target;
    constexpr int kRefinementSweeps = 3;
    for (int sweep = 0; sweep <= kRefinementSweeps; ++sweep) {
        const Vector step = chol->solve(apply_design_transpose(design, scale, residual));
        for (std::size_t j = 0; j < b; ++j) scaled[j] += step[j];
        for (std::size_t l = 0; l < n; ++l) {
            const auto row = design.row(l);
            double fit = 0.0;
            for (std::size_t j = 0; j < b; ++j) fit += row[j] * scale[j] * scaled[j];
            residual[l] = target[l] - fit;
        }
    }

    Vector coeffs(b);
    for (std::size_t j = 0; j < b; ++j) coeffs[j] = scaled[j] * scale[j];
    for (double c : coeffs)
        if (!std::isfinite(c)) throw RankDeficient("least_squares: non-finite coefficients");
    return coeffs;
}

std::vector<double> simpson_weights(double lo, double hi, int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("Simpson rule needs an even panel count >= 2");
    const double h = (hi - lo) / n;
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        double c = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[static_cast<std::size_t>(i)] = c * h / 3.0;
    }
    return w;
}

double simpson_2d(const std::function<double(double, double)>& f, double xlo, double xhi,
                  double ylo, double yhi, int n) {
    const auto wx = simpson_weights(xlo, xhi, n);
    const auto wy = simpson_weights(ylo, yhi, n);
    const double hx = (xhi - xlo) / n;
    const double hy = (yhi - ylo) / n;
    double total = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = xlo + i * hx;
        double row = 0.0;
        for (int j = 0; j <= n; ++j) row += wy[static_cast<std::size_t>(j)] * f(x, ylo + j * hy);
        total += wx[static_cast<std::size_t>(i)] * row;
    }
    return total;
}

}  // namespace afcec
