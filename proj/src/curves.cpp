#include "afcec/curves.hpp"

#include "afcec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace afcec {

namespace {

std::string monomial_label(const std::vector<int>& exponents) {
    std::string s;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (exponents[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += "x" + std::to_string(i + 1);
        if (exponents[i] > 1) s += "^" + std::to_string(exponents[i]);
    }
    return s.empty() ? "1" : s;
}

bool is_projection(const BasisFunction& b, std::size_t coordinate) {
    if (b.kind == BasisKind::custom) return false;
    for (std::size_t i = 0; i < b.exponents.size(); ++i) {
        if (b.exponents[i] != (i == coordinate ? 1 : 0)) return false;
    }
    return true;
}

}  // namespace

BasisFunction BasisFunction::constant(std::size_t input_dim) {
    BasisFunction b;
    b.kind = BasisKind::constant;
    b.exponents.assign(input_dim, 0);
    b.label = "1";
    return b;
}

BasisFunction BasisFunction::linear(std::size_t input_dim, std::size_t coordinate) {
    BasisFunction b;
    b.kind = BasisKind::linear;
    b.exponents.assign(input_dim, 0);
    b.exponents.at(coordinate) = 1;
    b.label = monomial_label(b.exponents);
    return b;
}

BasisFunction BasisFunction::monomial(std::vector<int> exponents) {
    BasisFunction b;
    int degree = 0;
    for (int e : exponents) {
        if (e < 0) throw InvalidConfig("monomial exponents must be non-negative");
        degree += e;
    }
    b.kind = degree == 0 ? BasisKind::constant : (degree == 1 ? BasisKind::linear : BasisKind::monomial);
    b.exponents = std::move(exponents);
    b.label = monomial_label(b.exponents);
    return b;
}

BasisFunction BasisFunction::user(std::string label, std::function<double(std::span<const double>)> fn) {
    BasisFunction b;
    b.kind = BasisKind::custom;
    b.custom = std::move(fn);
    b.label = std::move(label);
    return b;
}

double BasisFunction::operator()(std::span<const double> x) const {
    if (kind == BasisKind::custom) return custom(x);
    double v = 1.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        for (int p = 0; p < exponents[i]; ++p) v *= x[i];
    }
    return v;
}

FunctionFamily::FunctionFamily(std::size_t input_dim, std::vector<BasisFunction> basis, std::string name)
    : input_dim_(input_dim), basis_(std::move(basis)), name_(std::move(name)) {
    if (input_dim_ == 0) throw InvalidConfig("function family needs input dimension >= 1");
    if (basis_.empty() || basis_.front().kind != BasisKind::constant) {
        throw InvalidConfig("function family must start with the constant function");
    }
    for (const auto& b : basis_) {
        if (b.kind == BasisKind::custom) {
            if (!b.custom) throw InvalidConfig("custom basis function is empty");
        } else if (b.exponents.size() != input_dim_) {
            throw InvalidConfig("basis exponent count does not match input dimension");
        }
    }
    for (std::size_t c = 0; c < input_dim_; ++c) {
        const bool found = std::any_of(basis_.begin(), basis_.end(),
                                       [&](const BasisFunction& b) { return is_projection(b, c); });
        if (!found) {
            throw InvalidConfig("function family lacks the projection onto coordinate " + std::to_string(c));
        }
    }
}

bool FunctionFamily::is_polynomial() const {
    return std::none_of(basis_.begin(), basis_.end(),
                        [](const BasisFunction& b) { return b.kind == BasisKind::custom; });
}

void FunctionFamily::evaluate(std::span<const double> x, std::span<double> out) const {
    for (std::size_t j = 0; j < basis_.size(); ++j) out[j] = basis_[j](x);
}

FamilyKind parse_family_kind(std::string_view text) {
    if (text == "linear") return FamilyKind::linear;
    if (text == "quadratic") return FamilyKind::quadratic;
    if (text == "cubic") return FamilyKind::cubic;
    throw InvalidConfig("unknown family '" + std::string(text) + "' (expected linear|quadratic|cubic)");
}

std::string_view to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::linear: return "linear";
        case FamilyKind::quadratic: return "quadratic";
        case FamilyKind::cubic: return "cubic";
    }
    return "linear";
}

FunctionFamily builtin_family(FamilyKind kind, std::size_t input_dim) {
    if (input_dim == 0) throw InvalidConfig("function family needs input dimension >= 1");
    std::vector<BasisFunction> basis;
    basis.push_back(BasisFunction::constant(input_dim));
    for (std::size_t i = 0; i < input_dim; ++i) basis.push_back(BasisFunction::linear(input_dim, i));
    if (kind == FamilyKind::quadratic || kind == FamilyKind::cubic) {
        for (std::size_t i = 0; i < input_dim; ++i) {
            for (std::size_t j = i; j < input_dim; ++j) {
                std::vector<int> e(input_dim, 0);
                ++e[i];
                ++e[j];
                basis.push_back(BasisFunction::monomial(std::move(e)));
            }
        }
    }
    if (kind == FamilyKind::cubic) {
        for (std::size_t i = 0; i < input_dim; ++i) {
            std::vector<int> e(input_dim, 0);
            e[i] = 3;
            basis.push_back(BasisFunction::monomial(std::move(e)));
        }
    }
    return FunctionFamily(input_dim, std::move(basis), std::string(to_string(kind)));
}

std::vector<double> drop_coordinate(std::span<const double> x, std::size_t axis) {
    std::vector<double> out;
    out.reserve(x.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (i != axis) out.push_back(x[i]);
    return out;
}

CurveFit::CurveFit(std::shared_ptr<const FunctionFamily> family, Vector coeffs, double sse)
    : family_(std::move(family)), coeffs_(std::move(coeffs)), sse_(sse) {
    if (!family_) throw std::invalid_argument("CurveFit: null family");
    if (coeffs_.size() != family_->size()) throw std::invalid_argument("CurveFit: coefficient count mismatch");
}

double CurveFit::evaluate(std::span<const double> explanatory) const {
    double v = 0.0;
    const auto& basis = family_->basis();
    for (std::size_t j = 0; j < basis.size(); ++j) v += coeffs_[j] * basis[j](explanatory);
    return v;
}

CurveFit fit_curve(const Dataset& x, std::size_t axis, std::shared_ptr<const FunctionFamily> family) {
    if (!family) throw std::invalid_argument("fit_curve: null family");
    const std::size_t d = x.dim();
    if (axis >= d) throw std::invalid_argument("fit_curve: axis out of range");
    if (family->input_dim() + 1 != d) throw InvalidConfig("fit_curve: family input dimension must be d-1");
    const std::size_t n = x.size();
    const std::size_t b = family->size();

    Matrix design(n, b);
    Vector target(n);
    std::vector<double> explanatory(d - 1);
    for (std::size_t l = 0; l < n; ++l) {
        const auto p = x.point(l);
        std::size_t k = 0;
        for (std::size_t i = 0; i < d; ++i)
            if (i != axis) explanatory[k++] = p[i];
        family->evaluate(explanatory, design.row(l));
        target[l] = p[axis];
    }

    Vector coeffs = least_squares(design, target);
    double sse = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        const auto row = design.row(l);
        double fit = 0.0;
        for (std::size_t j = 0; j < b; ++j) fit += row[j] * coeffs[j];
        const double r = target[l] - fit;
        sse += r * r;
    }
    return CurveFit(std::move(family), std::move(coeffs), sse);
}

}  // namespace afcec
