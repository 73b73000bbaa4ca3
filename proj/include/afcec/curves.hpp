#pragma once

#include "afcec/dataset.hpp"
#include "afcec/numerics.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace afcec {

enum class BasisKind { constant, linear, monomial, custom };

/// One basis function R^{d-1} -> R. Polynomial kinds carry an exponent per input.
struct BasisFunction {
    BasisKind kind = BasisKind::constant;
    std::vector<int> exponents;
    std::function<double(std::span<const double>)> custom;
    std::string label;

    static BasisFunction constant(std::size_t input_dim);
    static BasisFunction linear(std::size_t input_dim, std::size_t coordinate);
    static BasisFunction monomial(std::vector<int> exponents);
    static BasisFunction user(std::string label, std::function<double(std::span<const double>)> fn);

    double operator()(std::span<const double> x) const;
};

/// Finite basis spanning the curve class. Always contains the constant and every
/// coordinate projection, so plain Gaussians stay representable.
class FunctionFamily {
public:
    FunctionFamily(std::size_t input_dim, std::vector<BasisFunction> basis, std::string name = "custom");

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t size() const noexcept { return basis_.size(); }
    const std::vector<BasisFunction>& basis() const noexcept { return basis_; }
    const std::string& name() const noexcept { return name_; }

    /// True when every basis function is a polynomial term (serializable).
    bool is_polynomial() const;

    void evaluate(std::span<const double> x, std::span<double> out) const;

private:
    std::size_t input_dim_;
    std::vector<BasisFunction> basis_;
    std::string name_;
};

enum class FamilyKind { linear, quadratic, cubic };

FamilyKind parse_family_kind(std::string_view text);
std::string_view to_string(FamilyKind kind);

/// linear = {1, x_i}; quadratic adds every degree-2 monomial; cubic adds the
/// univariate cubes x_i^3 on top of the quadratic basis.
FunctionFamily builtin_family(FamilyKind kind, std::size_t input_dim);

/// Point x with coordinate `axis` removed.
std::vector<double> drop_coordinate(std::span<const double> x, std::size_t axis);

/// A least-squares curve: f(x) = sum_j coeffs_j * basis_j(x).
class CurveFit {
public:
    CurveFit(std::shared_ptr<const FunctionFamily> family, Vector coeffs, double sse);

    const FunctionFamily& family() const noexcept { return *family_; }
    const std::shared_ptr<const FunctionFamily>& family_ptr() const noexcept { return family_; }
    const Vector& coeffs() const noexcept { return coeffs_; }
    double sse() const noexcept { return sse_; }

    double evaluate(std::span<const double> explanatory) const;

private:
    std::shared_ptr<const FunctionFamily> family_;
    Vector coeffs_;
    double sse_;
};

/// Regresses coordinate `axis` of X on the family evaluated at the remaining coordinates.
CurveFit fit_curve(const Dataset& x, std::size_t axis, std::shared_ptr<const FunctionFamily> family);

}  // namespace afcec
