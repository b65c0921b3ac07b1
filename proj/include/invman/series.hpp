#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace invman {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Degree-n truncation of an analytic map z -> P(z) in R^d.
///
/// Coefficients are stored densely, k-major: entry (k, i) is component i of
/// the coefficient of z^k. Values are immutable once built; every operation
/// below returns a fresh series.
class TruncatedSeries {
public:
    /// Zero series of the given codomain dimension and order.
    TruncatedSeries(int dim, int order);

    static TruncatedSeries scalar(std::vector<double> coeffs);
    static TruncatedSeries from_coeffs(std::span<const Vec> coeffs);
    /// Stacks scalar series (all of one order) into a vector-valued series.
    static TruncatedSeries stack(std::span<const TruncatedSeries> components);

    int dim() const noexcept { return dim_; }
    int order() const noexcept { return order_; }

    double at(int k, int component = 0) const { return c_[index(k, component)]; }
    Vec coeff(int k) const;
    std::span<const double> data() const noexcept { return c_; }

    /// Scalar series holding one codomain component.
    TruncatedSeries component(int i) const;
    /// Same coefficients cut (or zero-padded) to a new order.
    TruncatedSeries with_order(int order) const;
    /// Copy with coefficient k replaced.
    TruncatedSeries with_coeff(int k, const Vec& value) const;
    /// Order n+1 copy with `value` as the new top coefficient.
    TruncatedSeries appended(const Vec& value) const;

    /// max over k of the max-norm of coefficient k.
    double max_coeff_norm() const;

    bool operator==(const TruncatedSeries&) const = default;

private:
    TruncatedSeries(int dim, int order, std::vector<double> c);
    std::size_t index(int k, int component) const;

    int dim_;
    int order_;
    std::vector<double> c_;
};

/// sin and cos of a scalar series, kept together so they can be extended one
/// coefficient at a time.
struct TrigCache {
    TruncatedSeries base;
    TruncatedSeries sin_series;
    TruncatedSeries cos_series;

    int order() const noexcept { return base.order(); }
};

// Mixed orders truncate to the smaller one.
TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries scaled(const TruncatedSeries& a, double factor);
/// Adds `value` to the constant coefficient of a scalar series.
TruncatedSeries add_constant(const TruncatedSeries& a, double value);

/// Cauchy product of two scalar series.
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);

/// Coefficients of z -> a(lambda z).
TruncatedSeries scale_arg(const TruncatedSeries& a, double lambda);

/// Horner evaluation.
Vec evaluate(const TruncatedSeries& a, double z);
double evaluate_scalar(const TruncatedSeries& a, double z);

/// Multiplicative inverse of a scalar series with nonzero constant term.
TruncatedSeries reciprocal(const TruncatedSeries& a);

TrigCache sin_cos(const TruncatedSeries& a);
/// Appends a_{n+1} and the matching sin/cos coefficients. Lower coefficients
/// are untouched.
TrigCache trig_extend(const TrigCache& cache, double new_coeff);

}  // namespace invman
