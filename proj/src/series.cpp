#include "invman/series.hpp"

#include "invman/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace invman {

namespace {

void require_scalar(const TruncatedSeries& a, const char* op) {
    if (a.dim() != 1) {
        throw Error(ErrorKind::Usage,
                    std::string(op) + ": expected a scalar series, got dim " +
                        std::to_string(a.dim()));
    }
}

void require_same_dim(const TruncatedSeries& a, const TruncatedSeries& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::Usage, std::string(op) + ": dimension mismatch (" +
                                          std::to_string(a.dim()) + " vs " +
                                          std::to_string(b.dim()) + ")");
    }
}

}  // namespace

TruncatedSeries::TruncatedSeries(int dim, int order)
    : TruncatedSeries(dim, order,
                      std::vector<double>(static_cast<std::size_t>(std::max(order, 0) + 1) *
                                              static_cast<std::size_t>(std::max(dim, 0)),
                                          0.0)) {}

TruncatedSeries::TruncatedSeries(int dim, int order, std::vector<double> c)
    : dim_(dim), order_(order), c_(std::move(c)) {
    if (dim < 1) throw Error(ErrorKind::Usage, "series dimension must be positive");
    if (order < 0) throw Error(ErrorKind::Usage, "series order must be non-negative");
}

TruncatedSeries TruncatedSeries::scalar(std::vector<double> coeffs) {
    if (coeffs.empty()) throw Error(ErrorKind::Usage, "series needs at least one coefficient");
    const int order = static_cast<int>(coeffs.size()) - 1;
    return TruncatedSeries(1, order, std::move(coeffs));
}

TruncatedSeries TruncatedSeries::from_coeffs(std::span<const Vec> coeffs) {
    if (coeffs.empty()) throw Error(ErrorKind::Usage, "series needs at least one coefficient");
    const auto dim = coeffs.front().size();
    std::vector<double> c;
    c.reserve(coeffs.size() * static_cast<std::size_t>(dim));
    for (const auto& v : coeffs) {
        if (v.size() != dim) throw Error(ErrorKind::Usage, "coefficient vectors differ in length");
        c.insert(c.end(), v.data(), v.data() + dim);
    }
    return TruncatedSeries(static_cast<int>(dim), static_cast<int>(coeffs.size()) - 1, std::move(c));
}

TruncatedSeries TruncatedSeries::stack(std::span<const TruncatedSeries> components) {
    if (components.empty()) throw Error(ErrorKind::Usage, "stack: no components");
    const int order = components.front().order();
    const int dim = static_cast<int>(components.size());
    TruncatedSeries out(dim, order);
    for (int i = 0; i < dim; ++i) {
        const auto& s = components[static_cast<std::size_t>(i)];
        require_scalar(s, "stack");
        if (s.order() != order) throw Error(ErrorKind::Usage, "stack: components differ in order");
        for (int k = 0; k <= order; ++k) out.c_[out.index(k, i)] = s.at(k);
    }
    return out;
}

std::size_t TruncatedSeries::index(int k, int component) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(component);
}

Vec TruncatedSeries::coeff(int k) const {
    return Eigen::Map<const Vec>(c_.data() + index(k, 0), dim_);
}

TruncatedSeries TruncatedSeries::component(int i) const {
    if (i < 0 || i >= dim_) throw Error(ErrorKind::Usage, "component index out of range");
    std::vector<double> c(static_cast<std::size_t>(order_) + 1);
    for (int k = 0; k <= order_; ++k) c[static_cast<std::size_t>(k)] = at(k, i);
    return TruncatedSeries(1, order_, std::move(c));
}

TruncatedSeries TruncatedSeries::with_order(int order) const {
    TruncatedSeries out(dim_, order);
    const int top = std::min(order, order_);
    std::copy_n(c_.begin(), static_cast<std::size_t>(top + 1) * static_cast<std::size_t>(dim_),
                out.c_.begin());
    return out;
}

TruncatedSeries TruncatedSeries::with_coeff(int k, const Vec& value) const {
    if (k < 0 || k > order_) throw Error(ErrorKind::Usage, "coefficient index out of range");
    if (value.size() != dim_) throw Error(ErrorKind::Usage, "coefficient has wrong dimension");
    TruncatedSeries out = *this;
    for (int i = 0; i < dim_; ++i) out.c_[index(k, i)] = value[i];
    return out;
}

TruncatedSeries TruncatedSeries::appended(const Vec& value) const {
    if (value.size() != dim_) throw Error(ErrorKind::Usage, "coefficient has wrong dimension");
    std::vector<double> c = c_;
    c.insert(c.end(), value.data(), value.data() + dim_);
    return TruncatedSeries(dim_, order_ + 1, std::move(c));
}

double TruncatedSeries::max_coeff_norm() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_dim(a, b, "add");
    TruncatedSeries out = a.with_order(std::min(a.order(), b.order()));
    std::vector<Vec> c;
    c.reserve(static_cast<std::size_t>(out.order()) + 1);
    for (int k = 0; k <= out.order(); ++k) c.push_back(a.coeff(k) + b.coeff(k));
    return TruncatedSeries::from_coeffs(c);
}

TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b) {
    return add(a, scaled(b, -1.0));
}

TruncatedSeries scaled(const TruncatedSeries& a, double factor) {
    std::vector<Vec> c;
    c.reserve(static_cast<std::size_t>(a.order()) + 1);
    for (int k = 0; k <= a.order(); ++k) c.push_back(factor * a.coeff(k));
    return TruncatedSeries::from_coeffs(c);
}

TruncatedSeries add_constant(const TruncatedSeries& a, double value) {
    require_scalar(a, "add_constant");
    std::vector<double> c(a.data().begin(), a.data().end());
    c[0] += value;
    return TruncatedSeries::scalar(std::move(c));
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_scalar(a, "mul");
    require_scalar(b, "mul");
    const int n = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += a.at(j) * b.at(k - j);
        c[static_cast<std::size_t>(k)] = s;
    }
    return TruncatedSeries::scalar(std::move(c));
}

TruncatedSeries scale_arg(const TruncatedSeries& a, double lambda) {
    std::vector<Vec> c;
    c.reserve(static_cast<std::size_t>(a.order()) + 1);
    double power = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        c.push_back(power * a.coeff(k));
        power *= lambda;
    }
    return TruncatedSeries::from_coeffs(c);
}

Vec evaluate(const TruncatedSeries& a, double z) {
    Vec acc = a.coeff(a.order());
    for (int k = a.order() - 1; k >= 0; --k) acc = acc * z + a.coeff(k);
    return acc;
}

double evaluate_scalar(const TruncatedSeries& a, double z) {
    require_scalar(a, "evaluate_scalar");
    double acc = a.at(a.order());
    for (int k = a.order() - 1; k >= 0; --k) acc = acc * z + a.at(k);
    return acc;
}

TruncatedSeries reciprocal(const TruncatedSeries& a) {
    require_scalar(a, "reciprocal");
    if (a.at(0) == 0.0) {
        throw Error(ErrorKind::SingularSeries, "reciprocal: constant term is zero");
    }
    const int n = a.order();
    const double inv0 = 1.0 / a.at(0);
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    b[0] = inv0;
    for (int k = 1; k <= n; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += a.at(j) * b[static_cast<std::size_t>(k - j)];
        b[static_cast<std::size_t>(k)] = -inv0 * s;
    }
    return TruncatedSeries::scalar(std::move(b));
}

TrigCache sin_cos(const TruncatedSeries& a) {
    require_scalar(a, "sin_cos");
    TrigCache cache{TruncatedSeries::scalar({a.at(0)}),
                    TruncatedSeries::scalar({std::sin(a.at(0))}),
                    TruncatedSeries::scalar({std::cos(a.at(0))})};
    for (int k = 1; k <= a.order(); ++k) cache = trig_extend(cache, a.at(k));
    return cache;
}

TrigCache trig_extend(const TrigCache& cache, double new_coeff) {
    const TruncatedSeries base = cache.base.appended(Vec::Constant(1, new_coeff));
    const int n = cache.order();
    // (n+1) S_{n+1} = sum_j C_{n-j} (j+1) a_{j+1}, and likewise for C with -S.
    double s = 0.0;
    double c = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double da = (j + 1) * base.at(j + 1);
        s += cache.cos_series.at(n - j) * da;
        c -= cache.sin_series.at(n - j) * da;
    }
    return TrigCache{base, cache.sin_series.appended(Vec::Constant(1, s / (n + 1))),
                     cache.cos_series.appended(Vec::Constant(1, c / (n + 1)))};
}

}  // namespace invman
