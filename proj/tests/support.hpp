#pragma once

#include "invman/linear_data.hpp"
#include "invman/series.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace invman::testing {

// Small hand-rolled generators for property tests. Seeds are fixed so a
// failing case can be replayed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::vector<double> coeffs(int order, double lo = -1.0, double hi = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(order) + 1);
        for (auto& x : c) x = uniform(lo, hi);
        return c;
    }

    TruncatedSeries scalar_series(int order, double lo = -1.0, double hi = 1.0) {
        return TruncatedSeries::scalar(coeffs(order, lo, hi));
    }

    TruncatedSeries vector_series(int dim, int order) {
        std::vector<Vec> cs;
        for (int k = 0; k <= order; ++k) {
            Vec v(dim);
            for (int i = 0; i < dim; ++i) v(i) = uniform(-1.0, 1.0);
            cs.push_back(v);
        }
        return TruncatedSeries::from_coeffs(cs);
    }

    Mat matrix(int rows, int cols) {
        Mat m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = uniform(-1.0, 1.0);
        return m;
    }

    LinearData linear_data(int order, int dim) {
        LinearData lin{order, dim, {}};
        for (int i = 0; i <= order; ++i) lin.B.push_back(matrix(dim, dim));
        return lin;
    }

private:
    std::mt19937_64 rng_;
};

inline double max_abs_diff(const TruncatedSeries& a, const TruncatedSeries& b) {
    double m = 0.0;
    const int top = std::min(a.order(), b.order());
    for (int k = 0; k <= top; ++k) m = std::max(m, (a.coeff(k) - b.coeff(k)).lpNorm<Eigen::Infinity>());
    return m;
}

}  // namespace invman::testing
