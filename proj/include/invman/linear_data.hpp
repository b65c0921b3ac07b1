#pragma once

#include "invman/series.hpp"

#include <vector>

namespace invman {

/// Partial derivatives B_i = d Z / d theta_i at a fixed point, i = 0..N.
struct LinearData {
    int order = 0;  // N
    int dim = 0;    // d
    std::vector<Mat> B;

    /// Checks shape (N+1 matrices of d x d) and finiteness.
    void validate() const;
};

/// T(mu) = sum_i mu^i B_i.
Mat t_matrix(double mu, const LinearData& lin);

/// sum_i |mu|^i ||B_i||_inf, the magnitude of the terms entering T(mu).
double t_magnitude(double mu, const LinearData& lin);

}  // namespace invman
