#include "invman/linear_data.hpp"

#include "invman/errors.hpp"

#include <cmath>

namespace invman {

void LinearData::validate() const {
    if (order < 0 || dim < 1 || static_cast<int>(B.size()) != order + 1) {
        throw Error(ErrorKind::Usage, "linear data must hold N+1 matrices");
    }
    for (const auto& b : B) {
        if (b.rows() != dim || b.cols() != dim) {
            throw Error(ErrorKind::Usage, "linear data matrices must be d x d");
        }
        if (!b.allFinite()) throw Error(ErrorKind::Usage, "linear data must be finite");
    }
}

Mat t_matrix(double mu, const LinearData& lin) {
    // Horner in mu over the matrix coefficients.
    Mat t = lin.B.back();
    for (int i = lin.order - 1; i >= 0; --i) t = t * mu + lin.B[static_cast<std::size_t>(i)];
    return t;
}

double t_magnitude(double mu, const LinearData& lin) {
    double total = 0.0;
    double power = 1.0;
    for (const auto& b : lin.B) {
        total += power * b.cwiseAbs().rowwise().sum().maxCoeff();
        power *= std::abs(mu);
    }
    return total;
}

}  // namespace invman
