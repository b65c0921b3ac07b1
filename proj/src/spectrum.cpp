#include "invman/spectrum.hpp"

#include "invman/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace invman {

namespace {

Complex poly_derivative_eval(std::span<const double> a, Complex x, int order) {
    // order-th derivative divided by order!, i.e. sum_i binom(i, order) a_i x^(i - order).
    Complex acc = 0.0;
    for (int i = static_cast<int>(a.size()) - 1; i >= order; --i) {
        double binom = 1.0;
        for (int t = 0; t < order; ++t) binom = binom * (i - t) / (t + 1);
        acc = acc * x + binom * a[static_cast<std::size_t>(i)];
    }
    return acc;
}

double poly_abs_scale(std::span<const double> a, double r, int order) {
    double acc = 0.0;
    for (int i = static_cast<int>(a.size()) - 1; i >= order; --i) {
        double binom = 1.0;
        for (int t = 0; t < order; ++t) binom = binom * (i - t) / (t + 1);
        acc = acc * r + binom * std::abs(a[static_cast<std::size_t>(i)]);
    }
    return acc;
}

Complex newton_polish(std::span<const double> a, Complex x) {
    Complex best = x;
    double best_res = std::abs(poly_eval(a, x));
    for (int it = 0; it < 6 && best_res > 0.0; ++it) {
        const Complex d = poly_derivative_eval(a, x, 1);
        if (d == 0.0) break;
        x -= poly_eval(a, x) / d;
        const double res = std::abs(poly_eval(a, x));
        if (res < best_res) {
            best = x;
            best_res = res;
        }
    }
    return best;
}

// Groups roots that sit within a loose radius, then accepts a group as one
// multiple root only if the polynomial and its first m-1 derivatives vanish
// at the group centroid.
std::vector<Complex> merge_clusters(std::span<const double> a, std::vector<Complex> roots) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double radius = 1e-3 * std::max(1.0, std::abs(roots[i]));
            if (std::abs(roots[i] - roots[j]) < radius) parent[find(i)] = find(j);
        }
    }
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

    std::vector<Complex> out;
    out.reserve(n);
    for (const auto& g : groups) {
        if (g.empty()) continue;
        if (g.size() == 1) {
            out.push_back(newton_polish(a, roots[g[0]]));
            continue;
        }
        Complex centroid = 0.0;
        for (auto i : g) centroid += roots[i];
        centroid /= static_cast<double>(g.size());
        bool multiple = true;
        for (int j = 0; j < static_cast<int>(g.size()) && multiple; ++j) {
            const double scale = poly_abs_scale(a, std::abs(centroid), j);
            multiple = std::abs(poly_derivative_eval(a, centroid, j)) <= 1e-12 * scale;
        }
        for (auto i : g) out.push_back(multiple ? centroid : roots[i]);
    }
    return out;
}

double det_direct(double x, const LinearData& lin) { return t_matrix(x, lin).determinant(); }

}  // namespace

std::string_view to_string(RootClass c) {
    switch (c) {
        case RootClass::Zero: return "zero";
        case RootClass::Stable: return "stable";
        case RootClass::Unstable: return "unstable";
        case RootClass::UnitCircle: return "unit";
    }
    return "unknown";
}

LinearData numeric_partials(const ModelSpec& model, const Vec& fixed_point,
                            const SpectralTolerances& tol) {
    const int n = model.order();
    const int d = model.dim();
    if (fixed_point.size() != d) throw Error(ErrorKind::Usage, "fixed point has wrong dimension");
    std::vector<Vec> theta(static_cast<std::size_t>(n) + 1, fixed_point);
    const double base = residual_pointwise(model, theta).lpNorm<Eigen::Infinity>();
    if (!(base <= 1e-10)) {
        throw Error(ErrorKind::NotFixedPoint,
                    "residual at the proposed fixed point is " + std::to_string(base));
    }
    LinearData lin{n, d, std::vector<Mat>(static_cast<std::size_t>(n) + 1, Mat::Zero(d, d))};
    const double h = tol.fd_step;
    for (int i = 0; i <= n; ++i) {
        for (int c = 0; c < d; ++c) {
            auto plus = theta;
            auto minus = theta;
            plus[static_cast<std::size_t>(i)][c] += h;
            minus[static_cast<std::size_t>(i)][c] -= h;
            lin.B[static_cast<std::size_t>(i)].col(c) =
                (residual_pointwise(model, plus) - residual_pointwise(model, minus)) / (2.0 * h);
        }
    }
    return lin;
}

std::vector<double> char_poly(const LinearData& lin, const SpectralTolerances& tol) {
    lin.validate();
    const int degree = lin.order * lin.dim;
    const int m = degree + 1;
    Mat vandermonde(m, m);
    Vec values(m);
    for (int j = 0; j < m; ++j) {
        const double x = std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * m));
        double p = 1.0;
        for (int i = 0; i < m; ++i) {
            vandermonde(j, i) = p;
            p *= x;
        }
        values[j] = det_direct(x, lin);
    }
    const Vec c = vandermonde.colPivHouseholderQr().solve(values);
    std::vector<double> coeffs(c.data(), c.data() + m);
    const double peak = c.cwiseAbs().maxCoeff();
    for (auto& v : coeffs) {
        if (std::abs(v) <= tol.coeff_noise * peak) v = 0.0;
    }
    return coeffs;
}

Complex poly_eval(std::span<const double> coeffs, Complex x) {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<Complex> poly_roots(std::span<const double> coeffs) {
    std::size_t hi = coeffs.size();
    while (hi > 0 && coeffs[hi - 1] == 0.0) --hi;
    if (hi == 0) throw Error(ErrorKind::DegenerateInput, "poly_roots: zero polynomial");
    std::size_t lo = 0;
    while (coeffs[lo] == 0.0) ++lo;

    std::vector<Complex> roots(lo, Complex{0.0, 0.0});
    const auto core = coeffs.subspan(lo, hi - lo);
    const int degree = static_cast<int>(core.size()) - 1;
    if (degree == 0) return roots;

    Mat companion = Mat::Zero(degree, degree);
    const double lead = core[static_cast<std::size_t>(degree)];
    for (int i = 0; i < degree; ++i) companion(0, i) = -core[static_cast<std::size_t>(degree - 1 - i)] / lead;
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Mat> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::DegenerateInput, "poly_roots: eigenvalue iteration failed");
    }
    std::vector<Complex> found(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + degree);
    for (auto r : merge_clusters(core, std::move(found))) roots.push_back(r);
    return roots;
}

SpectrumReport classify(std::vector<double> poly, std::span<const Complex> roots,
                        const SpectralTolerances& tol) {
    SpectrumReport report;
    report.char_poly = std::move(poly);
    report.tol = tol;
    report.hyperbolic = true;
    for (const auto& r : roots) {
        SpectralRoot sr{r, 0, RootClass::Stable};
        for (const auto& other : roots) {
            if (std::abs(other - r) <= tol.cluster) ++sr.multiplicity;
        }
        const double mod = std::abs(r);
        if (mod <= tol.zero) {
            sr.cls = RootClass::Zero;
            ++report.singularity_exponent;
        } else if (mod < 1.0 - tol.unit) {
            sr.cls = RootClass::Stable;
        } else if (mod > 1.0 + tol.unit) {
            sr.cls = RootClass::Unstable;
        } else {
            sr.cls = RootClass::UnitCircle;
            report.hyperbolic = false;
        }
        report.roots.push_back(sr);
    }
    report.non_singular = report.singularity_exponent == 0;
    return report;
}

SpectrumReport analyze(const LinearData& lin, const SpectralTolerances& tol) {
    auto poly = char_poly(lin, tol);
    auto roots = poly_roots(poly);
    for (auto& r : roots) {
        if (r.imag() != 0.0 || r == 0.0) continue;
        int copies = 0;
        for (const auto& other : roots) copies += (other == r);
        if (copies != 1) continue;
        // Newton on the directly evaluated determinant; slope from the interpolant.
        double x = r.real();
        double best = std::abs(det_direct(x, lin));
        for (int it = 0; it < 4 && best > 0.0; ++it) {
            const double slope = poly_derivative_eval(poly, x, 1).real();
            if (slope == 0.0) break;
            const double next = x - det_direct(x, lin) / slope;
            const double res = std::abs(det_direct(next, lin));
            if (!(res < best)) break;
            x = next;
            best = res;
        }
        r = x;
    }
    return classify(std::move(poly), roots, tol);
}

ResonanceCheck nonresonance_check(double lambda, const SpectrumReport& report) {
    const double mod = std::abs(lambda);
    if (!(mod < 1.0)) throw Error(ErrorKind::Usage, "nonresonance_check needs |lambda| < 1");
    if (mod == 0.0) throw Error(ErrorKind::Usage, "nonresonance_check needs lambda != 0");
    double min_nonzero = std::numeric_limits<double>::infinity();
    for (const auto& r : report.roots) {
        if (r.cls != RootClass::Zero) min_nonzero = std::min(min_nonzero, std::abs(r.value));
    }
    if (!std::isfinite(min_nonzero)) {
        throw Error(ErrorKind::Usage, "nonresonance_check: spectrum has no nonzero roots");
    }
    ResonanceCheck check{true, 1};
    double power = mod;
    while (!(power < min_nonzero)) {
        power *= mod;
        ++check.n_max;
    }
    double lambda_n = lambda;
    for (int n = 2; n <= check.n_max; ++n) {
        lambda_n *= lambda;
        for (const auto& r : report.roots) {
            if (r.cls == RootClass::Zero) continue;
            const double mu = std::abs(r.value);
            if (!(std::abs(Complex{lambda_n, 0.0} - r.value) > report.tol.resonance * (1.0 + mu))) {
                check.non_resonant = false;
            }
        }
    }
    return check;
}

double ChebyshevReduction::slow_lambda() const {
    for (const auto& p : lambda_pairs) {
        if (p.slow) return p.stable;
    }
    throw Error(ErrorKind::NoHyperbolicDirection, "no slow branch");
}

ChebyshevReduction chebyshev_reduce(const FrenkelKontorovaParams& fk) {
    const std::size_t n = fk.gamma.size();
    std::vector<double> r(n + 1, 0.0);
    // Monomial coefficients of T_0, T_1, ... via T_{L+1} = 2 w T_L - T_{L-1}.
    std::vector<double> prev{1.0};
    std::vector<double> cur{0.0, 1.0};
    double jc = 0.0;
    for (std::size_t j = 1; j <= fk.C.size(); ++j) jc += static_cast<double>(j) * fk.C[j - 1];
    for (std::size_t l = 1; l <= n; ++l) {
        const double g = fk.gamma[l - 1];
        for (std::size_t i = 0; i < cur.size(); ++i) r[i] += g * cur[i];
        r[0] -= g;
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    r[0] -= 0.5 * fk.delta * jc;

    ChebyshevReduction out;
    out.r_poly = r;
    out.omega_roots = poly_roots(r);
    for (const auto& w : out.omega_roots) {
        if (std::abs(w.imag()) > 1e-12 * std::max(1.0, std::abs(w))) continue;
        const double omega = w.real();
        if (!(std::abs(omega) > 1.0)) continue;
        const double root = std::sqrt(omega * omega - 1.0);
        const double big = omega > 0.0 ? omega + root : omega - root;
        out.lambda_pairs.push_back({omega, 1.0 / big, big, false});
    }
    if (out.lambda_pairs.empty()) {
        throw Error(ErrorKind::NoHyperbolicDirection,
                    "chebyshev_reduce: no real root of r with |omega| > 1");
    }
    auto slow = std::max_element(out.lambda_pairs.begin(), out.lambda_pairs.end(),
                                 [](const auto& a, const auto& b) {
                                     return std::abs(a.stable) < std::abs(b.stable);
                                 });
    slow->slow = true;
    return out;
}

Vec eigenvector(double lambda, const LinearData& lin) {
    lin.validate();
    const Mat t = t_matrix(lambda, lin);
    const double scale = std::max(t_magnitude(lambda, lin), std::numeric_limits<double>::min());
    Vec v;
    if (lin.dim == 1) {
        v = Vec::Ones(1);
    } else if (lin.dim == 2) {
        const double r0 = t.row(0).cwiseAbs().maxCoeff();
        const double r1 = t.row(1).cwiseAbs().maxCoeff();
        const auto row = r0 >= r1 ? t.row(0) : t.row(1);
        if (std::max(r0, r1) <= 1e-6 * scale) {
            throw Error(ErrorKind::NotAnEigenvalue,
                        "eigenvector: null space of T(lambda) is not one-dimensional");
        }
        v = Vec{{-row(1), row(0)}};
    } else {
        throw Error(ErrorKind::Usage, "eigenvector: only d <= 2 is supported");
    }
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v /= v[arg];
    const double residual = (t * v).lpNorm<Eigen::Infinity>() / scale;
    if (!(residual <= 1e-6)) {
        throw Error(ErrorKind::NotAnEigenvalue,
                    "T(" + std::to_string(lambda) + ") is numerically nonsingular (relative residual " +
                        std::to_string(residual) + ")");
    }
    return v;
}

std::vector<double> stable_branches(const SpectrumReport& report) {
    std::vector<double> out;
    for (const auto& r : report.roots) {
        if (r.cls != RootClass::Stable || r.multiplicity != 1) continue;
        if (std::abs(r.value.imag()) > 1e-10 * std::max(1.0, std::abs(r.value))) continue;
        out.push_back(r.value.real());
    }
    std::sort(out.begin(), out.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
    return out;
}

Eigensolution select_eigensolution(const LinearData& lin, const SpectrumReport& report,
                                   const Branch& branch) {
    const auto candidates = stable_branches(report);
    if (candidates.empty()) {
        throw Error(ErrorKind::NoStableRoot, "spectrum has no real simple stable eigenvalue");
    }
    double lambda = 0.0;
    if (branch.index) {
        const int i = *branch.index;
        if (i < 0 || i >= static_cast<int>(candidates.size())) {
            throw Error(ErrorKind::NoStableRoot,
                        "branch index " + std::to_string(i) + " out of range (" +
                            std::to_string(candidates.size()) + " stable roots)");
        }
        lambda = candidates[static_cast<std::size_t>(i)];
    } else {
        if (candidates.size() > 1 &&
            std::abs(std::abs(candidates[0]) - std::abs(candidates[1])) <= 1e-12) {
            throw Error(ErrorKind::AmbiguousBranch,
                        "slow branch is ambiguous: two stable roots share the largest modulus");
        }
        lambda = candidates.front();
    }
    const auto check = nonresonance_check(lambda, report);
    return Eigensolution{lambda, eigenvector(lambda, lin), check.non_resonant, check.n_max};
}

}  // namespace invman
