#pragma once

#include "invman/linear_data.hpp"
#include "invman/models.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace invman {

using Complex = std::complex<double>;

/// Thresholds used by the linear analysis. Every report carries a copy.
struct SpectralTolerances {
    double unit = 1e-9;        // band around |lambda| = 1
    double zero = 1e-9;        // |lambda| at or below this counts as a zero root
    double resonance = 1e-8;   // relative gap required between lambda^n and the spectrum
    double fd_step = 1e-6;     // central-difference step for numeric partials
    double cluster = 1e-7;     // roots closer than this share a multiplicity
    double coeff_noise = 1e-13;  // relative size below which char-poly coefficients are zero
};

enum class RootClass { Zero, Stable, Unstable, UnitCircle };

std::string_view to_string(RootClass c);

struct SpectralRoot {
    Complex value;
    int multiplicity = 1;
    RootClass cls = RootClass::Stable;
};

struct SpectrumReport {
    std::vector<double> char_poly;  // ascending powers of lambda
    std::vector<SpectralRoot> roots;
    bool hyperbolic = false;
    bool non_singular = false;
    int singularity_exponent = 0;
    SpectralTolerances tol;
};

/// A chosen stable eigenvalue with its eigenvector (unit max-norm).
struct Eigensolution {
    double lambda = 0.0;
    Vec eigvec;
    bool non_resonant = false;
    int n_max = 0;
};

/// Which stable eigenvalue to follow: the slow one (largest modulus) or an
/// index into the stable real simple roots sorted by decreasing modulus.
struct Branch {
    std::optional<int> index;

    static Branch slow() { return {}; }
    static Branch at(int i) { return {i}; }
};

LinearData numeric_partials(const ModelSpec& model, const Vec& fixed_point,
                            const SpectralTolerances& tol = {});

/// det(sum_i lambda^i B_i) by evaluation at N d + 1 Chebyshev nodes and
/// interpolation. Coefficients at the noise floor are set to zero.
std::vector<double> char_poly(const LinearData& lin, const SpectralTolerances& tol = {});

/// All complex roots with multiplicity. Trailing zero coefficients give exact
/// zero roots; leading zeros are dropped.
std::vector<Complex> poly_roots(std::span<const double> coeffs);

Complex poly_eval(std::span<const double> coeffs, Complex x);

SpectrumReport classify(std::vector<double> char_poly, std::span<const Complex> roots,
                        const SpectralTolerances& tol = {});

/// char_poly, poly_roots and classify in sequence. Simple real roots are
/// refined against det T(lambda) evaluated directly.
SpectrumReport analyze(const LinearData& lin, const SpectralTolerances& tol = {});

struct ResonanceCheck {
    bool non_resonant = false;
    int n_max = 0;
};

ResonanceCheck nonresonance_check(double lambda, const SpectrumReport& report);

struct ChebyshevReduction {
    struct Pair {
        double omega;
        double stable;
        double unstable;
        bool slow = false;
    };
    std::vector<double> r_poly;  // ascending powers of omega
    std::vector<Complex> omega_roots;
    std::vector<Pair> lambda_pairs;

    double slow_lambda() const;
};

/// r(omega) = sum_L gamma_L (T_L(omega) - 1) - W''(0) / 2 with W''(0) = delta sum_j j C_j.
ChebyshevReduction chebyshev_reduce(const FrenkelKontorovaParams& fk);

/// Null vector of T(lambda), max-norm 1 with its largest entry positive.
Vec eigenvector(double lambda, const LinearData& lin);

/// Stable, real, simple, nonzero roots sorted by decreasing modulus.
std::vector<double> stable_branches(const SpectrumReport& report);

/// Picks a branch and attaches eigenvector and non-resonance verdict.
Eigensolution select_eigensolution(const LinearData& lin, const SpectrumReport& report,
                                   const Branch& branch);

}  // namespace invman
