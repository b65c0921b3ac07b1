#pragma once

#include "invman/linear_data.hpp"
#include "invman/models.hpp"
#include "invman/series.hpp"
#include "invman/spectrum.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace invman {

struct SolveConfig {
    int order = 100;
    std::optional<double> scale;  // empty: choose automatically
    Branch branch;
    int trial_order = 15;
    std::vector<double> sample_grid{-0.2, -0.1, -0.05, 0.0, 0.05, 0.1, 0.2};

    void validate() const;
};

struct ResidualSample {
    double z;
    double value;  // max-norm of the pointwise residual
};

struct SolveReport {
    TruncatedSeries series{1, 0};
    double lambda = 0.0;
    double scale = 0.0;
    double residual_series_max = 0.0;
    double residual_tolerance = 0.0;
    std::vector<ResidualSample> residual_samples;
    double coeff_max = 0.0;
    int coeff_argmax = 0;
    std::vector<std::string> notices;
};

/// Relative residual threshold applied after every solve.
inline constexpr double kSolveTolerance = 1e-9;
/// Guard on |det T(lambda^n)| relative to the size of the terms that build it.
inline constexpr double kResonanceGuard = 1e-12;
/// Largest modulus jump accepted between neighbouring continuation steps.
inline constexpr double kBranchJump = 0.5;

/// The next coefficient P_{n+1} given P of order n whose residual vanishes
/// through order n. Probes the residual with P_{n+1} = 0 and solves
/// T(lambda^{n+1}) x = -b.
Vec order_update(const ModelSpec& model, const Eigensolution& eig, const LinearData& lin,
                 const TruncatedSeries& P);

SolveReport solve(const ModelSpec& model, const Eigensolution& eig, const SolveConfig& cfg);

/// Scale for P_1 from a low-order trial run at scale 1. `notice` receives a
/// message when the trial coefficients are all zero.
double choose_scale(const ModelSpec& model, const Eigensolution& eig, int trial_order,
                    std::string* notice = nullptr);

TruncatedSeries residual_series(const ModelSpec& model, const TruncatedSeries& P, double lambda);

/// Where the stencil sits relative to z. OneSided: P(z), P(lambda z), ...,
/// P(lambda^N z). Centered: P(lambda^{-N/2} z), ..., P(lambda^{N/2} z), the
/// natural frame for symmetric lattice equations.
enum class ResidualFrame { OneSided, Centered };

/// Pointwise residual of the model on a grid, bypassing the series arithmetic.
std::vector<ResidualSample> residual_sample(const ModelSpec& model, const TruncatedSeries& P,
                                            double lambda, std::span<const double> grid,
                                            ResidualFrame frame = ResidualFrame::OneSided);

/// max over k of the max-norm of coefficient k.
double series_max(const TruncatedSeries& s);

struct ContinuationStep {
    double parameter;
    double lambda;
    int singularity_exponent;
    SolveReport report;
};

/// Solves along a parameter path, following the branch whose eigenvalue is
/// nearest to the previous step's.
std::vector<ContinuationStep> continuation(const ModelSpec& family, std::string_view parameter,
                                           std::span<const double> path, const SolveConfig& cfg);

/// sup over k <= count of |P_k (ref/scale_a)^k - Q_k (ref/scale_b)^k|, comparing
/// two solves at a common scale `ref`.
double normalized_distance(const SolveReport& a, const SolveReport& b, double ref, int count);

}  // namespace invman
