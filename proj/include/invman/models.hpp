#pragma once

#include "invman/linear_data.hpp"
#include "invman/series.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace invman {

enum class Family {
    StandardMapK,
    FrenkelKontorova,
    HeisenbergXY,
    Froeschle,
    McMillan,
    RationalExample,
};

std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

// theta_2 - 2 theta_1 + theta_0 - sum_j C_j sin(j theta_1)
struct StandardMapParams {
    std::vector<double> C;  // C_1..C_K
};

// sum_L gamma_L (theta_{k+L} - 2 theta_k + theta_{k-L}) - delta sum_j C_j sin(j theta_k)
struct FrenkelKontorovaParams {
    std::vector<double> gamma;  // gamma_1..gamma_N
    double delta = 0.0;
    std::vector<double> C;  // C_1..C_K
};

// sin(theta_2 - theta_1) + sin(theta_0 - theta_1) - epsilon sin(theta_1)
struct HeisenbergXYParams {
    double epsilon = 0.0;
};

// theta_2 - 2 theta_1 + theta_0 + grad W(theta_1) in R^2 with
// W(x) = a cos(2 pi x_1) + b cos(2 pi x_2) + c cos(2 pi (x_1 - x_2))
struct FroeschleParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// theta_2 + theta_0 - 2 cosh(eta) theta_1 / (theta_1^2 + 1)
struct McMillanParams {
    double eta = 1.0;
};

// (f(theta_1) - theta_0) f'(theta_1) + theta_1 - f(theta_2), f(x) = 2x / (1 - x)
struct RationalExampleParams {};

using FamilyParams = std::variant<StandardMapParams, FrenkelKontorovaParams, HeisenbergXYParams,
                                  FroeschleParams, McMillanParams, RationalExampleParams>;

/// One builtin difference-equation family together with its parameters.
/// Immutable; the fixed point is the origin for every family.
class ModelSpec {
public:
    explicit ModelSpec(FamilyParams params);

    Family family() const noexcept { return static_cast<Family>(params_.index()); }
    const FamilyParams& params() const noexcept { return params_; }
    template <class T>
    const T& as() const {
        return std::get<T>(params_);
    }

    /// Equation order N (number of arguments of Z minus one).
    int order() const;
    /// State dimension d.
    int dim() const;
    bool reversed() const noexcept { return reversed_; }
    Vec fixed_point() const { return Vec::Zero(dim()); }

    /// Families derived from a variational principle (spectrum closed under 1/lambda).
    bool lagrangian() const;

    /// Scalar parameter names usable for continuation, e.g. gamma_3, delta, C_1.
    std::vector<std::string> parameter_names() const;
    double parameter(std::string_view name) const;
    ModelSpec with_parameter(std::string_view name, double value) const;

    /// "family key=value ..." echo used in report headers.
    std::string describe() const;

    friend ModelSpec reverse(const ModelSpec& m);

private:
    FamilyParams params_;
    bool reversed_ = false;
};

/// Representative parameter set per family.
ModelSpec default_model(Family f);

/// Z(theta_0, ..., theta_N) as a pointwise function.
Vec residual_pointwise(const ModelSpec& m, std::span<const Vec> theta);

/// Truncation of z -> Z(P(z), P(lambda z), ..., P(lambda^N z)).
TruncatedSeries residual_of_series(const ModelSpec& m, const TruncatedSeries& P, double lambda);

/// Analytic B_i = dZ/dtheta_i at the origin.
LinearData closed_linear_data(const ModelSpec& m);

/// Model with Z~(theta_0..theta_N) = Z(theta_N..theta_0).
ModelSpec reverse(const ModelSpec& m);

struct Oracle {
    std::function<Vec(double)> P;
    double lambda;
};

/// Closed-form parameterization, available for mcmillan and rational_example.
std::optional<Oracle> oracle(const ModelSpec& m);

/// Z written as sum_i A_i theta_i + sum_t w_t sin(<form_t, theta>), available
/// for the trigonometric families. form_t is (N+1) x d; row i acts on theta_i.
struct TrigForm {
    struct Term {
        Mat form;
        Vec weight;
    };
    std::vector<Mat> linear;
    std::vector<Term> terms;
};

std::optional<TrigForm> trig_form(const ModelSpec& m);

}  // namespace invman
