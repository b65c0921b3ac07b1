#include "invman/cli/verify.hpp"

#include "invman/cli/tsv.hpp"
#include "invman/errors.hpp"
#include "invman/solver.hpp"
#include "invman/spectrum.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace invman::cli {

namespace {

Eigensolution slow_branch(const ModelSpec& m) {
    const auto lin = closed_linear_data(m);
    return select_eigensolution(lin, analyze(lin), Branch::slow());
}

CheckResult check(std::string name, const std::function<std::string()>& body) {
    // body returns an empty string on success, a failure description otherwise
    CheckResult r{std::move(name), false, {}};
    try {
        r.detail = body();
        r.passed = r.detail.empty();
    } catch (const Error& e) {
        r.detail = std::string(to_string(e.kind())) + ": " + e.what();
    } catch (const std::exception& e) {
        r.detail = e.what();
    }
    return r;
}

std::string mcmillan_oracle() {
    const ModelSpec m(McMillanParams{1.0});
    SolveConfig cfg;
    cfg.order = 60;
    cfg.scale = 2.0 * std::sinh(1.0);
    const auto s = solve(m, slow_branch(m), cfg);
    const double amp = 2.0 * std::sinh(1.0);
    for (int k = 0; k <= cfg.order; ++k) {
        const double got = s.series.at(k);
        if (k % 2 == 0) {
            if (std::abs(got) > 1e-11) return "P_" + std::to_string(k) + " = " + format_double(got);
        } else {
            const double want = ((k / 2) % 2 == 0 ? 1.0 : -1.0) * amp;
            if (std::abs(got - want) > 1e-11 * amp) {
                return "P_" + std::to_string(k) + " = " + format_double(got);
            }
        }
    }
    return {};
}

std::string rational_oracle() {
    const ModelSpec m(RationalExampleParams{});
    SolveConfig cfg;
    cfg.order = 100;
    cfg.scale = 1.0;
    const auto s = solve(m, slow_branch(m), cfg);
    for (int k = 1; k <= cfg.order; ++k) {
        if (std::abs(s.series.at(k) - 1.0) > 1e-10) {
            return "P_" + std::to_string(k) + " = " + format_double(s.series.at(k));
        }
    }
    if (s.residual_series_max > 1e-10) {
        return "residual series max " + format_double(s.residual_series_max);
    }
    return {};
}

std::string scale_covariance() {
    for (int f = 0; f <= static_cast<int>(Family::RationalExample); ++f) {
        const ModelSpec m = default_model(static_cast<Family>(f));
        const auto eig = slow_branch(m);
        SolveConfig cfg;
        cfg.order = 60;
        cfg.scale = choose_scale(m, eig, cfg.trial_order);
        const auto a = solve(m, eig, cfg);
        cfg.scale = 2.0 * *cfg.scale;
        const auto b = solve(m, eig, cfg);
        for (int k = 0; k <= cfg.order; ++k) {
            const Vec want = a.series.coeff(k) * std::ldexp(1.0, k);
            const double err = (b.series.coeff(k) - want).lpNorm<Eigen::Infinity>();
            if (err > 1e-12 * want.lpNorm<Eigen::Infinity>()) {
                return std::string(family_name(m.family())) + " differs at k=" + std::to_string(k);
            }
        }
    }
    return {};
}

std::string pythagorean_identity() {
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> order(0, 50);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> c(static_cast<std::size_t>(order(rng)) + 1);
        for (auto& x : c) x = coef(rng);
        const auto trig = sin_cos(TruncatedSeries::scalar(c));
        const auto one =
            add(mul(trig.sin_series, trig.sin_series), mul(trig.cos_series, trig.cos_series));
        for (int k = 0; k <= one.order(); ++k) {
            const double err = std::abs(one.at(k) - (k == 0 ? 1.0 : 0.0));
            if (err > 1e-12) {
                return "trial " + std::to_string(trial) + " k=" + std::to_string(k) + " error " +
                       format_double(err);
            }
        }
    }
    return {};
}

std::string reference_eigenvalues(const VerifyOptions& opts) {
    if (opts.reference.empty()) return "no reference rows";
    std::string failures;
    for (const auto& row : opts.reference) {
        auto p = row.params;
        p.delta *= opts.potential_sign;
        const double got = slow_branch(ModelSpec(p)).lambda;
        if (std::abs(got - row.lambda) > 1e-12) {
            if (!failures.empty()) failures += "; ";
            failures += row.label + " lambda " + format_double(got) + " expected " +
                        format_double(row.lambda);
        }
    }
    return failures;
}

std::string residual_vanishing() {
    for (int f = 0; f <= static_cast<int>(Family::RationalExample); ++f) {
        const ModelSpec m = default_model(static_cast<Family>(f));
        SolveConfig cfg;
        cfg.order = m.family() == Family::Froeschle ? 60 : 100;
        // solve() raises InternalConsistency when the residual series is too large
        const auto s = solve(m, slow_branch(m), cfg);
        for (const auto& sample : s.residual_samples) {
            if (sample.value > 1e-10) {
                return std::string(family_name(m.family())) + " |residual| at z=" +
                       format_double(sample.z) + " is " + format_double(sample.value);
            }
        }
    }
    return {};
}

}  // namespace

std::vector<ReferenceRow> VerifyOptions::default_reference_rows() {
    return {
        {"P_a", {{1.0, 0.1, 0.0}, 0.4, {1.0}}, 0.592583231399561},
        {"P_b", {{1.0, 0.14, 0.0}, 0.4, {1.0}}, 0.609158827181520},
        {"P_c", {{1.0, 0.1, 0.01}, 0.4, {1.0}}, 0.603202338024902},
        {"P_d", {{1.0, 0.1, 0.03}, 0.4, {1.0}}, 0.621569001269222},
    };
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
    return {
        check("mcmillan_oracle", mcmillan_oracle),
        check("rational_oracle", rational_oracle),
        check("scale_covariance", scale_covariance),
        check("pythagorean_identity", pythagorean_identity),
        check("reference_eigenvalues", [&] { return reference_eigenvalues(opts); }),
        check("residual_vanishing", residual_vanishing),
    };
}

}  // namespace invman::cli
