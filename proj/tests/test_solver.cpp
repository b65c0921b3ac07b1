#include "support.hpp"

#include "invman/errors.hpp"
#include "invman/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace invman;
using invman::testing::Gen;
using invman::testing::max_abs_diff;

namespace {

Eigensolution slow(const ModelSpec& m) {
    const auto lin = closed_linear_data(m);
    return select_eigensolution(lin, analyze(lin), Branch::slow());
}

SolveConfig config(int order, std::optional<double> scale = std::nullopt) {
    SolveConfig cfg;
    cfg.order = order;
    cfg.scale = scale;
    return cfg;
}

std::vector<ModelSpec> all_defaults() {
    std::vector<ModelSpec> out;
    for (int f = 0; f <= static_cast<int>(Family::RationalExample); ++f) {
        out.push_back(default_model(static_cast<Family>(f)));
    }
    return out;
}

// Maclaurin coefficients of 2 sinh(eta) z / (1 + z^2) scaled so P_1 = tau.
double mcmillan_coeff(int k, double tau, double eta) {
    if (k % 2 == 0) return 0.0;
    const double amp = 2.0 * std::sinh(eta);
    return ((k / 2) % 2 == 0 ? 1.0 : -1.0) * amp * std::pow(tau / amp, k);
}

}  // namespace

TEST_CASE("order_update on the rational example") {
    const ModelSpec m(RationalExampleParams{});
    const auto eig = slow(m);
    const auto lin = closed_linear_data(m);
    const Vec next = order_update(m, eig, lin, TruncatedSeries::scalar({0, 1}));
    CHECK(next(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("order_update on the standard map zeroes the next residual coefficient") {
    const ModelSpec m(StandardMapParams{{1.0}});
    const auto eig = slow(m);
    const auto lin = closed_linear_data(m);
    auto P = TruncatedSeries::scalar({0, 3.0});
    for (int n = 1; n <= 6; ++n) {
        P = P.appended(order_update(m, eig, lin, P));
        const auto res = residual_of_series(m, P, eig.lambda);
        for (int k = 0; k <= n + 1; ++k) CHECK(std::abs(res.at(k)) < 1e-13);
    }
    // sin has no quadratic term, so the second coefficient stays zero
    CHECK(P.at(2) == 0.0);
}

TEST_CASE("order_update reproduces the McMillan closed form") {
    const ModelSpec m(McMillanParams{1.0});
    const auto eig = slow(m);
    const auto lin = closed_linear_data(m);
    const double tau = 1.3;
    for (int n = 1; n <= 20; ++n) {
        std::vector<double> c;
        for (int k = 0; k <= n; ++k) c.push_back(mcmillan_coeff(k, tau, 1.0));
        const double got = order_update(m, eig, lin, TruncatedSeries::scalar(c))(0);
        const double want = mcmillan_coeff(n + 1, tau, 1.0);
        CHECK(std::abs(got - want) <= 1e-12 * std::max(std::abs(want), std::pow(tau / 2.35, n + 1)));
    }
}

TEST_CASE("solve reproduces the rational closed form") {
    const ModelSpec m(RationalExampleParams{});
    const auto s = solve(m, slow(m), config(100, 1.0));
    CHECK(s.series.order() == 100);
    CHECK(s.series.at(0) == 0.0);
    for (int k = 1; k <= 100; ++k) CHECK(std::abs(s.series.at(k) - 1.0) <= 1e-10);
    CHECK(s.residual_series_max <= 1e-10);
}

TEST_CASE("solve reproduces the McMillan closed form") {
    const ModelSpec m(McMillanParams{1.0});
    const double amp = 2.0 * std::sinh(1.0);
    const auto s = solve(m, slow(m), config(60, amp));
    CHECK(s.lambda == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    for (int k = 0; k <= 60; ++k) {
        const double want = mcmillan_coeff(k, amp, 1.0);
        if (want == 0.0) {
            CHECK(std::abs(s.series.at(k)) < 1e-11);
        } else {
            CHECK(std::abs(s.series.at(k) - want) <= 1e-11 * amp);
        }
    }
}

TEST_CASE("solve on the first reference chain") {
    const ModelSpec m(FrenkelKontorovaParams{{1, 0.1, 0}, 0.4, {1}});
    const auto eig = slow(m);
    CHECK(std::abs(eig.lambda - 0.592583231399561) <= 1e-12);
    const auto s = solve(m, eig, config(100, 10.0));
    CHECK(s.scale == 10.0);
    CHECK(s.series.at(1) == 10.0);
    const double z[] = {0.1};
    CHECK(residual_sample(m, s.series, s.lambda, z)[0].value < 1e-10);
    CHECK(residual_sample(m, s.series, s.lambda, z, ResidualFrame::Centered)[0].value < 1e-10);
}

TEST_CASE("choose_scale") {
    const ModelSpec rat(RationalExampleParams{});
    CHECK(choose_scale(rat, slow(rat), 15) == doctest::Approx(1.0).epsilon(1e-12));

    const ModelSpec pa(FrenkelKontorovaParams{{1, 0.1, 0}, 0.4, {1}});
    const double tau = choose_scale(pa, slow(pa), 15);
    CHECK(tau >= 10.0 / 3.0);
    CHECK(tau <= 30.0);
}

TEST_CASE("auto-scaled coefficients stay in a moderate range") {
    for (const auto& m : all_defaults()) {
        const auto s = solve(m, slow(m), config(m.family() == Family::Froeschle ? 60 : 100));
        CHECK_MESSAGE(s.coeff_max >= 1e-3, m.describe());
        CHECK_MESSAGE(s.coeff_max <= 1e3, m.describe());
    }
}

TEST_CASE("rescaling P_1 rescales P_k by the k-th power") {
    for (const auto& m : all_defaults()) {
        const auto eig = slow(m);
        const double tau = choose_scale(m, eig, 15);
        const auto a = solve(m, eig, config(60, tau));
        const auto b = solve(m, eig, config(60, 2.0 * tau));
        for (int k = 0; k <= 60; ++k) {
            const Vec want = a.series.coeff(k) * std::ldexp(1.0, k);
            CHECK((b.series.coeff(k) - want).lpNorm<Eigen::Infinity>() <= 1e-12 * want.lpNorm<Eigen::Infinity>());
        }
    }
}

TEST_CASE("incremental solve matches repeated generic order updates") {
    for (const auto& m : all_defaults()) {
        const auto eig = slow(m);
        const auto lin = closed_linear_data(m);
        const auto s = solve(m, eig, config(30));
        TruncatedSeries P = s.series.with_order(1);
        for (int n = 1; n < 30; ++n) P = P.appended(order_update(m, eig, lin, P));
        for (int k = 0; k <= 30; ++k) {
            const double size = std::max(1.0, s.series.coeff(k).lpNorm<Eigen::Infinity>());
            CHECK_MESSAGE((P.coeff(k) - s.series.coeff(k)).lpNorm<Eigen::Infinity>() <= 1e-12 * size, m.describe());
        }
    }
}

TEST_CASE("every family solves with a vanishing residual") {
    for (const auto& m : all_defaults()) {
        const auto s = solve(m, slow(m), config(m.family() == Family::Froeschle ? 60 : 100));
        CHECK(s.residual_series_max <= 1e-9 * std::max(1.0, s.coeff_max));
        std::vector<double> grid;
        for (int i = -8; i <= 8; ++i) grid.push_back(0.025 * i);
        for (const auto& r : residual_sample(m, s.series, s.lambda, grid, ResidualFrame::Centered)) {
            CHECK_MESSAGE(r.value <= 1e-10, m.describe() << " z=" << r.z);
        }
        const double origin[] = {0.0};
        CHECK(residual_sample(m, s.series, s.lambda, origin)[0].value <= 1e-14);
    }
}

TEST_CASE("Froeschle tangent follows the closed-form eigenvector") {
    const ModelSpec m(FroeschleParams{0.01, 0.01, 0.01});
    const auto s = solve(m, slow(m), config(60));
    const Vec p1 = s.series.coeff(1).normalized();
    const double angle = std::acos(std::min(1.0, std::abs(p1.dot(Vec::Ones(2).normalized()))));
    CHECK(angle < 1e-10);
}

TEST_CASE("residual_series") {
    const ModelSpec rat(RationalExampleParams{});
    std::vector<double> ones(11, 1.0);
    ones[0] = 0.0;
    CHECK(residual_series(rat, TruncatedSeries::scalar(ones), 0.5).max_coeff_norm() < 1e-12);
    CHECK(residual_series(rat, TruncatedSeries(1, 10), 0.5).max_coeff_norm() == 0.0);
}

TEST_CASE("residual perturbation is local in the order") {
    for (const auto& m : all_defaults()) {
        const auto eig = slow(m);
        const auto s = solve(m, eig, config(20));
        const auto bumped = s.series.with_coeff(5, s.series.coeff(5) + Vec::Constant(m.dim(), 1e-3));
        const auto res = residual_series(m, bumped, eig.lambda);
        for (int k = 0; k < 5; ++k) CHECK(res.coeff(k).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK(res.coeff(5).lpNorm<Eigen::Infinity>() > 1e-6);
    }
}

TEST_CASE("McMillan closed form has a tiny pointwise residual") {
    const ModelSpec m(McMillanParams{1.0});
    const auto s = solve(m, slow(m), config(60, 2.0 * std::sinh(1.0)));
    const double z[] = {0.3};
    CHECK(residual_sample(m, s.series, s.lambda, z)[0].value < 1e-13);
}

TEST_CASE("reversed palindromic models give the same manifold") {
    for (const auto& m : all_defaults()) {
        if (!m.lagrangian()) continue;
        const auto a = solve(m, slow(m), config(30));
        const auto r = reverse(m);
        const auto b = solve(r, slow(r), config(30));
        CHECK(std::abs(a.lambda - b.lambda) < 1e-14);
        CHECK(max_abs_diff(a.series, b.series) <= 1e-12 * std::max(1.0, a.coeff_max));
    }
}

TEST_CASE("solve refuses a resonant eigenvalue") {
    // stable roots 1/2 and 1/4: the square of the slow one is the fast one
    const ModelSpec m(FrenkelKontorovaParams{{1.0, -4.0 / 27.0}, 1.0 / 6.0, {1.0}});
    const auto eig = slow(m);
    CHECK(eig.lambda == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(eig.non_resonant);
    try {
        solve(m, eig, config(20));
        FAIL("expected a resonance error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Resonance);
    }
}

TEST_CASE("continuation through the singular limit") {
    const ModelSpec m(FrenkelKontorovaParams{{1, 0.1, 0.01}, 0.4, {1}});
    const double path[] = {1e-2, 1e-3, 1e-4, 0.0};
    const auto steps = continuation(m, "gamma_3", path, config(100));
    REQUIRE(steps.size() == 4);
    CHECK(std::abs(steps[0].lambda - 0.603202338024902) <= 1e-12);
    CHECK(std::abs(steps[3].lambda - 0.592583231399561) <= 1e-12);
    CHECK(steps[0].singularity_exponent == 0);
    CHECK(steps[1].singularity_exponent == 0);
    CHECK(steps[2].singularity_exponent == 0);
    CHECK(steps[3].singularity_exponent == 1);
    double last = 1e300;
    for (int i = 0; i < 3; ++i) {
        const double d = normalized_distance(steps[i].report, steps[3].report, 1.0, 20);
        CHECK(d < last);
        last = d;
    }
}

TEST_CASE("continuation along the second coupling") {
    const ModelSpec m(FrenkelKontorovaParams{{1, 0.1, 0}, 0.4, {1}});
    const double path[] = {0.1, 0.12, 0.14};
    const auto steps = continuation(m, "gamma_2", path, config(40));
    CHECK(std::abs(steps.front().lambda - 0.592583231399561) <= 1e-12);
    CHECK(std::abs(steps.back().lambda - 0.609158827181520) <= 1e-12);
}

TEST_CASE("continuation reports a lost branch") {
    const ModelSpec m(StandardMapParams{{0.01}});
    const double path[] = {0.01, 100.0};
    try {
        continuation(m, "C_1", path, config(20));
        FAIL("expected a branch tracking error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BranchTracking);
        CHECK(std::string(e.what()).find("step 1") != std::string::npos);
    }
}

TEST_CASE("solve config validation") {
    SolveConfig cfg;
    cfg.order = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = SolveConfig{};
    cfg.scale = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}
