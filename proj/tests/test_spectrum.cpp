#include "support.hpp"

#include "invman/errors.hpp"
#include "invman/models.hpp"
#include "invman/spectrum.hpp"

#include <Eigen/LU>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace invman;
using invman::testing::Gen;

namespace {

std::vector<double> poly_from_roots(const std::vector<double>& roots) {
    std::vector<double> p{1.0};
    for (double r : roots) {
        std::vector<double> q(p.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i + 1] += p[i];
            q[i] -= r * p[i];
        }
        p = q;
    }
    return p;
}

std::vector<Complex> expanded_roots(const SpectrumReport& r) {
    std::vector<Complex> out;
    for (const auto& root : r.roots)
        for (int i = 0; i < root.multiplicity; ++i) out.push_back(root.value);
    return out;
}

bool has_root_near(const std::vector<Complex>& roots, Complex z, double tol) {
    return std::any_of(roots.begin(), roots.end(), [&](Complex r) { return std::abs(r - z) <= tol; });
}

// Every root of a has a partner in b within tol, with multiplicities matched greedily.
bool same_multiset(std::vector<Complex> a, std::vector<Complex> b, double tol) {
    if (a.size() != b.size()) return false;
    for (Complex x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
        if (it == b.end() || std::abs(*it - x) > tol * std::max(1.0, std::abs(x))) return false;
        b.erase(it);
    }
    return true;
}

LinearData scalar_lin(std::vector<double> b) {
    LinearData lin{static_cast<int>(b.size()) - 1, 1, {}};
    for (double x : b) lin.B.push_back(Mat::Constant(1, 1, x));
    return lin;
}

}  // namespace

TEST_CASE("t_matrix") {
    const auto lin = scalar_lin({1, -3, 1});
    CHECK(t_matrix(1.0, lin)(0, 0) == -1.0);
    CHECK(t_matrix(0.0, lin)(0, 0) == 1.0);
    Gen g(30);
    const auto lin2 = g.linear_data(3, 2);
    Mat direct = Mat::Zero(2, 2);
    for (int i = 0; i <= 3; ++i) direct += std::pow(0.5, i) * lin2.B[i];
    CHECK((t_matrix(0.5, lin2) - direct).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("char_poly") {
    const auto p = char_poly(scalar_lin({1, -3, 1}));
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(p[2] == doctest::Approx(1.0).epsilon(1e-14));

    // decoupled integrable Froeschle case: (lambda - 1)^4
    const auto q = char_poly(closed_linear_data(ModelSpec(FroeschleParams{0, 0, 0})));
    const std::vector<double> want{1, -4, 6, -4, 1};
    REQUIRE(q.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(q[i] == doctest::Approx(want[i]).epsilon(1e-13));
}

TEST_CASE("char_poly interpolation agrees with direct determinants") {
    Gen g(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = g.integer(1, 3);
        const auto lin = g.linear_data(g.integer(1, 4), d);
        const auto p = char_poly(lin);
        for (int s = 0; s < 5; ++s) {
            const double mu = g.uniform(-1.5, 1.5);
            const double direct = t_matrix(mu, lin).determinant();
            const double scale = std::pow(t_magnitude(mu, lin), d);
            CHECK(std::abs(poly_eval(p, mu).real() - direct) <= 1e-11 * scale);
        }
    }
}

TEST_CASE("poly_roots") {
    const std::vector<double> a{1, -3, 1};
    auto r = poly_roots(a);
    REQUIRE(r.size() == 2);
    CHECK(has_root_near(r, (3 - std::sqrt(5.0)) / 2, 1e-14));
    CHECK(has_root_near(r, (3 + std::sqrt(5.0)) / 2, 1e-14));

    const std::vector<double> b{0, 1, -2.4, 1};
    r = poly_roots(b);
    REQUIRE(r.size() == 3);
    CHECK(has_root_near(r, 0.0, 0.0));
    CHECK(has_root_near(r, 1.2 - std::sqrt(0.44), 1e-14));
    CHECK(has_root_near(r, 1.2 + std::sqrt(0.44), 1e-14));

    const std::vector<double> c{1, 0, 0, 0, 1};
    r = poly_roots(c);
    REQUIRE(r.size() == 4);
    for (double angle : {0.25, 0.75, -0.25, -0.75}) {
        CHECK(has_root_near(r, std::polar(1.0, angle * std::numbers::pi), 1e-14));
    }

    const std::vector<double> zero{0, 0, 0};
    CHECK_THROWS_AS(poly_roots(zero), Error);
}

TEST_CASE("poly_roots recovers planted real roots") {
    Gen g(32);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> planted;
        const int n = g.integer(1, 6);
        for (int i = 0; i < n; ++i) {
            // keep roots apart so they are well conditioned
            planted.push_back((i + 1) * 0.7 * (g.integer(0, 1) ? 1 : -1) + g.uniform(-0.1, 0.1));
        }
        const auto roots = poly_roots(poly_from_roots(planted));
        for (double x : planted) CHECK(has_root_near(roots, x, 1e-8));
    }
}

TEST_CASE("classify") {
    const std::vector<double> p1 = poly_from_roots({0.38, 2.62});
    auto rep = classify(p1, poly_roots(p1));
    CHECK(rep.hyperbolic);
    CHECK(rep.non_singular);
    CHECK(rep.singularity_exponent == 0);

    const std::vector<double> p2 = poly_from_roots({0.0, 0.5, 2.0});
    rep = classify(p2, poly_roots(p2));
    CHECK(rep.hyperbolic);
    CHECK_FALSE(rep.non_singular);
    CHECK(rep.singularity_exponent == 1);
    const auto zero = std::find_if(rep.roots.begin(), rep.roots.end(),
                                   [](const SpectralRoot& r) { return r.cls == RootClass::Zero; });
    REQUIRE(zero != rep.roots.end());
    CHECK(zero->multiplicity == 1);

    // lambda^2 - lambda + 1 has roots e^{+-i pi/3}
    const std::vector<double> p3{1, -1, 1};
    rep = classify(p3, poly_roots(p3));
    CHECK_FALSE(rep.hyperbolic);
    for (const auto& r : rep.roots) CHECK(r.cls == RootClass::UnitCircle);
}

TEST_CASE("classify groups a multiple root") {
    const auto rep = analyze(closed_linear_data(ModelSpec(FroeschleParams{0, 0, 0})));
    // one entry per copy, each annotated with the cluster multiplicity
    REQUIRE(rep.roots.size() == 4);
    for (const auto& r : rep.roots) {
        CHECK(r.multiplicity == 4);
        CHECK(std::abs(r.value - 1.0) < 1e-3);
    }
    CHECK_FALSE(rep.hyperbolic);
}

TEST_CASE("nonresonance_check") {
    const ModelSpec sm(StandardMapParams{{1.0}});
    const auto rep = analyze(closed_linear_data(sm));
    const double lambda = (3 - std::sqrt(5.0)) / 2;
    auto res = nonresonance_check(lambda, rep);
    CHECK(res.non_resonant);

    const auto planted = poly_from_roots({0.5, 0.25, 4, 2});
    const auto rep2 = classify(planted, poly_roots(planted));
    res = nonresonance_check(0.5, rep2);
    CHECK_FALSE(res.non_resonant);

    const auto pa = analyze(closed_linear_data(ModelSpec(FrenkelKontorovaParams{{1, 0.1, 0}, 0.4, {1}})));
    res = nonresonance_check(0.592583231399561, pa);
    CHECK(res.non_resonant);
    CHECK(res.n_max >= 2);

    CHECK_THROWS_AS(nonresonance_check(1.5, rep), Error);
}

TEST_CASE("nonresonance_check enumerates n up to n_max") {
    // oracle: brute-force search for lambda^n near a nonzero root
    Gen g(33);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> roots;
        for (int i = 0; i < 4; ++i) roots.push_back(g.uniform(0.05, 0.95) * (g.integer(0, 1) ? 1 : -1));
        const double lambda = roots[0];
        const auto p = poly_from_roots(roots);
        const auto rep = classify(p, poly_roots(p));
        const auto res = nonresonance_check(lambda, rep);
        double min_mod = 1e300;
        for (double r : roots) min_mod = std::min(min_mod, std::abs(r));
        bool resonant = false;
        for (int n = 2; std::pow(std::abs(lambda), n) >= min_mod; ++n) {
            for (double r : roots) {
                resonant = resonant || std::abs(std::pow(lambda, n) - r) <= 1e-8 * (1 + std::abs(r));
            }
        }
        CHECK(res.non_resonant == !resonant);
    }
}

TEST_CASE("chebyshev_reduce") {
    auto red = chebyshev_reduce({{1, 0.1, 0}, 0.4, {1}});
    CHECK(std::abs(red.slow_lambda() - 0.592583231399561) <= 1e-12);
    red = chebyshev_reduce({{1, 0.1, 0.01}, 0.4, {1}});
    CHECK(std::abs(red.slow_lambda() - 0.603202338024902) <= 1e-12);
    CHECK_THROWS_AS(chebyshev_reduce({{1, 0, 0}, 0.0, {1}}), Error);
}

TEST_CASE("chebyshev reduction agrees with the full spectrum") {
    Gen g(34);
    for (int trial = 0; trial < 30; ++trial) {
        FrenkelKontorovaParams p{{1.0, g.uniform(0, 0.2), g.uniform(0, 0.05)}, g.uniform(0.1, 1.0), {1.0}};
        const auto rep = analyze(closed_linear_data(ModelSpec(p)));
        const auto red = chebyshev_reduce(p);
        const auto roots = expanded_roots(rep);
        for (const auto& pair : red.lambda_pairs) {
            CHECK(has_root_near(roots, pair.stable, 1e-8));
            CHECK(has_root_near(roots, pair.unstable, 1e-6));
        }
        CHECK(std::abs(red.slow_lambda() - stable_branches(rep).front()) < 1e-10);
    }
}

TEST_CASE("Lagrangian spectra are closed under inversion") {
    Gen g(35);
    std::vector<ModelSpec> models;
    for (int i = 0; i < 5; ++i) {
        models.emplace_back(StandardMapParams{{g.uniform(0.1, 2.0), g.uniform(-0.3, 0.3)}});
        models.emplace_back(FrenkelKontorovaParams{{1.0, g.uniform(0, 0.3)}, g.uniform(0.1, 1.0), {1.0}});
        models.emplace_back(HeisenbergXYParams{g.uniform(0.1, 2.0)});
        models.emplace_back(FroeschleParams{g.uniform(0.001, 0.05), g.uniform(0.001, 0.05), g.uniform(0.001, 0.05)});
    }
    for (const auto& m : models) {
        REQUIRE(m.lagrangian());
        const auto rep = analyze(closed_linear_data(m));
        std::vector<Complex> roots, inverted;
        for (Complex r : expanded_roots(rep)) {
            if (std::abs(r) <= rep.tol.zero) continue;
            roots.push_back(r);
            inverted.push_back(1.0 / r);
        }
        CHECK_MESSAGE(same_multiset(roots, inverted, 1e-8), m.describe());
    }
}

TEST_CASE("eigenvector") {
    const ModelSpec sm(StandardMapParams{{1.0}});
    const auto lin = closed_linear_data(sm);
    const Vec v = eigenvector((3 - std::sqrt(5.0)) / 2, lin);
    CHECK(v.size() == 1);
    CHECK(v(0) == 1.0);
    CHECK_THROWS_AS(eigenvector(0.9, lin), Error);

    const ModelSpec fr(FroeschleParams{0.01, 0.01, 0.01});
    const auto lin2 = closed_linear_data(fr);
    const auto eig = select_eigensolution(lin2, analyze(lin2), Branch::slow());
    const Vec diag = Vec::Ones(2).normalized();
    const double angle = std::acos(std::min(1.0, std::abs(eig.eigvec.normalized().dot(diag))));
    CHECK(angle < 1e-10);
}

TEST_CASE("Froeschle frequencies come from I - D^2 W / 2") {
    const ModelSpec fr(FroeschleParams{0.01, 0.01, 0.01});
    const auto rep = analyze(closed_linear_data(fr));
    const double pi2 = std::numbers::pi * std::numbers::pi;
    for (double omega : {1 + 0.02 * pi2, 1 + 0.06 * pi2}) {
        const double stable = omega - std::sqrt(omega * omega - 1);
        CHECK(has_root_near(expanded_roots(rep), stable, 1e-12));
    }
}

TEST_CASE("select_eigensolution") {
    const auto lin = closed_linear_data(ModelSpec(FrenkelKontorovaParams{{1, 0.1, 0}, 0.4, {1}}));
    const auto rep = analyze(lin);
    const auto slow = select_eigensolution(lin, rep, Branch::slow());
    CHECK(std::abs(slow.lambda - 0.592583231399561) <= 1e-12);
    CHECK(slow.non_resonant);
    const auto fast = select_eigensolution(lin, rep, Branch::at(1));
    CHECK(std::abs(fast.lambda) < std::abs(slow.lambda));
    CHECK_THROWS_AS(select_eigensolution(lin, rep, Branch::at(5)), Error);

    const auto flat = closed_linear_data(ModelSpec(FroeschleParams{0, 0, 0}));
    try {
        select_eigensolution(flat, analyze(flat), Branch::slow());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoStableRoot);
    }
}

TEST_CASE("numeric partials match closed-form partials") {
    for (int f = 0; f <= static_cast<int>(Family::RationalExample); ++f) {
        const ModelSpec m = default_model(static_cast<Family>(f));
        const auto closed = closed_linear_data(m);
        const auto numeric = numeric_partials(m, m.fixed_point());
        REQUIRE(closed.B.size() == numeric.B.size());
        for (std::size_t i = 0; i < closed.B.size(); ++i) {
            CHECK((closed.B[i] - numeric.B[i]).lpNorm<Eigen::Infinity>() < 1e-8);
        }
        const auto a = expanded_roots(analyze(closed));
        const auto b = expanded_roots(analyze(numeric));
        CHECK_MESSAGE(same_multiset(a, b, 1e-6), m.describe());
    }
}

TEST_CASE("numeric_partials rejects points that are not fixed points") {
    const ModelSpec m = default_model(Family::StandardMapK);
    CHECK_THROWS_AS(numeric_partials(m, Vec::Constant(1, 0.5)), Error);
}

TEST_CASE("symplectic root product") {
    const auto rep = analyze(closed_linear_data(ModelSpec(FroeschleParams{0.05, 0.05, 0.0})));
    Complex product = 1.0;
    for (Complex r : expanded_roots(rep)) product *= r;
    CHECK(std::abs(product - 1.0) < 1e-10);
}
