#include "invman/models.hpp"

#include "invman/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace invman {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Usage, std::string(what) + " must be finite");
}

void validate(const FamilyParams& params) {
    std::visit(overloaded{
                   [](const StandardMapParams& p) {
                       for (double c : p.C) require_finite(c, "C_j");
                   },
                   [](const FrenkelKontorovaParams& p) {
                       if (p.gamma.empty() || p.gamma.front() == 0.0) {
                           throw Error(ErrorKind::Usage,
                                       "frenkel_kontorova needs a nonzero gamma_1");
                       }
                       for (double g : p.gamma) require_finite(g, "gamma_L");
                       for (double c : p.C) require_finite(c, "C_j");
                       require_finite(p.delta, "delta");
                   },
                   [](const HeisenbergXYParams& p) { require_finite(p.epsilon, "epsilon"); },
                   [](const FroeschleParams& p) {
                       require_finite(p.a, "a");
                       require_finite(p.b, "b");
                       require_finite(p.c, "c");
                   },
                   [](const McMillanParams& p) {
                       require_finite(p.eta, "eta");
                       if (!(p.eta > 0.0)) throw Error(ErrorKind::Usage, "mcmillan needs eta > 0");
                   },
                   [](const RationalExampleParams&) {},
               },
               params);
}

// Parses "C_3" -> 3 given prefix "C_"; returns 0 when the name does not match.
std::size_t indexed(std::string_view name, std::string_view prefix) {
    if (name.substr(0, prefix.size()) != prefix) return 0;
    const auto digits = name.substr(prefix.size());
    if (digits.empty()) return 0;
    std::size_t value = 0;
    for (char ch : digits) {
        if (ch < '0' || ch > '9') return 0;
        value = value * 10 + static_cast<std::size_t>(ch - '0');
    }
    return value;
}

double* find_parameter(FamilyParams& params, std::string_view name) {
    return std::visit(
        overloaded{
            [&](StandardMapParams& p) -> double* {
                const auto j = indexed(name, "C_");
                return (j >= 1 && j <= p.C.size()) ? &p.C[j - 1] : nullptr;
            },
            [&](FrenkelKontorovaParams& p) -> double* {
                if (name == "delta") return &p.delta;
                if (const auto l = indexed(name, "gamma_"); l >= 1 && l <= p.gamma.size()) {
                    return &p.gamma[l - 1];
                }
                const auto j = indexed(name, "C_");
                return (j >= 1 && j <= p.C.size()) ? &p.C[j - 1] : nullptr;
            },
            [&](HeisenbergXYParams& p) -> double* {
                return name == "epsilon" ? &p.epsilon : nullptr;
            },
            [&](FroeschleParams& p) -> double* {
                if (name == "a") return &p.a;
                if (name == "b") return &p.b;
                if (name == "c") return &p.c;
                return nullptr;
            },
            [&](McMillanParams& p) -> double* { return name == "eta" ? &p.eta : nullptr; },
            [&](RationalExampleParams&) -> double* { return nullptr; },
        },
        params);
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

// Matrix acting on every coefficient of a vector series.
TruncatedSeries apply(const Mat& a, const TruncatedSeries& q) {
    std::vector<Vec> c;
    c.reserve(static_cast<std::size_t>(q.order()) + 1);
    for (int k = 0; k <= q.order(); ++k) c.push_back(a * q.coeff(k));
    return TruncatedSeries::from_coeffs(c);
}

// Scalar series sum_i <form.row(i), q_i>.
TruncatedSeries contract(const Mat& form, std::span<const TruncatedSeries> q) {
    const int order = q.front().order();
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const auto row = form.row(static_cast<Eigen::Index>(i));
        if (row.isZero(0.0)) continue;
        for (int k = 0; k <= order; ++k) c[static_cast<std::size_t>(k)] += row.dot(q[i].coeff(k));
    }
    return TruncatedSeries::scalar(std::move(c));
}

// Scalar series times a fixed vector.
TruncatedSeries outer(const TruncatedSeries& s, const Vec& w) {
    std::vector<Vec> c;
    c.reserve(static_cast<std::size_t>(s.order()) + 1);
    for (int k = 0; k <= s.order(); ++k) c.push_back(s.at(k) * w);
    return TruncatedSeries::from_coeffs(c);
}

TruncatedSeries trig_series_residual(const TrigForm& form, std::span<const TruncatedSeries> q) {
    TruncatedSeries out(q.front().dim(), q.front().order());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (form.linear[i].isZero(0.0)) continue;
        out = add(out, apply(form.linear[i], q[i]));
    }
    for (const auto& term : form.terms) {
        const auto trig = sin_cos(contract(term.form, q));
        out = add(out, outer(trig.sin_series, term.weight));
    }
    return out;
}

// f(x) = 2x / (1 - x) for the rational example, and its derivative.
double rational_f(double x) { return 2.0 * x / (1.0 - x); }
double rational_df(double x) { return 2.0 / ((1.0 - x) * (1.0 - x)); }

TrigForm build_trig_form(const ModelSpec& m) {
    const int n = m.order();
    const int d = m.dim();
    TrigForm form;
    form.linear.assign(static_cast<std::size_t>(n) + 1, Mat::Zero(d, d));
    auto scalar_form = [&](std::initializer_list<std::pair<int, double>> entries) {
        Mat f = Mat::Zero(n + 1, d);
        for (auto [i, v] : entries) f(i, 0) = v;
        return f;
    };
    switch (m.family()) {
        case Family::StandardMapK: {
            const auto& p = m.as<StandardMapParams>();
            form.linear[0](0, 0) = 1.0;
            form.linear[1](0, 0) = -2.0;
            form.linear[2](0, 0) = 1.0;
            for (std::size_t j = 1; j <= p.C.size(); ++j) {
                if (p.C[j - 1] == 0.0) continue;
                form.terms.push_back({scalar_form({{1, static_cast<double>(j)}}),
                                      Vec::Constant(1, -p.C[j - 1])});
            }
            break;
        }
        case Family::FrenkelKontorova: {
            const auto& p = m.as<FrenkelKontorovaParams>();
            const int c = static_cast<int>(p.gamma.size());
            double total = 0.0;
            for (int l = 1; l <= c; ++l) {
                const double g = p.gamma[static_cast<std::size_t>(l - 1)];
                form.linear[static_cast<std::size_t>(c + l)](0, 0) += g;
                form.linear[static_cast<std::size_t>(c - l)](0, 0) += g;
                total += g;
            }
            form.linear[static_cast<std::size_t>(c)](0, 0) -= 2.0 * total;
            for (std::size_t j = 1; j <= p.C.size(); ++j) {
                if (p.C[j - 1] == 0.0 || p.delta == 0.0) continue;
                form.terms.push_back({scalar_form({{c, static_cast<double>(j)}}),
                                      Vec::Constant(1, -p.delta * p.C[j - 1])});
            }
            break;
        }
        case Family::HeisenbergXY: {
            const auto& p = m.as<HeisenbergXYParams>();
            form.terms.push_back({scalar_form({{2, 1.0}, {1, -1.0}}), Vec::Constant(1, 1.0)});
            form.terms.push_back({scalar_form({{0, 1.0}, {1, -1.0}}), Vec::Constant(1, 1.0)});
            if (p.epsilon != 0.0) {
                form.terms.push_back({scalar_form({{1, 1.0}}), Vec::Constant(1, -p.epsilon)});
            }
            break;
        }
        case Family::Froeschle: {
            const auto& p = m.as<FroeschleParams>();
            form.linear[0] = Mat::Identity(2, 2);
            form.linear[1] = -2.0 * Mat::Identity(2, 2);
            form.linear[2] = Mat::Identity(2, 2);
            // grad W(x) = -2 pi [a s(x1) + c s(x1 - x2), b s(x2) - c s(x1 - x2)],
            // s(u) = sin(2 pi u).
            auto angle = [&](double c1, double c2) {
                Mat f = Mat::Zero(3, 2);
                f(1, 0) = kTwoPi * c1;
                f(1, 1) = kTwoPi * c2;
                return f;
            };
            if (p.a != 0.0) form.terms.push_back({angle(1, 0), Vec{{-kTwoPi * p.a, 0.0}}});
            if (p.b != 0.0) form.terms.push_back({angle(0, 1), Vec{{0.0, -kTwoPi * p.b}}});
            if (p.c != 0.0) {
                form.terms.push_back({angle(1, -1), Vec{{-kTwoPi * p.c, kTwoPi * p.c}}});
            }
            break;
        }
        case Family::McMillan:
        case Family::RationalExample:
            throw Error(ErrorKind::Usage, "family has no trigonometric form");
    }
    return form;
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::StandardMapK: return "standard_map_k";
        case Family::FrenkelKontorova: return "frenkel_kontorova";
        case Family::HeisenbergXY: return "heisenberg_xy";
        case Family::Froeschle: return "froeschle";
        case Family::McMillan: return "mcmillan";
        case Family::RationalExample: return "rational_example";
    }
    return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) {
    for (auto f : {Family::StandardMapK, Family::FrenkelKontorova, Family::HeisenbergXY,
                   Family::Froeschle, Family::McMillan, Family::RationalExample}) {
        if (family_name(f) == name) return f;
    }
    return std::nullopt;
}

ModelSpec::ModelSpec(FamilyParams params) : params_(std::move(params)) { validate(params_); }

int ModelSpec::order() const {
    if (family() == Family::FrenkelKontorova) {
        return 2 * static_cast<int>(as<FrenkelKontorovaParams>().gamma.size());
    }
    return 2;
}

int ModelSpec::dim() const { return family() == Family::Froeschle ? 2 : 1; }

bool ModelSpec::lagrangian() const {
    switch (family()) {
        case Family::StandardMapK:
        case Family::FrenkelKontorova:
        case Family::HeisenbergXY:
        case Family::Froeschle: return true;
        default: return false;
    }
}

std::vector<std::string> ModelSpec::parameter_names() const {
    std::vector<std::string> names;
    std::visit(overloaded{
                   [&](const StandardMapParams& p) {
                       for (std::size_t j = 1; j <= p.C.size(); ++j) {
                           names.push_back("C_" + std::to_string(j));
                       }
                   },
                   [&](const FrenkelKontorovaParams& p) {
                       for (std::size_t l = 1; l <= p.gamma.size(); ++l) {
                           names.push_back("gamma_" + std::to_string(l));
                       }
                       names.emplace_back("delta");
                       for (std::size_t j = 1; j <= p.C.size(); ++j) {
                           names.push_back("C_" + std::to_string(j));
                       }
                   },
                   [&](const HeisenbergXYParams&) { names.emplace_back("epsilon"); },
                   [&](const FroeschleParams&) { names = {"a", "b", "c"}; },
                   [&](const McMillanParams&) { names.emplace_back("eta"); },
                   [&](const RationalExampleParams&) {},
               },
               params_);
    return names;
}

double ModelSpec::parameter(std::string_view name) const {
    FamilyParams copy = params_;
    const double* slot = find_parameter(copy, name);
    if (!slot) {
        throw Error(ErrorKind::Usage, "family " + std::string(family_name(family())) +
                                          " has no parameter '" + std::string(name) + "'");
    }
    return *slot;
}

ModelSpec ModelSpec::with_parameter(std::string_view name, double value) const {
    FamilyParams copy = params_;
    double* slot = find_parameter(copy, name);
    if (!slot) {
        throw Error(ErrorKind::Usage, "family " + std::string(family_name(family())) +
                                          " has no parameter '" + std::string(name) + "'");
    }
    *slot = value;
    ModelSpec out(std::move(copy));
    out.reversed_ = reversed_;
    return out;
}

std::string ModelSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "family=" << family_name(family());
    std::visit(overloaded{
                   [&](const StandardMapParams& p) { os << " C=" << join(p.C); },
                   [&](const FrenkelKontorovaParams& p) {
                       os << " gamma=" << join(p.gamma) << " delta=" << p.delta
                          << " C=" << join(p.C);
                   },
                   [&](const HeisenbergXYParams& p) { os << " epsilon=" << p.epsilon; },
                   [&](const FroeschleParams& p) {
                       os << " a=" << p.a << " b=" << p.b << " c=" << p.c;
                   },
                   [&](const McMillanParams& p) { os << " eta=" << p.eta; },
                   [&](const RationalExampleParams&) {},
               },
               params_);
    if (reversed_) os << " reversed=1";
    return os.str();
}

ModelSpec reverse(const ModelSpec& m) {
    ModelSpec out = m;
    out.reversed_ = !m.reversed_;
    return out;
}

ModelSpec default_model(Family f) {
    switch (f) {
        case Family::StandardMapK: return ModelSpec(StandardMapParams{{1.0}});
        case Family::FrenkelKontorova:
            return ModelSpec(FrenkelKontorovaParams{{1.0, 0.1, 0.0}, 0.4, {1.0}});
        case Family::HeisenbergXY: return ModelSpec(HeisenbergXYParams{1.0});
        case Family::Froeschle: return ModelSpec(FroeschleParams{0.01, 0.01, 0.01});
        case Family::McMillan: return ModelSpec(McMillanParams{1.0});
        case Family::RationalExample: return ModelSpec(RationalExampleParams{});
    }
    throw Error(ErrorKind::Usage, "unknown family");
}

Vec residual_pointwise(const ModelSpec& m, std::span<const Vec> theta_in) {
    const int n = m.order();
    if (static_cast<int>(theta_in.size()) != n + 1) {
        throw Error(ErrorKind::Usage, "residual_pointwise: expected " + std::to_string(n + 1) +
                                          " arguments, got " + std::to_string(theta_in.size()));
    }
    for (const auto& t : theta_in) {
        if (t.size() != m.dim()) throw Error(ErrorKind::Usage, "residual_pointwise: wrong dimension");
    }
    std::vector<Vec> theta(theta_in.begin(), theta_in.end());
    if (m.reversed()) std::reverse(theta.begin(), theta.end());
    auto s = [&](std::size_t i) { return theta[i][0]; };

    switch (m.family()) {
        case Family::StandardMapK: {
            const auto& p = m.as<StandardMapParams>();
            double force = 0.0;
            for (std::size_t j = 1; j <= p.C.size(); ++j) {
                force += p.C[j - 1] * std::sin(static_cast<double>(j) * s(1));
            }
            return Vec::Constant(1, s(2) - 2.0 * s(1) + s(0) - force);
        }
        case Family::FrenkelKontorova: {
            const auto& p = m.as<FrenkelKontorovaParams>();
            const std::size_t c = p.gamma.size();
            double value = 0.0;
            for (std::size_t l = 1; l <= c; ++l) {
                value += p.gamma[l - 1] * (s(c + l) - 2.0 * s(c) + s(c - l));
            }
            for (std::size_t j = 1; j <= p.C.size(); ++j) {
                value -= p.delta * p.C[j - 1] * std::sin(static_cast<double>(j) * s(c));
            }
            return Vec::Constant(1, value);
        }
        case Family::HeisenbergXY: {
            const auto& p = m.as<HeisenbergXYParams>();
            return Vec::Constant(1, std::sin(s(2) - s(1)) + std::sin(s(0) - s(1)) -
                                        p.epsilon * std::sin(s(1)));
        }
        case Family::Froeschle: {
            const auto& p = m.as<FroeschleParams>();
            const Vec& x = theta[1];
            const double s12 = std::sin(kTwoPi * (x[0] - x[1]));
            Vec grad(2);
            grad[0] = -kTwoPi * (p.a * std::sin(kTwoPi * x[0]) + p.c * s12);
            grad[1] = -kTwoPi * (p.b * std::sin(kTwoPi * x[1]) - p.c * s12);
            return theta[2] - 2.0 * theta[1] + theta[0] + grad;
        }
        case Family::McMillan: {
            const auto& p = m.as<McMillanParams>();
            return Vec::Constant(1, s(2) + s(0) - 2.0 * std::cosh(p.eta) * s(1) / (s(1) * s(1) + 1.0));
        }
        case Family::RationalExample: {
            for (std::size_t i = 0; i < theta.size(); ++i) {
                if (!(s(i) < 1.0)) {
                    throw Error(ErrorKind::Domain,
                                "rational_example: argument " + std::to_string(i) +
                                    " outside (-inf, 1)");
                }
            }
            return Vec::Constant(1, (rational_f(s(1)) - s(0)) * rational_df(s(1)) + s(1) -
                                        rational_f(s(2)));
        }
    }
    throw Error(ErrorKind::Usage, "unknown family");
}

TruncatedSeries residual_of_series(const ModelSpec& m, const TruncatedSeries& P, double lambda) {
    if (P.dim() != m.dim()) {
        throw Error(ErrorKind::Usage, "residual_of_series: series dimension " +
                                          std::to_string(P.dim()) + " does not match model " +
                                          std::to_string(m.dim()));
    }
    // q[i] = P(lambda^i z); the reversed model reads the arguments backwards.
    std::vector<TruncatedSeries> q;
    for (int i = 0; i <= m.order(); ++i) q.push_back(scale_arg(P, std::pow(lambda, i)));
    if (m.reversed()) std::reverse(q.begin(), q.end());

    switch (m.family()) {
        case Family::McMillan: {
            const double k = 2.0 * std::cosh(m.as<McMillanParams>().eta);
            const auto& h = q[1];
            const auto rational = mul(h, reciprocal(add_constant(mul(h, h), 1.0)));
            return sub(add(q[2], q[0]), scaled(rational, k));
        }
        case Family::RationalExample: {
            auto f = [](const TruncatedSeries& x) {
                return scaled(mul(x, reciprocal(add_constant(scaled(x, -1.0), 1.0))), 2.0);
            };
            const auto one_minus = add_constant(scaled(q[1], -1.0), 1.0);
            const auto df = scaled(reciprocal(mul(one_minus, one_minus)), 2.0);
            return add(mul(sub(f(q[1]), q[0]), df), sub(q[1], f(q[2])));
        }
        default: return trig_series_residual(build_trig_form(ModelSpec(m.params())), q);
    }
}

LinearData closed_linear_data(const ModelSpec& m) {
    const int n = m.order();
    const int d = m.dim();
    LinearData lin{n, d, std::vector<Mat>(static_cast<std::size_t>(n) + 1, Mat::Zero(d, d))};
    auto set3 = [&](double b0, double b1, double b2) {
        lin.B[0](0, 0) = b0;
        lin.B[1](0, 0) = b1;
        lin.B[2](0, 0) = b2;
    };
    switch (m.family()) {
        case Family::StandardMapK: {
            const auto& p = m.as<StandardMapParams>();
            double jc = 0.0;
            for (std::size_t j = 1; j <= p.C.size(); ++j) jc += static_cast<double>(j) * p.C[j - 1];
            set3(1.0, -2.0 - jc, 1.0);
            break;
        }
        case Family::FrenkelKontorova: {
            const auto& p = m.as<FrenkelKontorovaParams>();
            const std::size_t c = p.gamma.size();
            double jc = 0.0;
            for (std::size_t j = 1; j <= p.C.size(); ++j) jc += static_cast<double>(j) * p.C[j - 1];
            double total = 0.0;
            for (std::size_t l = 1; l <= c; ++l) {
                lin.B[c + l](0, 0) = p.gamma[l - 1];
                lin.B[c - l](0, 0) = p.gamma[l - 1];
                total += p.gamma[l - 1];
            }
            lin.B[c](0, 0) = -2.0 * total - p.delta * jc;
            break;
        }
        case Family::HeisenbergXY:
            set3(1.0, -(2.0 + m.as<HeisenbergXYParams>().epsilon), 1.0);
            break;
        case Family::Froeschle: {
            const auto& p = m.as<FroeschleParams>();
            const double s = 4.0 * std::numbers::pi * std::numbers::pi;
            Mat hessian(2, 2);
            hessian << -s * (p.a + p.c), s * p.c, s * p.c, -s * (p.b + p.c);
            lin.B[0] = Mat::Identity(2, 2);
            lin.B[1] = -2.0 * Mat::Identity(2, 2) + hessian;
            lin.B[2] = Mat::Identity(2, 2);
            break;
        }
        case Family::McMillan:
            set3(1.0, -2.0 * std::cosh(m.as<McMillanParams>().eta), 1.0);
            break;
        case Family::RationalExample: set3(-2.0, 5.0, -2.0); break;
    }
    if (m.reversed()) std::reverse(lin.B.begin(), lin.B.end());
    return lin;
}

std::optional<Oracle> oracle(const ModelSpec& m) {
    if (m.reversed()) return std::nullopt;
    if (m.family() == Family::McMillan) {
        const double eta = m.as<McMillanParams>().eta;
        const double amplitude = 2.0 * std::sinh(eta);
        return Oracle{[amplitude](double z) { return Vec::Constant(1, amplitude * z / (z * z + 1.0)); },
                      std::exp(-eta)};
    }
    if (m.family() == Family::RationalExample) {
        return Oracle{[](double z) { return Vec::Constant(1, z / (1.0 - z)); }, 0.5};
    }
    return std::nullopt;
}

std::optional<TrigForm> trig_form(const ModelSpec& m) {
    if (m.family() == Family::McMillan || m.family() == Family::RationalExample) return std::nullopt;
    TrigForm form = build_trig_form(m);
    if (m.reversed()) {
        std::reverse(form.linear.begin(), form.linear.end());
        for (auto& t : form.terms) t.form = t.form.colwise().reverse().eval();
    }
    return form;
}

}  // namespace invman
