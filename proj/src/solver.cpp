#include "invman/solver.hpp"

#include "invman/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>

namespace invman {

namespace {

// Produces the residual coefficient of order n+1 for P extended by a zero
// coefficient, then absorbs the true P_{n+1}.
class ResidualEngine {
public:
    virtual ~ResidualEngine() = default;
    virtual Vec probe() const = 0;
    virtual void append(const Vec& coeff) = 0;
};

class RecomputeEngine final : public ResidualEngine {
public:
    RecomputeEngine(const ModelSpec& model, TruncatedSeries P, double lambda)
        : model_(model), P_(std::move(P)), lambda_(lambda) {}

    Vec probe() const override {
        const auto extended = P_.appended(Vec::Zero(P_.dim()));
        return residual_of_series(model_, extended, lambda_).coeff(extended.order());
    }

    void append(const Vec& coeff) override { P_ = P_.appended(coeff); }

private:
    ModelSpec model_;
    TruncatedSeries P_;
    double lambda_;
};

// Keeps sin/cos of every trigonometric argument and extends them one order at
// a time, so each step costs O(n) per term.
class TrigEngine final : public ResidualEngine {
public:
    TrigEngine(TrigForm form, const TruncatedSeries& P, double lambda)
        : form_(std::move(form)), lambda_(lambda) {
        for (const auto& term : form_.terms) {
            std::vector<double> arg;
            for (int k = 0; k <= P.order(); ++k) arg.push_back(argument(term, P.coeff(k), k));
            caches_.push_back(sin_cos(TruncatedSeries::scalar(std::move(arg))));
        }
        order_ = P.order();
        dim_ = P.dim();
    }

    Vec probe() const override {
        Vec b = Vec::Zero(dim_);
        for (std::size_t t = 0; t < caches_.size(); ++t) {
            const auto next = trig_extend(caches_[t], 0.0);
            b += next.sin_series.at(order_ + 1) * form_.terms[t].weight;
        }
        return b;
    }

    void append(const Vec& coeff) override {
        ++order_;
        for (std::size_t t = 0; t < caches_.size(); ++t) {
            caches_[t] = trig_extend(caches_[t], argument(form_.terms[t], coeff, order_));
        }
    }

private:
    // Coefficient k of <form, (P(z), P(lambda z), ...)>.
    double argument(const TrigForm::Term& term, const Vec& coeff, int k) const {
        double value = 0.0;
        const double mu = std::pow(lambda_, k);
        double power = 1.0;
        for (Eigen::Index i = 0; i < term.form.rows(); ++i) {
            value += power * term.form.row(i).dot(coeff);
            power *= mu;
        }
        return value;
    }

    TrigForm form_;
    double lambda_;
    std::vector<TrigCache> caches_;
    int order_ = 0;
    int dim_ = 1;
};

std::unique_ptr<ResidualEngine> make_engine(const ModelSpec& model, const TruncatedSeries& P,
                                            double lambda) {
    if (auto form = trig_form(model)) return std::make_unique<TrigEngine>(std::move(*form), P, lambda);
    return std::make_unique<RecomputeEngine>(model, P, lambda);
}

Vec solve_order(const LinearData& lin, double lambda, int n, const Vec& probe) {
    const double mu = std::pow(lambda, n);
    const Mat t = t_matrix(mu, lin);
    const double det = t.determinant();
    const double guard = kResonanceGuard * std::pow(t_magnitude(mu, lin), lin.dim);
    if (!(std::abs(det) >= guard)) {
        throw Error(ErrorKind::Resonance, "T(lambda^" + std::to_string(n) +
                                              ") is numerically singular (resonance at order " +
                                              std::to_string(n) + ")");
    }
    return -t.partialPivLu().solve(probe);
}

void require_stable(const Eigensolution& eig) {
    if (!(std::abs(eig.lambda) < 1.0) || eig.lambda == 0.0) {
        throw Error(ErrorKind::Usage, "eigenvalue must satisfy 0 < |lambda| < 1");
    }
}

// Core recursion shared by solve and the scale trial run.
TruncatedSeries recurse(const ModelSpec& model, const Eigensolution& eig, const LinearData& lin,
                        double scale, int order) {
    const int d = model.dim();
    if (eig.eigvec.size() != d) throw Error(ErrorKind::Usage, "eigenvector has wrong dimension");
    std::vector<Vec> c{Vec::Zero(d), scale * eig.eigvec};
    TruncatedSeries P = TruncatedSeries::from_coeffs(c);
    auto engine = make_engine(model, P, eig.lambda);
    for (int n = 1; n < order; ++n) {
        const Vec next = solve_order(lin, eig.lambda, n + 1, engine->probe());
        engine->append(next);
        c.push_back(next);
    }
    return TruncatedSeries::from_coeffs(std::span<const Vec>(c.data(), static_cast<std::size_t>(order) + 1));
}

}  // namespace

void SolveConfig::validate() const {
    if (order < 2) throw Error(ErrorKind::Usage, "solve order must be at least 2");
    if (scale && !(*scale > 0.0 && std::isfinite(*scale))) {
        throw Error(ErrorKind::Usage, "scale must be positive");
    }
    if (trial_order < 5 || trial_order > std::max(order, 5)) {
        throw Error(ErrorKind::Usage, "trial order must lie in [5, order]");
    }
}

double series_max(const TruncatedSeries& s) { return s.max_coeff_norm(); }

Vec order_update(const ModelSpec& model, const Eigensolution& eig, const LinearData& lin,
                 const TruncatedSeries& P) {
    require_stable(eig);
    const auto extended = P.appended(Vec::Zero(P.dim()));
    const Vec b = residual_of_series(model, extended, eig.lambda).coeff(extended.order());
    return solve_order(lin, eig.lambda, extended.order(), b);
}

TruncatedSeries residual_series(const ModelSpec& model, const TruncatedSeries& P, double lambda) {
    return residual_of_series(model, P, lambda);
}

std::vector<ResidualSample> residual_sample(const ModelSpec& model, const TruncatedSeries& P,
                                            double lambda, std::span<const double> grid,
                                            ResidualFrame frame) {
    std::vector<ResidualSample> out;
    out.reserve(grid.size());
    std::vector<Vec> theta(static_cast<std::size_t>(model.order()) + 1);
    const double start = frame == ResidualFrame::Centered ? std::pow(lambda, -(model.order() / 2)) : 1.0;
    for (double z : grid) {
        double w = z * start;
        for (auto& t : theta) {
            t = evaluate(P, w);
            w *= lambda;
        }
        out.push_back({z, residual_pointwise(model, theta).lpNorm<Eigen::Infinity>()});
    }
    return out;
}

double choose_scale(const ModelSpec& model, const Eigensolution& eig, int trial_order,
                    std::string* notice) {
    require_stable(eig);
    if (trial_order < 5) throw Error(ErrorKind::Usage, "trial order must be at least 5");
    const auto trial = recurse(model, eig, closed_linear_data(model), 1.0, trial_order);
    // Growth from the highest nonzero trial coefficient (odd models vanish at
    // even k), taking the larger of the k-th root and the two-step ratio.
    for (int k = trial_order; k >= 2; --k) {
        const double size = trial.coeff(k).lpNorm<Eigen::Infinity>();
        if (size == 0.0) continue;
        double growth = std::pow(size, 1.0 / (k - 1));
        if (k - 2 >= 1) {
            const double earlier = trial.coeff(k - 2).lpNorm<Eigen::Infinity>();
            if (earlier > 0.0) growth = std::max(growth, std::sqrt(size / earlier));
        }
        return std::clamp(1.0 / growth, 1e-8, 1e8);
    }
    if (notice) *notice = "trial coefficients beyond order 1 vanish (flat series); using scale 1";
    return 1.0;
}

SolveReport solve(const ModelSpec& model, const Eigensolution& eig, const SolveConfig& cfg) {
    cfg.validate();
    require_stable(eig);
    if (!eig.non_resonant) {
        throw Error(ErrorKind::Resonance, "eigenvalue " + std::to_string(eig.lambda) +
                                              " is resonant (lambda^n hits the spectrum for some n <= " +
                                              std::to_string(eig.n_max) + ")");
    }
    SolveReport report;
    report.lambda = eig.lambda;
    if (cfg.scale) {
        report.scale = *cfg.scale;
    } else {
        std::string notice;
        report.scale = choose_scale(model, eig, cfg.trial_order, &notice);
        if (!notice.empty()) report.notices.push_back(notice);
    }
    const auto lin = closed_linear_data(model);
    report.series = recurse(model, eig, lin, report.scale, cfg.order);

    for (int k = 0; k <= cfg.order; ++k) {
        const double size = report.series.coeff(k).lpNorm<Eigen::Infinity>();
        if (size > report.coeff_max) {
            report.coeff_max = size;
            report.coeff_argmax = k;
        }
    }
    report.residual_series_max = series_max(residual_series(model, report.series, eig.lambda));
    report.residual_tolerance = kSolveTolerance * std::max(1.0, report.coeff_max);
    if (!(report.residual_series_max <= report.residual_tolerance)) {
        throw Error(ErrorKind::InternalConsistency,
                    "residual series does not vanish: max " +
                        std::to_string(report.residual_series_max) + " > " +
                        std::to_string(report.residual_tolerance));
    }
    report.residual_samples = residual_sample(model, report.series, eig.lambda, cfg.sample_grid);
    return report;
}

double normalized_distance(const SolveReport& a, const SolveReport& b, double ref, int count) {
    const int top = std::min({count, a.series.order(), b.series.order()});
    double sup = 0.0;
    for (int k = 0; k <= top; ++k) {
        const Vec pa = a.series.coeff(k) * std::pow(ref / a.scale, k);
        const Vec pb = b.series.coeff(k) * std::pow(ref / b.scale, k);
        sup = std::max(sup, (pa - pb).lpNorm<Eigen::Infinity>());
    }
    return sup;
}

std::vector<ContinuationStep> continuation(const ModelSpec& family, std::string_view parameter,
                                           std::span<const double> path, const SolveConfig& cfg) {
    if (path.empty()) throw Error(ErrorKind::Usage, "continuation path is empty");
    std::vector<ContinuationStep> steps;
    std::optional<double> previous;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto model = family.with_parameter(parameter, path[i]);
        const auto lin = closed_linear_data(model);
        const auto spectrum = analyze(lin);
        Eigensolution eig;
        if (!previous) {
            eig = select_eigensolution(lin, spectrum, cfg.branch);
        } else {
            const auto candidates = stable_branches(spectrum);
            if (candidates.empty()) {
                throw Error(ErrorKind::BranchTracking,
                            "step " + std::to_string(i) + ": no stable eigenvalue to follow");
            }
            const double target = *previous;
            const double lambda = *std::min_element(
                candidates.begin(), candidates.end(),
                [&](double a, double b) { return std::abs(a - target) < std::abs(b - target); });
            if (std::abs(std::abs(lambda) - std::abs(target)) > kBranchJump) {
                throw Error(ErrorKind::BranchTracking,
                            "step " + std::to_string(i) + ": branch lost (nearest eigenvalue " +
                                std::to_string(lambda) + ", previous " + std::to_string(target) + ")");
            }
            const auto check = nonresonance_check(lambda, spectrum);
            eig = Eigensolution{lambda, eigenvector(lambda, lin), check.non_resonant, check.n_max};
        }
        previous = eig.lambda;
        steps.push_back({path[i], eig.lambda, spectrum.singularity_exponent, solve(model, eig, cfg)});
    }
    return steps;
}

}  // namespace invman
