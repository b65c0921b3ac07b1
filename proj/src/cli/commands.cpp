#include "invman/cli/commands.hpp"

#include "invman/cli/verify.hpp"
#include "invman/solver.hpp"
#include "invman/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace invman::cli {

namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += format_double(xs[i]);
    }
    return out;
}

std::vector<std::string> common_header(std::string_view command, const RunConfig& cfg) {
    const SpectralTolerances tol;
    std::vector<std::string> h{
        "invman " + std::string(kVersion),
        "command: " + std::string(command),
    };
    for (const auto& line : cfg.echo) h.push_back("config: " + line);
    h.push_back("tolerances: unit=" + format_double(tol.unit) + " zero=" + format_double(tol.zero) +
                " resonance=" + format_double(tol.resonance) + " cluster=" +
                format_double(tol.cluster) + " coeff_noise=" + format_double(tol.coeff_noise) +
                " solve=" + format_double(kSolveTolerance) +
                " resonance_guard=" + format_double(kResonanceGuard));
    return h;
}

const ModelSpec& require_model(const RunConfig& cfg) {
    if (!cfg.model) throw Error(ErrorKind::Config, "config has no [model] section");
    return *cfg.model;
}

std::vector<std::string> component_columns(const std::string& name, int dim) {
    if (dim == 1) return {name};
    std::vector<std::string> out;
    for (int i = 0; i < dim; ++i) out.push_back(name + "[" + std::to_string(i) + "]");
    return out;
}

struct Solved {
    SpectrumReport spectrum;
    Eigensolution eig;
    SolveReport report;
};

Solved solve_model(const RunConfig& cfg) {
    const ModelSpec& model = require_model(cfg);
    const auto lin = closed_linear_data(model);
    auto spectrum = analyze(lin);
    auto eig = select_eigensolution(lin, spectrum, cfg.solve.branch);
    auto report = solve(model, eig, cfg.solve);
    return {std::move(spectrum), std::move(eig), std::move(report)};
}

void add_solve_header(std::vector<std::string>& h, const Solved& s) {
    h.push_back("lambda: " + format_double(s.eig.lambda));
    h.push_back("scale: " + format_double(s.report.scale));
    h.push_back("singularity_exponent: " + std::to_string(s.spectrum.singularity_exponent));
    for (const auto& n : s.report.notices) h.push_back("notice: " + n);
}

// Growth rate estimate ||P_k||^(1/k) at the highest nonzero coefficient.
double coeff_growth(const TruncatedSeries& P) {
    for (int k = P.order(); k >= 1; --k) {
        const double size = P.coeff(k).lpNorm<Eigen::Infinity>();
        if (size > 0.0) return std::pow(size, 1.0 / k);
    }
    return 0.0;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage:
        case ErrorKind::Config: return kExitConfig;
        case ErrorKind::NoHyperbolicDirection:
        case ErrorKind::NotAnEigenvalue:
        case ErrorKind::NoStableRoot:
        case ErrorKind::AmbiguousBranch:
        case ErrorKind::Resonance:
        case ErrorKind::BranchTracking: return kExitSpectral;
        case ErrorKind::SingularSeries:
        case ErrorKind::DegenerateInput:
        case ErrorKind::NotFixedPoint:
        case ErrorKind::InternalConsistency:
        case ErrorKind::Domain: return kExitNumerical;
    }
    return kExitNumerical;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
    const ModelSpec& model = require_model(cfg);
    const auto lin = closed_linear_data(model);
    const auto report = analyze(lin);

    CommandResult result;
    TsvTable t;
    t.header = common_header("spectrum", cfg);
    t.header.push_back("model: " + model.describe());
    t.header.push_back("char_poly: " + join(report.char_poly));
    t.header.push_back("hyperbolic: " + yes_no(report.hyperbolic));
    t.header.push_back("non_singular: " + yes_no(report.non_singular));
    t.header.push_back("singularity_exponent: " + std::to_string(report.singularity_exponent));
    t.header.push_back("branch: " + (cfg.solve.branch.index ? std::to_string(*cfg.solve.branch.index)
                                                            : std::string("slow")));
    try {
        const auto eig = select_eigensolution(lin, report, cfg.solve.branch);
        t.header.push_back("lambda: " + format_double(eig.lambda));
        t.header.push_back("non_resonant: " + yes_no(eig.non_resonant));
        t.header.push_back("n_max: " + std::to_string(eig.n_max));
    } catch (const Error& e) {
        if (exit_code_for(e.kind()) != kExitSpectral) throw;
        t.header.push_back("lambda: none");
        result.messages.push_back(e.what());
        result.exit_code = kExitSpectral;
    }
    if (model.family() == Family::FrenkelKontorova && !model.reversed()) {
        try {
            const auto red = chebyshev_reduce(model.as<FrenkelKontorovaParams>());
            t.header.push_back("chebyshev_lambda: " + format_double(red.slow_lambda()));
        } catch (const Error&) {
            t.header.push_back("chebyshev_lambda: none");
        }
    }
    t.columns = {"re", "im", "modulus", "class", "multiplicity"};
    for (const auto& r : report.roots) {
        t.add_row({format_double(r.value.real()), format_double(r.value.imag()),
                   format_double(std::abs(r.value)), std::string(to_string(r.cls)),
                   std::to_string(r.multiplicity)});
    }
    result.files.emplace_back("spectrum", std::move(t));
    return result;
}

CommandResult cmd_solve(const RunConfig& cfg) {
    const Solved s = solve_model(cfg);
    const auto& P = s.report.series;
    const int dim = P.dim();

    TsvTable coeffs;
    coeffs.header = common_header("solve", cfg);
    add_solve_header(coeffs.header, s);
    coeffs.columns = {"k"};
    for (auto& c : component_columns("P", dim)) coeffs.columns.push_back(c);
    for (int k = 0; k <= P.order(); ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (int i = 0; i < dim; ++i) row.push_back(format_double(P.at(k, i)));
        coeffs.add_row(std::move(row));
    }

    TsvTable meta;
    meta.header = common_header("solve", cfg);
    for (const auto& n : s.report.notices) meta.header.push_back("notice: " + n);
    meta.columns = {"lambda", "scale", "order", "residual_series_max", "residual_tolerance",
                    "coeff_max", "coeff_argmax", "coeff_growth", "singularity_exponent",
                    "n_max"};
    for (auto& c : component_columns("eigvec", dim)) meta.columns.push_back(c);
    std::vector<std::string> row{
        format_double(s.eig.lambda),
        format_double(s.report.scale),
        std::to_string(P.order()),
        format_double(s.report.residual_series_max),
        format_double(s.report.residual_tolerance),
        format_double(s.report.coeff_max),
        std::to_string(s.report.coeff_argmax),
        format_double(coeff_growth(P)),
        std::to_string(s.spectrum.singularity_exponent),
        std::to_string(s.eig.n_max),
    };
    for (int i = 0; i < dim; ++i) row.push_back(format_double(s.eig.eigvec(i)));
    meta.add_row(std::move(row));

    CommandResult result;
    result.files.emplace_back("coeffs", std::move(coeffs));
    result.files.emplace_back("meta", std::move(meta));
    return result;
}

CommandResult cmd_residual(const RunConfig& cfg) {
    const ModelSpec& model = require_model(cfg);
    if (!cfg.residual) throw Error(ErrorKind::Config, "config has no [residual] section");
    const Solved s = solve_model(cfg);
    const auto& P = s.report.series;

    TsvTable t;
    t.header = common_header("residual", cfg);
    add_solve_header(t.header, s);
    t.header.push_back("frame: centered");
    t.columns = {"z"};
    for (auto& c : component_columns("P", P.dim())) t.columns.push_back(c);
    t.columns.push_back("abs_residual");
    for (double z : cfg.residual->grid()) {
        std::vector<std::string> row{format_double(z)};
        const Vec value = evaluate(P, z);
        for (int i = 0; i < P.dim(); ++i) row.push_back(format_double(value(i)));
        double phi = std::nan("");
        try {
            const double one[] = {z};
            phi = residual_sample(model, P, s.eig.lambda, one, ResidualFrame::Centered)[0].value;
        } catch (const Error& e) {
            // Outside the model's domain the residual is undefined.
            if (e.kind() != ErrorKind::Domain) throw;
        }
        row.push_back(format_double(phi));
        t.add_row(std::move(row));
    }
    CommandResult result;
    result.files.emplace_back("residual", std::move(t));
    return result;
}

CommandResult cmd_continue(const RunConfig& cfg) {
    const ModelSpec& model = require_model(cfg);
    if (!cfg.cont) throw Error(ErrorKind::Config, "config has no [continue] section");
    const auto path = cfg.cont->path();
    const auto steps = continuation(model, cfg.cont->parameter, path, cfg.solve);

    TsvTable t;
    t.header = common_header("continue", cfg);
    t.header.push_back("parameter: " + cfg.cont->parameter);
    t.header.push_back("distance: sup over k <= 20 of |P_k - P_prev,k| at unit scale");
    t.columns = {"parameter", "lambda", "e", "scale", "residual_series_max", "distance_prev"};
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& st = steps[i];
        const double dist =
            i == 0 ? 0.0 : normalized_distance(steps[i - 1].report, st.report, 1.0, 20);
        t.add_row({format_double(st.parameter), format_double(st.lambda),
                   std::to_string(st.singularity_exponent), format_double(st.report.scale),
                   format_double(st.report.residual_series_max), format_double(dist)});
    }
    CommandResult result;
    result.files.emplace_back("continue", std::move(t));
    return result;
}

int run(std::string_view command, const std::optional<std::filesystem::path>& config,
        const std::optional<std::filesystem::path>& out_dir, std::ostream& out, std::ostream& err) {
    try {
        if (command == "verify") {
            bool ok = true;
            for (const auto& c : run_verify()) {
                out << (c.passed ? "PASS " : "FAIL ") << c.name;
                if (!c.detail.empty()) out << ": " << c.detail;
                out << '\n';
                ok = ok && c.passed;
            }
            return ok ? kExitOk : kExitVerifyFailed;
        }
        if (!config) throw Error(ErrorKind::Config, "--config is required for " + std::string(command));
        const RunConfig cfg = parse_config(*config);

        CommandResult result;
        if (command == "spectrum") {
            result = cmd_spectrum(cfg);
        } else if (command == "solve") {
            result = cmd_solve(cfg);
        } else if (command == "residual") {
            result = cmd_residual(cfg);
        } else if (command == "continue") {
            result = cmd_continue(cfg);
        } else {
            throw Error(ErrorKind::Usage, "unknown command '" + std::string(command) + "'");
        }

        const auto dir = out_dir ? *out_dir : cfg.output.directory;
        std::filesystem::create_directories(dir);
        for (const auto& [suffix, table] : result.files) {
            const auto file = dir / (cfg.output.stem + "." + suffix + ".tsv");
            std::ofstream f(file, std::ios::binary);
            f << table.render();
            if (!f) throw Error(ErrorKind::Config, "cannot write " + file.string());
            out << "wrote " << file.string() << '\n';
        }
        for (const auto& m : result.messages) err << "invman: " << m << '\n';
        return result.exit_code;
    } catch (const Error& e) {
        err << "invman: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "invman: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace invman::cli
