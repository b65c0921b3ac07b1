#pragma once

#include "invman/models.hpp"

#include <string>
#include <vector>

namespace invman::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ReferenceRow {
    std::string label;
    FrenkelKontorovaParams params;
    double lambda;
};

struct VerifyOptions {
    /// Reference slow eigenvalues for Frenkel-Kontorova parameter sets.
    std::vector<ReferenceRow> reference = default_reference_rows();
    /// Multiplies delta before solving; -1 flips the sign of the on-site potential.
    double potential_sign = 1.0;

    static std::vector<ReferenceRow> default_reference_rows();
};

/// Oracle and invariant checks. Never throws; failures land in the results.
std::vector<CheckResult> run_verify(const VerifyOptions& opts = {});

}  // namespace invman::cli
