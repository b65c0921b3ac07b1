#include "invman/errors.hpp"

namespace invman {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage: return "usage";
        case ErrorKind::SingularSeries: return "singular-series";
        case ErrorKind::DegenerateInput: return "degenerate-input";
        case ErrorKind::NotFixedPoint: return "not-a-fixed-point";
        case ErrorKind::NoHyperbolicDirection: return "no-hyperbolic-direction";
        case ErrorKind::NotAnEigenvalue: return "not-an-eigenvalue";
        case ErrorKind::NoStableRoot: return "no-stable-root";
        case ErrorKind::AmbiguousBranch: return "ambiguous-branch";
        case ErrorKind::Resonance: return "resonance";
        case ErrorKind::InternalConsistency: return "internal-consistency";
        case ErrorKind::BranchTracking: return "branch-tracking";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

}  // namespace invman
