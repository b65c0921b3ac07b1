#pragma once

#include <stdexcept>
#include <string>

namespace invman {

enum class ErrorKind {
    Usage,
    SingularSeries,
    DegenerateInput,
    NotFixedPoint,
    NoHyperbolicDirection,
    NotAnEigenvalue,
    NoStableRoot,
    AmbiguousBranch,
    Resonance,
    InternalConsistency,
    BranchTracking,
    Domain,
    Config,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto its exit-code contract.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace invman
