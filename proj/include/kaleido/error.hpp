#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kaleido {

enum class ErrorCode {
    DegenerateInput,
    KindMismatch,
    Incidence,
    Parse,
    WrongGeometry,
    NumericDomain,
    InfeasibleFreeVariable,
    NotRealizable,
    ConstructionFailure,
    Domain,
    ObjectTooLarge,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DegenerateInput: return "degenerate_input";
    case ErrorCode::KindMismatch: return "kind_mismatch";
    case ErrorCode::Incidence: return "incidence";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::WrongGeometry: return "wrong_geometry";
    case ErrorCode::NumericDomain: return "numeric_domain";
    case ErrorCode::InfeasibleFreeVariable: return "infeasible_free_variable";
    case ErrorCode::NotRealizable: return "not_realizable";
    case ErrorCode::ConstructionFailure: return "construction_failure";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::ObjectTooLarge: return "object_too_large";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the notation parser; `position()` is the byte offset of the offending character.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(ErrorCode::Parse, message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A free variable drove one of the right-quad / right-pentagon formulas out of its domain.
class InfeasibleFreeVariable : public Error {
public:
    InfeasibleFreeVariable(std::string edge, const std::string& message)
        : Error(ErrorCode::InfeasibleFreeVariable, message), edge_(std::move(edge)) {}

    const std::string& edge() const noexcept { return edge_; }

private:
    std::string edge_;
};

/// Construction ran but the polygon did not close.
class ConstructionFailure : public Error {
public:
    ConstructionFailure(const std::string& message, double closure_gap,
                        std::vector<double> angle_residuals)
        : Error(ErrorCode::ConstructionFailure, message),
          closure_gap_(closure_gap),
          angle_residuals_(std::move(angle_residuals)) {}

    double closure_gap() const noexcept { return closure_gap_; }
    const std::vector<double>& angle_residuals() const noexcept { return angle_residuals_; }

private:
    double closure_gap_;
    std::vector<double> angle_residuals_;
};

} // namespace kaleido
