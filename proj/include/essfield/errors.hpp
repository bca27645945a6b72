#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace essfield {

enum class ErrorCode {
    invalid_input,
    numeric_failure,
    pole_evaluation,
    range,
    invalid_field,
    unsupported_gauge,
    spec_rejected,
    not_symmetric,
    no_symmetry,
    invalid_germ,
    path_rejected,
    seed_rejected,
    io,
    parse,
};

inline std::string_view to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::numeric_failure: return "numeric_failure";
    case ErrorCode::pole_evaluation: return "pole_evaluation";
    case ErrorCode::range: return "range";
    case ErrorCode::invalid_field: return "invalid_field";
    case ErrorCode::unsupported_gauge: return "unsupported_gauge";
    case ErrorCode::spec_rejected: return "spec_rejected";
    case ErrorCode::not_symmetric: return "not_symmetric";
    case ErrorCode::no_symmetry: return "no_symmetry";
    case ErrorCode::invalid_germ: return "invalid_germ";
    case ErrorCode::path_rejected: return "path_rejected";
    case ErrorCode::seed_rejected: return "seed_rejected";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace essfield
