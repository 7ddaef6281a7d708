#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iontomo {

enum class ErrorKind {
    invalid_arguments,
    precondition_violation,
    dimension_mismatch,
    out_of_range,
    truncation_leakage,
    degenerate_input,
    config,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; the kind is what the
// CLI serializes into its error record.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), m_kind(kind) {}

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

} // namespace iontomo
