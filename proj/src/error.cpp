#include "iontomo/error.hpp"

namespace iontomo {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_arguments:
        return "invalid_arguments";
    case ErrorKind::precondition_violation:
        return "precondition_violation";
    case ErrorKind::dimension_mismatch:
        return "dimension_mismatch";
    case ErrorKind::out_of_range:
        return "out_of_range";
    case ErrorKind::truncation_leakage:
        return "truncation_leakage";
    case ErrorKind::degenerate_input:
        return "degenerate_input";
    case ErrorKind::config:
        return "config";
    }
    return "unknown";
}

} // namespace iontomo
