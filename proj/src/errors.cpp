#include "estlab/errors.hpp"

namespace estlab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::schema: return "schema";
        case ErrorKind::degenerate_moment: return "degenerate-moment";
        case ErrorKind::degenerate_proportion: return "degenerate-proportion";
        case ErrorKind::design: return "design";
        case ErrorKind::domain: return "domain";
        case ErrorKind::singular_input: return "singular-input";
        case ErrorKind::incomplete_input: return "incomplete-input";
        case ErrorKind::degenerate_optimum: return "degenerate-optimum";
        case ErrorKind::singular_family: return "singular-family";
        case ErrorKind::enumeration_too_large: return "enumeration-too-large";
        case ErrorKind::parse: return "parse";
        case ErrorKind::validation: return "validation";
        case ErrorKind::unknown_id: return "unknown-id";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace estlab
