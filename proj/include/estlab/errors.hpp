#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace estlab {

enum class ErrorKind {
    schema,
    degenerate_moment,
    degenerate_proportion,
    design,
    domain,
    singular_input,
    incomplete_input,
    degenerate_optimum,
    singular_family,
    enumeration_too_large,
    parse,
    validation,
    unknown_id,
    io,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Every library failure is reported through this type; `kind()` lets callers
/// (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace estlab
