#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsmooth {

enum class ErrorKind {
    MalformedPath,
    ParameterDomain,
    Shape,
    UnsupportedOrder,
    DivergentConstant,
    DivergentEnvelope,
    InvalidMixingRate,
    UnsupportedMoment,
    MissingConstant,
    MissingInput,
    InsufficientData,
    Infeasible,
    Uncertified,
    Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, std::string_view what) {
    if (!ok) fail(kind, std::string(what));
}

} // namespace gsmooth
