#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace colocal {

enum class Errc {
    NotSymmetric,
    NotSimple,
    NotConnected,
    SizeTooSmall,
    SpaceTooLarge,
    EdgeOutsideSiteSet,
    ActionLeavesWindow,
    EmptySet,
    NotSubset,
    SiteSetMismatch,
    InvalidMeasure,
    NotOrdinary,
    NonProductMeasure,
    TooManySubsets,
    InvalidPath,
    NotClosed,
    MalformedForm,
    WindowTooSmall,
    NotInvariant,
    ResidueNotConserved,
    InvalidInteraction,
    InvalidInput,
};

std::string_view errc_name(Errc code) noexcept;

/// Domain error raised by every module. name() is the stable identifier that
/// the CLI reports verbatim.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }
    std::string_view name() const noexcept { return errc_name(code_); }

private:
    Errc code_;
};

}  // namespace colocal
