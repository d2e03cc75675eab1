#include <colocal/error.hpp>

namespace colocal {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::NotSimple: return "NotSimple";
        case Errc::NotConnected: return "NotConnected";
        case Errc::SizeTooSmall: return "SizeTooSmall";
        case Errc::SpaceTooLarge: return "SpaceTooLarge";
        case Errc::EdgeOutsideSiteSet: return "EdgeOutsideSiteSet";
        case Errc::ActionLeavesWindow: return "ActionLeavesWindow";
        case Errc::EmptySet: return "EmptySet";
        case Errc::NotSubset: return "NotSubset";
        case Errc::SiteSetMismatch: return "SiteSetMismatch";
        case Errc::InvalidMeasure: return "InvalidMeasure";
        case Errc::NotOrdinary: return "NotOrdinary";
        case Errc::NonProductMeasure: return "NonProductMeasure";
        case Errc::TooManySubsets: return "TooManySubsets";
        case Errc::InvalidPath: return "InvalidPath";
        case Errc::NotClosed: return "NotClosed";
        case Errc::MalformedForm: return "MalformedForm";
        case Errc::WindowTooSmall: return "WindowTooSmall";
        case Errc::NotInvariant: return "NotInvariant";
        case Errc::ResidueNotConserved: return "ResidueNotConserved";
        case Errc::InvalidInteraction: return "InvalidInteraction";
        case Errc::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

}  // namespace colocal
