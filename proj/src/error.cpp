#include "weakoam/error.hpp"

namespace weakoam {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadShape: return "BadShape";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::OrthogonalPostselection: return "OrthogonalPostselection";
        case ErrorCode::NonCommuting: return "NonCommuting";
        case ErrorCode::DegeneracyUnresolved: return "DegeneracyUnresolved";
        case ErrorCode::BadGrid: return "BadGrid";
        case ErrorCode::ExtentTooSmall: return "ExtentTooSmall";
        case ErrorCode::PostselectionTooRare: return "PostselectionTooRare";
        case ErrorCode::AmplificationOutOfRange: return "AmplificationOutOfRange";
        case ErrorCode::CalibrationMissing: return "CalibrationMissing";
        case ErrorCode::BadAxis: return "BadAxis";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

}  // namespace weakoam
