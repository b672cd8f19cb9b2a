#pragma once

#include <stdexcept>
#include <string>

namespace relaysim {

enum class ErrorCode {
    ZeroRadius,
    ImpossibleConfig,
    NoRouteExists,
    BelowReferenceDistance,
    NonPositiveCost,
    EmptyCandidates,
    InfeasibleHop,
    DegenerateDist,
    TooLarge,
    BadArgument,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::ZeroRadius: return "ZeroRadius";
        case ErrorCode::ImpossibleConfig: return "ImpossibleConfig";
        case ErrorCode::NoRouteExists: return "NoRouteExists";
        case ErrorCode::BelowReferenceDistance: return "BelowReferenceDistance";
        case ErrorCode::NonPositiveCost: return "NonPositiveCost";
        case ErrorCode::EmptyCandidates: return "EmptyCandidates";
        case ErrorCode::InfeasibleHop: return "InfeasibleHop";
        case ErrorCode::DegenerateDist: return "DegenerateDist";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::BadArgument: return "BadArgument";
    }
    return "Unknown";
}

class SimError : public std::runtime_error {
  public:
    SimError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace relaysim
