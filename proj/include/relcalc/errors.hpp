#pragma once

#include <stdexcept>
#include <string>

namespace relcalc {

enum class Err {
    SpaceMismatch,
    NegativeEpsilon,
    PointOutsideSpace,
    NonClosedRestriction,
    DomainNotDense,
    NotFullDomain,
    NonUniqueMinimal,
    NotSuitable,
    NotIsomorphism,
    NotContinuous,
    NotTotal,
    DimensionMismatch,
    ResolutionTooLarge,
    CellLimit,
    Parse,
    Internal,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::SpaceMismatch: return "SpaceMismatch";
        case Err::NegativeEpsilon: return "NegativeEpsilon";
        case Err::PointOutsideSpace: return "PointOutsideSpace";
        case Err::NonClosedRestriction: return "NonClosedRestriction";
        case Err::DomainNotDense: return "DomainNotDense";
        case Err::NotFullDomain: return "NotFullDomain";
        case Err::NonUniqueMinimal: return "NonUniqueMinimal";
        case Err::NotSuitable: return "NotSuitable";
        case Err::NotIsomorphism: return "NotIsomorphism";
        case Err::NotContinuous: return "NotContinuous";
        case Err::NotTotal: return "NotTotal";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::ResolutionTooLarge: return "ResolutionTooLarge";
        case Err::CellLimit: return "CellLimit";
        case Err::Parse: return "Parse";
        case Err::Internal: return "Internal";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const { return code_; }

  private:
    Err code_;
};

}  // namespace relcalc
