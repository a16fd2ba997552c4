#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uncert {

enum class ErrorCode {
  NotHermitian,
  NotPSD,
  DimMismatch,
  NotState,
  BadDim,
  NotDivisor,
  BadRank,
  NotBasis,
  NotPovm,
  NotDistribution,
  NotPure,
  NotProjector,
  ArityMismatch,
  NotMub,
  NotChannel,
  BadSpec,
  NotCoprime,
  NotOrthogonal,
  RealityViolated,
  NotMus,
  UnsupportedRelation,
  BadStep,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Numerical policy shared by every module.
namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kPsd = 1e-10;       // relative to the largest eigenvalue
inline constexpr double kSupport = 1e-12;   // relative to the largest eigenvalue
inline constexpr double kTrace = 1e-10;
inline constexpr double kOrthonormal = 1e-10;
inline constexpr double kPure = 1e-8;
inline constexpr double kEquality = 1e-8;   // bits
inline constexpr double kViolation = 1e-9;  // bits

/// a <= b within the absolute-plus-relative band tol * (1 + |b|).
inline bool approx_le(double a, double b, double tol) { return a <= b + tol * (1.0 + (b < 0 ? -b : b)); }
inline bool approx_eq(double a, double b, double tol) { return approx_le(a, b, tol) && approx_le(b, a, tol); }
}  // namespace tol

}  // namespace uncert
