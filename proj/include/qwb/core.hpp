#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace qwb {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  ZeroVector,
  DimMismatch,
  NotHermitian,
  EigensolveFailure,
  DoNotCommute,
  NotNormalized,
  PacketTooNarrow,
  PacketNearBoundary,
  GridTooNarrow,
  InvalidGrid,
  StabilityViolation,
  TooFewSamples,
  NoTransmission,
  InvalidJ,
  InvalidArgument,
  ConfigError,
  ExperimentFailed,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qwb
