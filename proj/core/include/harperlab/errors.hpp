#pragma once

#include <stdexcept>
#include <string>

namespace harperlab {

/// Validation errors reject malformed input; numeric errors mean the input was
/// valid but the computation could not be certified. The CLI maps the two
/// families to exit codes 2 and 3.
enum class ErrorKind { validation, numeric };

class Error : public std::runtime_error {
 public:
  Error(std::string name, ErrorKind kind, const std::string& message);

  const std::string& name() const noexcept { return name_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string name_;
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("InvalidArgument", ErrorKind::validation, message) {}
};

class InvalidCoupling : public Error {
 public:
  explicit InvalidCoupling(const std::string& message)
      : Error("InvalidCoupling", ErrorKind::validation, message) {}
};

class Lambda2Zero : public Error {
 public:
  Lambda2Zero() : Error("Lambda2Zero", ErrorKind::validation, "lambda2 must be positive") {}
};

class WindowEmpty : public Error {
 public:
  WindowEmpty(long x1, long x2);
};

class DepthInsufficient : public Error {
 public:
  explicit DepthInsufficient(const std::string& message)
      : Error("DepthInsufficient", ErrorKind::numeric, message) {}
};

class ResolventSingular : public Error {
 public:
  explicit ResolventSingular(double energy);
  double energy() const noexcept { return energy_; }

 private:
  double energy_;
};

class SingularSamplingPoint : public Error {
 public:
  SingularSamplingPoint(double theta, double distance);
  double theta() const noexcept { return theta_; }
  double distance() const noexcept { return distance_; }

 private:
  double theta_;
  double distance_;
};

class TooManyExclusions : public Error {
 public:
  explicit TooManyExclusions(double fraction);
  double fraction() const noexcept { return fraction_; }

 private:
  double fraction_;
};

class BranchAmbiguity : public Error {
 public:
  BranchAmbiguity(long step, double increment);
};

class GridTooCoarse : public Error {
 public:
  explicit GridTooCoarse(int grid);
};

class ResonantDivisor : public Error {
 public:
  explicit ResonantDivisor(long k);
  long k() const noexcept { return k_; }

 private:
  long k_;
};

class DivisorFloorViolated : public Error {
 public:
  DivisorFloorViolated(long k, double divisor, double floor);
  long k() const noexcept { return k_; }

 private:
  long k_;
};

class PoorlyLocalized : public Error {
 public:
  PoorlyLocalized(double r2, double slope);
  double r2() const noexcept { return r2_; }

 private:
  double r2_;
};

}  // namespace harperlab
