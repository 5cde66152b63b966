#include "harperlab/errors.hpp"

#include <sstream>

namespace harperlab {

namespace {

template <typename... Ts>
std::string concat(const Ts&... parts) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << parts);
  return os.str();
}

}  // namespace

Error::Error(std::string name, ErrorKind kind, const std::string& message)
    : std::runtime_error(message), name_(std::move(name)), kind_(kind) {}

WindowEmpty::WindowEmpty(long x1, long x2)
    : Error("WindowEmpty", ErrorKind::validation,
            concat("window [", x1, ", ", x2, "] is empty")) {}

ResolventSingular::ResolventSingular(double energy)
    : Error("ResolventSingular", ErrorKind::numeric,
            concat("energy ", energy, " is within the guard interval of an eigenvalue")),
      energy_(energy) {}

SingularSamplingPoint::SingularSamplingPoint(double theta, double distance)
    : Error("SingularSamplingPoint", ErrorKind::numeric,
            concat("sampling point theta=", theta, " lies ", distance,
                   " from a zero of c_lambda")),
      theta_(theta),
      distance_(distance) {}

TooManyExclusions::TooManyExclusions(double fraction)
    : Error("TooManyExclusions", ErrorKind::numeric,
            concat("excluded fraction ", fraction, " of the phase grid exceeds 0.1")),
      fraction_(fraction) {}

BranchAmbiguity::BranchAmbiguity(long step, double increment)
    : Error("BranchAmbiguity", ErrorKind::numeric,
            concat("lift increment ", increment, " at step ", step,
                   " is within 1e-9 of the branch cut")) {}

GridTooCoarse::GridTooCoarse(int grid)
    : Error("GridTooCoarse", ErrorKind::numeric,
            concat("grid of ", grid, " points does not resolve the rotation angle")) {}

ResonantDivisor::ResonantDivisor(long k)
    : Error("ResonantDivisor", ErrorKind::numeric,
            concat("small divisor vanishes at mode k=", k)),
      k_(k) {}

DivisorFloorViolated::DivisorFloorViolated(long k, double divisor, double floor)
    : Error("DivisorFloorViolated", ErrorKind::numeric,
            concat("divisor ", divisor, " at mode k=", k, " is below the floor ", floor)),
      k_(k) {}

PoorlyLocalized::PoorlyLocalized(double r2, double slope)
    : Error("PoorlyLocalized", ErrorKind::numeric,
            concat("exponential fit r2=", r2, " (slope ", slope, ") is below 0.9")),
      r2_(r2) {}

}  // namespace harperlab
