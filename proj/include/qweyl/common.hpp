#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace qweyl {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define QWEYL_DEFINE_ERROR(Name) \
  struct Name : Error {          \
    using Error::Error;          \
  }

QWEYL_DEFINE_ERROR(OutOfDomain);
QWEYL_DEFINE_ERROR(NonPSD);
QWEYL_DEFINE_ERROR(QuadratureFailure);
QWEYL_DEFINE_ERROR(BracketFailure);
QWEYL_DEFINE_ERROR(DegenerateModel);
QWEYL_DEFINE_ERROR(DegenerateDisk);
QWEYL_DEFINE_ERROR(NoConvergence);
QWEYL_DEFINE_ERROR(NestingViolation);
QWEYL_DEFINE_ERROR(StepUnderflow);
QWEYL_DEFINE_ERROR(HypothesisViolated);
QWEYL_DEFINE_ERROR(BetaNonzero);
QWEYL_DEFINE_ERROR(InsufficientSpan);
QWEYL_DEFINE_ERROR(SplitOutOfRange);
QWEYL_DEFINE_ERROR(MalformedString);
QWEYL_DEFINE_ERROR(InvalidParams);
QWEYL_DEFINE_ERROR(SpecError);

#undef QWEYL_DEFINE_ERROR

// Density triple of the 2x2 matrix H(t) = [[h1, h3], [h3, h2]].
struct Density {
  double h1 = 0;
  double h2 = 0;
  double h3 = 0;
};

// Entrywise primitive Omega(t) = \int_a^t H(s) ds.
struct Omega {
  double t = 0;
  double omega1 = 0;
  double omega2 = 0;
  double omega3 = 0;
};

// Log-domain primitive for models with a huge dynamic range;
// f = omega3 / sqrt(omega1 * omega2).
struct LogOmega {
  double t = 0;
  double log_omega1 = 0;
  double log_omega2 = 0;
  double f = 0;
};

}  // namespace qweyl
