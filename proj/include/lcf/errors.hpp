#ifndef LCF_ERRORS_HPP_
#define LCF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lcf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid/config parameter outside its valid range.
struct InvalidParameter : Error {
  using Error::Error;
};

// A director cell collapsed below the renormalization guard (norm < 0.5),
// signalling a blown-up step; reduce dt.
struct DegenerateDirector : Error {
  using Error::Error;
};

// Iterative linear solver failed to reach its residual target.
struct SolverError : Error {
  SolverError(const std::string& what, double residual_)
      : Error(what), residual(residual_) {}
  double residual;
};

// Stereographic chart evaluated at the south pole.
struct SouthPole : Error {
  using Error::Error;
};

// The fixed time-level-0 chart row alone exceeds the feasibility radius.
struct InfeasibleBase : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace lcf

#endif
