#ifndef HYBRIDPROJ_ERRORS_HPP
#define HYBRIDPROJ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hybridproj {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GeometryMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleRegion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inner solver ran out of budget; carries the best iterate's residual.
struct NonConvergence : std::runtime_error {
  double best_residual;
  NonConvergence(const std::string& what, double residual)
      : std::runtime_error(what), best_residual(residual) {}
};

// No sample passed the level condition within the budget.
struct EmptyLevelSet : std::runtime_error {
  double min_residual;  // lowest residual seen among rejected samples
  double bound;         // threshold that had to be met
  EmptyLevelSet(const std::string& what, double min_res, double bnd)
      : std::runtime_error(what), min_residual(min_res), bound(bnd) {}
};

// anchor == x_n, so J(anchor - x_n) = 0 and the half-space degenerates
// to the whole space.
struct DegenerateHalfSpace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  std::string pointer;  // JSON-pointer-style path to the offending entry
  SchemaError(const std::string& what, std::string ptr)
      : std::runtime_error(what + " (at " + ptr + ")"), pointer(std::move(ptr)) {}
};

struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hybridproj

#endif  // HYBRIDPROJ_ERRORS_HPP
