#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Exact eigenvalue computation hit a characteristic polynomial that does not
// split over the Gaussian rationals.
struct NonSplittingError : Error {
  explicit NonSplittingError(const std::string& what) : Error(what) {}
};

// Operation requires the exact backend (or vice versa).
struct BackendUnsupportedError : Error {
  explicit BackendUnsupportedError(const std::string& what) : Error(what) {}
};

// det(A1|B1) = 0: the point (inf, inf) lies on the support; the caller must
// move it with mobius_shift before normalizing.
struct PointAtInfinityOnSupportError : Error {
  explicit PointAtInfinityOnSupportError(const std::string& what) : Error(what) {}
};

struct SingularGroupElementError : Error {
  explicit SingularGroupElementError(const std::string& what) : Error(what) {}
};

// det M(zeta,eta) vanishes identically; the cokernel sheaf is not 1-dimensional.
struct ZeroDeterminantError : Error {
  explicit ZeroDeterminantError(const std::string& what) : Error(what) {}
};

struct NotAResolutionError : Error {
  explicit NotAResolutionError(const std::string& what) : Error(what) {}
};

struct BidegreeMismatchError : Error {
  explicit BidegreeMismatchError(const std::string& what) : Error(what) {}
};

// The Euler-characteristic fit came out nonlinear; signals a bug or det == 0.
struct NonLinearHilbertError : Error {
  explicit NonLinearHilbertError(const std::string& what) : Error(what) {}
};

struct DegenerateInputError : Error {
  explicit DegenerateInputError(const std::string& what) : Error(what) {}
};

// Integrator observed a conserved quantity drifting more than the tolerance
// within a single step; the step size is too large.
struct StepRejectedError : Error {
  explicit StepRejectedError(const std::string& what) : Error(what) {}
};

struct IncompatibleXYError : Error {
  explicit IncompatibleXYError(const std::string& what) : Error(what) {}
};

struct GenerationFailedError : Error {
  explicit GenerationFailedError(const std::string& what) : Error(what) {}
};

// Exact inverse of a singular matrix, malformed shapes, violated preconditions.
struct SingularMatrixError : Error {
  explicit SingularMatrixError(const std::string& what) : Error(what) {}
};

struct NotDiagonalizableError : Error {
  explicit NotDiagonalizableError(const std::string& what) : Error(what) {}
};

// JSON input that does not match the documented schema.
struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(what) {}
};

}  // namespace spectral
