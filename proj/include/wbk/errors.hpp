#pragma once

#include <stdexcept>
#include <string>

namespace wbk {

// Error taxonomy shared by all modules.  Every throw site names the
// offending quantity in the message so CLI diagnostics stay actionable.

struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

struct NonConvergent : std::runtime_error {
  explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureFailure : std::runtime_error {
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

// Integrable kernel form is 0/0 on the diagonal; callers catch this and
// fall back to the series/integral representation.
struct NearDiagonal : std::runtime_error {
  explicit NearDiagonal(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct StepFailure : std::runtime_error {
  explicit StepFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wbk
