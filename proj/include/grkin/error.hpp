// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace grkin {

/// Failure classes surfaced to callers. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
    config = 1,
    invariant = 2,
    numerical = 3,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Invalid parameters or malformed input, detected before any computation.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string &what) : Error(ErrorKind::config, what) {}
};

/// A structural guarantee (bounds, conservation, sign of a dissipation) was broken.
class InvariantViolation : public Error {
public:
    explicit InvariantViolation(const std::string &what) : Error(ErrorKind::invariant, what) {}
};

/// NaN, non-convergence, or other breakdown of a numerical procedure.
class NumericalFailure : public Error {
public:
    explicit NumericalFailure(const std::string &what) : Error(ErrorKind::numerical, what) {}
};

} // namespace grkin
