#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hjlab {

/// Invalid run configuration or misuse of a public interface (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A solver failed to converge, hit a CFL/NaN guard, or an LP stalled (CLI exit code 2).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime evaluation error of a parsed expression; carries the byte offset
/// of the offending node in the source string.
class EvalError : public std::runtime_error {
public:
    EvalError(std::size_t offset, const std::string& what)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace hjlab
