#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mogpsa {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A factorization broke down. `pivot()` is the 1-based index of the failing pivot.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::size_t pivot)
        : Error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// A mode vanishes on every sensor so it cannot be normalized.
class DegenerateMode : public Error {
public:
    using Error::Error;
};

/// A reference frequency is zero, so relative shifts are undefined.
class DegenerateReference : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed. The message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Configuration validation failed; `violations()` lists every problem found.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v)
    {
        std::string out = "invalid configuration:";
        for (const auto& s : v) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

} // namespace mogpsa
