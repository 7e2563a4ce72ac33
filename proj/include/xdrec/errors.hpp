#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace xdrec {

// Base for everything this library throws. `code()` is a stable,
// machine-readable identifier (e.g. "FileNotFound", "ShapeMismatch");
// what() is "<code>: <detail>".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Bad inputs: files, shapes, ranges, invalid configuration. CLI exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

// Numerical breakdown (NaN/Inf in an optimizer). CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace xdrec
