#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bsamp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Truncation window too large, or an index outside it.
class WindowError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// A reconstruction needs a derivative channel the sample set lacks (or has
/// only partially), or has one it must not have.
class MissingChannelError : public Error {
public:
    using Error::Error;
};

/// Sample set lives on the wrong lattice (theta) for the requested series.
class WrongLatticeError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

/// Malformed DSAMP input; line() is 1-based, 0 when not tied to a line.
class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace bsamp
