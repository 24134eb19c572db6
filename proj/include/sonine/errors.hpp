#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sonine {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (poles, t <= 0, bad parameters).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical scheme could not reach or certify its accuracy target.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The operation is not defined for this kind of kernel.
class UnsupportedKernelError : public Error {
public:
    using Error::Error;
};

/// A catalog or spec name is not known.
class UnknownNameError : public Error {
public:
    using Error::Error;
};

/// Kernel-spec text could not be parsed; carries the 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace sonine
