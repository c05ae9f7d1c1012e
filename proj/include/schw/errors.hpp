#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace schw {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the failure.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An argument outside the documented range of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Division by a jet whose value vanishes, or a nonfinite evaluation.
class PoleError : public Error {
public:
    using Error::Error;
};

/// log/sqrt evaluated on the branch cut (nonpositive real axis).
class BranchError : public Error {
public:
    using Error::Error;
};

/// f'(z) vanishes to working precision where a Schwarzian is requested.
class CriticalPointError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure did not reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace schw
