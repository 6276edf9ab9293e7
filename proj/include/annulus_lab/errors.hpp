#pragma once

#include <stdexcept>
#include <string>

namespace annulus_lab {

/// Base class of every error raised by the library. `exit_code()` is the
/// process status the command-line tool reports for it.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

/// Precondition violated by a caller-supplied value.
class ArgumentError : public Error
{
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// Work or memory would exceed a configured cap.
class CapacityError : public Error
{
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// An internal cross-check failed (rounding verification, Poisson mismatch...).
class IntegrityError : public Error
{
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

/// Iterative numerics did not converge.
class NumericalError : public Error
{
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

class IoError : public Error
{
public:
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
};

} // namespace annulus_lab
