#ifndef UNCERT_ERROR_HPP
#define UNCERT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace uncert {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two grids that must share a step (or lattice) do not.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Probability mass left the discretized window (state escaping the grid,
/// joint-distribution window too small, pushforward falling off the grid).
class WindowError : public Error {
public:
    using Error::Error;
};

/// A quantity that must be monotone or conserved drifted beyond tolerance.
class NumericalInconsistency : public Error {
public:
    using Error::Error;
};

} // namespace uncert

#endif // UNCERT_ERROR_HPP
