#pragma once

#include <stdexcept>
#include <string>

namespace fcvide {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The componentwise difference x - y is not a valid fuzzy number.
struct NoHDifference : Error {
    using Error::Error;
};

/// Pointwise evaluation at t = 0 of an expression carrying delta terms.
struct DeltaAtPoint : Error {
    using Error::Error;
};

/// Division of rational functions by the zero rational.
struct DivisionByZeroRational : Error {
    using Error::Error;
};

/// Root finding requested on the zero polynomial.
struct ZeroPolynomial : Error {
    using Error::Error;
};

/// Inverse transform produced terms whose imaginary parts do not cancel;
/// indicates a root-clustering failure upstream.
struct ResidualImaginaryTooLarge : Error {
    using Error::Error;
};

/// The assembled Laplace-domain system has identically zero determinant.
struct SingularSystem : Error {
    using Error::Error;
};

/// Problem-file or expression syntax/semantic error. Carries a location.
struct ParseError : Error {
    ParseError(std::string msg, int line, int column)
        : Error(std::move(msg)), line(line), column(column) {}
    int line;
    int column;
};

} // namespace fcvide
