#pragma once

#include <stdexcept>
#include <string>

namespace lvasym {

/// Base class for every numeric-domain failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (t <= 0, z <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The volatility coefficient a(0,z) is not strictly positive, or a jet field is not finite.
class DegenerateCoefficient : public Error {
public:
    using Error::Error;
};

/// The spatial grid does not resolve the kernel well enough for the requested accuracy.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace lvasym
