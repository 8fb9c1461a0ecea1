#pragma once

#include <stdexcept>
#include <string>

namespace bernop {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A polynomial that was required to be nondecreasing is decreasing somewhere.
class NotIncreasingError : public Error {
public:
    explicit NotIncreasingError(const std::string& what) : Error(what) {}
};

/// A value lies outside the range it must belong to (e.g. inverting y outside f([a,b])).
class OutOfRangeError : public Error {
public:
    explicit OutOfRangeError(const std::string& what) : Error(what) {}
};

/// Requested representation degree is smaller than the polynomial degree.
class DegreeTooHighError : public Error {
public:
    explicit DegreeTooHighError(const std::string& what) : Error(what) {}
};

/// A basis or coordinate index is outside 0..n.
class IndexOutOfRangeError : public Error {
public:
    explicit IndexOutOfRangeError(const std::string& what) : Error(what) {}
};

/// Operation requires an operator that exists, but construction failed.
class OperatorNotDefinedError : public Error {
public:
    explicit OperatorNotDefinedError(const std::string& what) : Error(what) {}
};

/// Points passed to a determinant-style test were not strictly ordered.
class NotOrderedError : public Error {
public:
    explicit NotOrderedError(const std::string& what) : Error(what) {}
};

/// Input text (polynomial expression, JSON document, number) failed to parse.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace bernop
