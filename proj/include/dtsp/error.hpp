#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dtsp {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A city set that cannot form a valid instance (too small, duplicate ids,
// non-finite or coincident coordinates).
class InvalidInstanceError : public Error {
public:
    using Error::Error;
};

// Unparseable instance or schedule file; the message names the line.
class FormatError : public Error {
public:
    using Error::Error;
};

// A tour that is not a permutation of the instance's current city ids.
class InvalidTourError : public Error {
public:
    using Error::Error;
};

// Argument outside an operation's documented domain.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

// Dynamic event referencing a missing city, a duplicate id, or shrinking an
// instance below three cities.
class EventError : public Error {
public:
    using Error::Error;
};

// Non-finite objective or gradient value; carries the offending point.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::vector<double> at)
        : Error(what), point(std::move(at)) {}
    std::vector<double> point;
};

// Filesystem failure; the message names the path.
class FileError : public Error {
public:
    using Error::Error;
};

// Invalid experiment configuration (maps to CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

// compare_solvers given configs that do not share instance and seeds.
class InvalidComparisonError : public Error {
public:
    using Error::Error;
};

} // namespace dtsp
