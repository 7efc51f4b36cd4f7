#pragma once

#include <stdexcept>
#include <string>

namespace arccrit {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid series arithmetic: ramification overflow, bad square root, irrational coefficient.
class SeriesError : public Error {
public:
    using Error::Error;
};

class ArcError : public Error {
public:
    using Error::Error;
};

class GermError : public Error {
public:
    using Error::Error;
};

// Mesh too coarse, point off mesh, no chain between pancakes.
class MetricError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

// Malformed germ specs, literals and configuration files.
class SpecError : public Error {
public:
    using Error::Error;
};

} // namespace arccrit
