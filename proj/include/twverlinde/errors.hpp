#pragma once

#include <stdexcept>
#include <string>

namespace twv {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad type string, inadmissible (series, rank), malformed input
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class GroupTooLarge : public Error {
public:
    using Error::Error;
};

class AmbiguousPhase : public Error {
public:
    using Error::Error;
};

class NonIntegral : public Error {
public:
    using Error::Error;
};

class NotUnitary : public Error {
public:
    using Error::Error;
};

}  // namespace twv
