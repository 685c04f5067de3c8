#pragma once

#include <stdexcept>
#include <string>

namespace revsent {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (bad length, empty input, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

// Input data failed validation (duplicate ids, malformed config, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// The inference service answered with something that breaks the v1 contract.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ContractViolation(message);
}

}  // namespace revsent
