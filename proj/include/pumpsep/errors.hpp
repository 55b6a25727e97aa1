#pragma once

#include <stdexcept>
#include <string>

namespace pumpsep {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed input file, bad flag value, or an inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// The model ran but could not produce the requested answer
// (solver failures, extinguished signal, unseparated pulses).
class ModelError : public Error {
public:
    using Error::Error;
};

// CLI exit codes: 0 success, 2 configuration/parse error, 3 solver/model error.
int exit_code_for(const std::exception& e) noexcept;

} // namespace pumpsep
