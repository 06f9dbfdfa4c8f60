#pragma once

#include <stdexcept>
#include <string>

namespace gpstack {

// Base for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (bad field value, unknown key, bad override).
// The CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Invalid or inconsistent data (malformed input, shape mismatch,
// out-of-domain value, IO failure). The CLI maps this to exit code 3.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// Malformed architecture token string; carries position context in
// the message.
class ParseError : public DataError {
public:
    explicit ParseError(const std::string& msg) : DataError(msg) {}
};

} // namespace gpstack
