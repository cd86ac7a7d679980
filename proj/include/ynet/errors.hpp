#pragma once

#include <stdexcept>
#include <string>

namespace ynet {

// Error taxonomy mapped to distinct process exit codes by the CLI.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad flags, malformed config files, inconsistent option combinations.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Dataset problems: missing root, undecodable images, empty splits.
class DataError : public Error {
public:
    using Error::Error;
};

// Non-finite losses/gradients, division by zero, failed numeric contracts.
class NumericError : public Error {
public:
    using Error::Error;
};

// Corrupt or truncated files, unwritable paths, format violations.
class IoError : public Error {
public:
    using Error::Error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config = 2;
inline constexpr int data = 3;
inline constexpr int numeric = 4;
inline constexpr int io = 5;
}  // namespace exit_code

}  // namespace ynet
