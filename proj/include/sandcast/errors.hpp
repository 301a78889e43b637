#ifndef SANDCAST_ERRORS_HPP
#define SANDCAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sandcast {

// Exit-code mapping: UsageError -> 1, DataError -> 2, NumericError -> 3.
// Messages carry the specific failure kind ("extrapolation", "empty-zone", ...)
// plus context (file, line number, well id) where available.

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sandcast

#endif
