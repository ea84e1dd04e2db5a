#pragma once

#include <stdexcept>
#include <string>

namespace zeic {

// An operation was asked to enumerate more than its configured budget allows.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// A construction could not produce a valid object (e.g. no usable message,
// empty packing). Carries diagnostics in the message.
class ConstructionError : public std::runtime_error {
public:
    explicit ConstructionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace zeic
