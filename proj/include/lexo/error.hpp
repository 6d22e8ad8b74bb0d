#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexo {

// Observation outside the support of a model family, or a non-finite value.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Out-of-order or discontinuous time indices fed to a stateful stage.
class SequencingError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class UnsupportedOrderError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Bad input data. Carries the 1-based position (record index or line number).
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Enumeration request too large for the brute-force reference.
class OracleLimitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace lexo
