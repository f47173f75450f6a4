#pragma once

#include <stdexcept>
#include <string>

namespace fluidruin {

/// Invalid input or parameters (bad model, gamma too small, empty grids, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure while reading a model document.
class ParseError : public DomainError {
public:
    enum class Kind { syntax, schema, dimension };

    ParseError(Kind kind, const std::string& what) : DomainError(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace fluidruin
