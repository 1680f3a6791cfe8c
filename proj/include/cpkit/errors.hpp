#pragma once

#include <stdexcept>
#include <string>

namespace cpkit {

struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised when a dynamical map is requested for a unitary the subspace is not consistent with.
struct InconsistencyError : std::runtime_error {
    explicit InconsistencyError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cpkit
