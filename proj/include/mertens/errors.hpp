#pragma once

#include <stdexcept>
#include <string>

namespace mertens {

// Requested table or query size exceeds the configured memory ceiling.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of the operation.
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Filesystem failure while reading or writing auxiliary data.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Cache file failed structural or checksum validation.
struct CorruptCacheError : std::runtime_error {
  explicit CorruptCacheError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mertens
