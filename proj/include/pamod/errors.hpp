#ifndef PAMOD_ERRORS_HPP
#define PAMOD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pamod {

// Invalid arguments are reported with std::invalid_argument.

/// An exact algorithm was asked to run beyond its enumeration cap.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// A file could not be opened, read or written.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pamod

#endif  // PAMOD_ERRORS_HPP
