#ifndef MGB_ERRORS_HPP
#define MGB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mgb {

// Raised when an argument lies outside the domain of a model function
// (non-positive distance, probability outside (0,1), empty sample set...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised for inconsistent or unsatisfiable configurations. `key` names the
// offending configuration entry when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, std::string key = {})
      : std::runtime_error(key.empty() ? msg : key + ": " + msg), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace mgb

#endif
