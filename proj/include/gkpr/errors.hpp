#pragma once

#include <stdexcept>
#include <string>

namespace gkpr {

// Invalid physical or model parameters. The CLI maps this to exit code 1.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A numerical invariant was violated inside a kernel (e.g. a spectral power
// produced a significantly negative probability).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gkpr
