#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rocftp {

/// Raised when a read-once contract is broken: rewinding, replaying or
/// drawing from a poisoned stream.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an engine hits one of its caps before coalescing. Caps are
/// never turned into silent truncation because that would bias the output.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string cap_name, std::uint64_t limit)
      : std::runtime_error("cap exceeded: " + cap_name + " (limit " +
                           std::to_string(limit) + ")"),
        cap_name_(std::move(cap_name)),
        limit_(limit) {}

  const std::string& cap_name() const { return cap_name_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::string cap_name_;
  std::uint64_t limit_;
};

}  // namespace rocftp
