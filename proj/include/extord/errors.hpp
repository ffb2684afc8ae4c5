#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace extord {

// Caller broke a documented precondition (bad argument, wrong function shape, ...).
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// A divisor-system rule is self-inconsistent (AE_p(0) != {0}, delta > nu, unsorted set, ...).
class MalformedSystemError : public std::runtime_error {
 public:
  explicit MalformedSystemError(const std::string& what) : std::runtime_error(what) {}
};

// The phi recursion has no solution: first offending exponent nu has nu not in AE_p(nu).
class UnsolvableError : public std::runtime_error {
 public:
  UnsolvableError(std::uint64_t p, std::uint32_t nu)
      : std::runtime_error("phi recursion unsolvable at p=" + std::to_string(p) +
                           ": nu=" + std::to_string(nu) + " is not admissible for itself"),
        p(p),
        nu(nu) {}
  std::uint64_t p;
  std::uint32_t nu;
};

// A limit theorem hypothesis failed an audit at a concrete prime.
class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(std::uint64_t p, const std::string& inequality)
      : std::runtime_error("hypothesis violated at p=" + std::to_string(p) + ": " + inequality),
        p(p),
        inequality(inequality) {}
  std::uint64_t p;
  std::string inequality;
};

// A local factor (1 - 1/p) * rho(p) is infinite, so the product over primes diverges.
class InfiniteLocalFactorError : public std::runtime_error {
 public:
  explicit InfiniteLocalFactorError(std::uint64_t p)
      : std::runtime_error("local factor at p=" + std::to_string(p) +
                           " is infinite; the constant does not exist as a finite limit"),
        p(p) {}
  std::uint64_t p;
};

// A configured ceiling (sieve size, exponent ceiling, walk depth) was exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Bad run configuration: unknown key, unparsable value, missing required entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace extord
