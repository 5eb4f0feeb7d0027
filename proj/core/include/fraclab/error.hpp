#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that do not fit together (grid mismatch, wrong sizes, non-finite data).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A precondition on a parameter value is violated (alpha >= ell, odd ell, t <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A runtime-checked mathematical invariant failed (e.g. w(r) crossed zero).
class InvariantError : public Error {
 public:
  using Error::Error;
};

namespace detail {
[[noreturn]] void throw_domain(const std::string& what);
[[noreturn]] void throw_structural(const std::string& what);
[[noreturn]] void throw_numerical(const std::string& what);
}  // namespace detail

inline void require_domain(bool ok, const char* what) {
  if (!ok) detail::throw_domain(what);
}

inline void require_structure(bool ok, const char* what) {
  if (!ok) detail::throw_structural(what);
}

}  // namespace fraclab
