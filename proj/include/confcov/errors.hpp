#pragma once

#include <stdexcept>
#include <string>

namespace confcov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotDivisible : public Error {
 public:
  NotDivisible() : Error("polynomial division is not exact") {}
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class NotInvariant : public Error {
 public:
  explicit NotInvariant(const std::string& what)
      : Error("symbol is not expressible in A, B, C: " + what) {}
};

class UnsupportedGenerator : public Error {
 public:
  explicit UnsupportedGenerator(const std::string& name)
      : Error("generator has no invariant representation: " + name) {}
};

class PoleAtParameter : public Error {
 public:
  explicit PoleAtParameter(const std::string& what) : Error("Gamma pole: " + what) {}
};

class SingularPoint : public Error {
 public:
  SingularPoint() : Error("point lies on the singular locus") {}
};

class StencilTooWide : public Error {
 public:
  StencilTooWide() : Error("finite-difference stencil crosses the singular locus") {}
};

class NotConvergent : public Error {
 public:
  explicit NotConvergent(const std::string& what) : Error("not convergent: " + what) {}
};

class NotOnCriticalPlane : public Error {
 public:
  explicit NotOnCriticalPlane(const std::string& what) : Error("not on critical plane: " + what) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace confcov
