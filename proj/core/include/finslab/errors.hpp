#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace finslab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic fault or evaluation on a singular locus. Carries the offending
/// point when one is known.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::vector<double> point = {})
      : Error(what + format_point(point)), reason_(what), point_(std::move(point)) {}

  const std::string& reason() const noexcept { return reason_; }
  const std::vector<double>& point() const noexcept { return point_; }

  DomainError at(std::vector<double> point) const { return DomainError(reason_, std::move(point)); }

 private:
  static std::string format_point(const std::vector<double>& p) {
    if (p.empty()) return {};
    std::string s = " at (";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(p[i]);
    }
    return s + ")";
  }

  std::string reason_;
  std::vector<double> point_;
};

/// Degenerate Riemannian data: a_ij not symmetric positive definite.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid setup: dependent fit basis, too few probes, violated constructor
/// preconditions.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside the regime where it is defined.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace finslab
