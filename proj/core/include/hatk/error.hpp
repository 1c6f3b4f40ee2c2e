#pragma once

#include <stdexcept>
#include <string>

namespace hatk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested dyadic scale does not fit the grid's frequency budget.
class ScaleRangeError : public Error {
 public:
  using Error::Error;
};

/// Array extents or axis counts disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A constructed subset failed the major-subset test |E'| >= |E|/2.
class MajorSubsetError : public Error {
 public:
  MajorSubsetError(const std::string& what, double achieved_ratio)
      : Error(what), achieved_ratio_(achieved_ratio) {}

  /// |E'| / |E| that was actually achieved.
  double achieved_ratio() const noexcept { return achieved_ratio_; }

 private:
  double achieved_ratio_;
};

/// Two independent evaluations of the same quantity disagreed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (queries, config files).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hatk
