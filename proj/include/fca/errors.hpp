#pragma once

#include <stdexcept>
#include <string>

namespace fca {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition or a type invariant.
class ContractError : public Error {
public:
  using Error::Error;
};

// Input data is structurally fine but carries invalid values
// (duplicate ids, negative capacity, nonpositive edge cost, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

// A declared field or column does not exist in the input document.
class SchemaError : public Error {
public:
  using Error::Error;
};

// Broken geometry: unclosed ring, too few vertices, zero-area polygon.
class GeometryError : public Error {
public:
  using Error::Error;
};

// A file could not be read, parsed at the format level, or written.
class IoError : public Error {
public:
  using Error::Error;
};

// No network node within the snap tolerance. Carries the distance to the
// nearest node that was found, so reports can say how far off the site is.
class SnapError : public Error {
public:
  SnapError(const std::string& what, double nearest_distance_m)
      : Error(what), nearest_distance_m_(nearest_distance_m) {}

  double nearest_distance_m() const { return nearest_distance_m_; }

private:
  double nearest_distance_m_;
};

}  // namespace fca
