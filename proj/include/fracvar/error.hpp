#pragma once

#include <stdexcept>
#include <string>

namespace fracvar {

// Invalid parameter value (H outside (0,1), non-positive mesh, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input too short for the requested filter or statistic.
class LengthError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Mismatched lengths or meshes between paths.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Factorization failure, non-finite drift evaluation and similar.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Zero variation, constant path: no logarithm available.
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank-deficient filter family or vanishing regression denominator.
class DesignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A theorem hypothesis needed for the requested quantity does not hold.
class ScopeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed study configuration or a setting in which every replication failed.
class SettingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV / JSON).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracvar
