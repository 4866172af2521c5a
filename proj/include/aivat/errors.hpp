#ifndef AIVAT_ERRORS_HPP
#define AIVAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aivat {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// game-core
class InvalidHistoryError : public Error {
 public:
  using Error::Error;
};
class TooLargeError : public Error {
 public:
  using Error::Error;
};

// estimator-core
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};
class DegenerateVariateError : public Error {
 public:
  using Error::Error;
};
class MissingStrategyError : public Error {
 public:
  using Error::Error;
};
class DegenerateGroupError : public Error {
 public:
  using Error::Error;
};
class MissingHeuristicValueError : public Error {
 public:
  using Error::Error;
};

// heuristics
class FeatureDimensionError : public Error {
 public:
  using Error::Error;
};
class HyperplaneDegeneracyError : public Error {
 public:
  using Error::Error;
};
class InvalidDataError : public Error {
 public:
  using Error::Error;
};
class UncertaintyUnavailableError : public Error {
 public:
  using Error::Error;
};

// pathology
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// aggregate-stats
class DegenerateStatisticError : public Error {
 public:
  using Error::Error;
};
class InvalidCovarianceError : public Error {
 public:
  using Error::Error;
};
class InfiniteWeightError : public Error {
 public:
  using Error::Error;
};

// poker-data
class ParseError : public Error {
 public:
  using Error::Error;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};
class InvalidInputError : public Error {
 public:
  using Error::Error;
};
class MissingSeedError : public Error {
 public:
  using Error::Error;
};
class DecompositionError : public Error {
 public:
  using Error::Error;
};

}  // namespace aivat

#endif  // AIVAT_ERRORS_HPP
