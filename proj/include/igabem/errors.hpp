#pragma once

#include <stdexcept>
#include <string>

namespace igabem {

// Parameter outside the domain of a function (e.g. spline evaluation off [a,b]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid setup: knot vectors, node counts, collocation abscissas, config files.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mismatched shapes or intervals passed to an algorithm.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Degenerate geometry: invalid weights, vanishing area element.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singularity extraction failed (reference kernel not positive on the support).
class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense solver breakdown (singular pivot, rank deficiency).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace igabem
