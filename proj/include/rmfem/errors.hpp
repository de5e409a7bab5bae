#pragma once

#include <stdexcept>
#include <string>

namespace rmfem {

/// Invalid experiment configuration; surfaced before any compute.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear solve or sampler failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A perturbation scheme that leaves no node free to move.
class DegenerateSchemeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rmfem
