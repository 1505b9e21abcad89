#pragma once

#include <stdexcept>
#include <string>

namespace bidomain {

// Invalid caller input (sizes, ranges, preconditions) is reported with
// std::invalid_argument. The types below cover failures that arise while
// computing.

// Degenerate or inverted element met during assembly.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Loss of definiteness, singular tensors, NaN/Inf in iterations.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inner preconditioner setup failed (e.g. IC(0) restart budget exhausted).
class PreconditionerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense reference computations refused or found an unexpected rank.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration document; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

} // namespace bidomain
