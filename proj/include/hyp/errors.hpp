#pragma once

#include <stdexcept>
#include <string>

namespace hyp {

/// Failure categories surfaced by the library. Every throw site picks one so
/// callers (and the CLI) can name the offending stage.
enum class ErrorKind {
  ModelMismatch,    // points from different backends mixed in one call
  DegenerateInput,  // repeated boundary points, torsion period, empty sample
  Resource,         // enumeration would exceed the configured memory budget
  Divergence,       // series not summable / diagonal pair measure divergent
  Convergence,      // schedule failed the Cauchy tolerance
  Depth,            // requested depth too shallow (or beyond certified depth)
  Classification,   // operation requires a hyperbolic element
  Config,           // malformed configuration / unknown command
  Uncertified,      // result exists but no finiteness certificate
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ModelMismatch:  return "model-mismatch";
    case ErrorKind::DegenerateInput:return "degenerate-input";
    case ErrorKind::Resource:       return "resource";
    case ErrorKind::Divergence:     return "divergence";
    case ErrorKind::Convergence:    return "convergence-failure";
    case ErrorKind::Depth:          return "depth";
    case ErrorKind::Classification: return "classification";
    case ErrorKind::Config:         return "config";
    case ErrorKind::Uncertified:    return "uncertified";
  }
  return "unknown";
}

}  // namespace hyp
