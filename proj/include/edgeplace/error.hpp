#pragma once

#include <stdexcept>
#include <string>

namespace edgeplace {

// Every failure the library reports deliberately, tagged so callers (and the
// CLI exit-code map) can dispatch without parsing messages.
enum class ErrorCode {
  ParseError,          // malformed scenario document / wrong field type
  IoError,             // file could not be read or written
  CycleDetected,       // application dataflow graph is not a DAG
  DanglingEdge,        // dataflow endpoint names an unknown microservice
  MissingLink,         // bandwidth table lacks a required entry
  NonPositiveCapacity, // a capacity/speed/size that must be > 0 is not
  DuplicateId,         // repeated device/registry/microservice id or edge
  InvalidValue,        // any other semantic violation (bad enum, self link...)
  NoFeasibleStrategy,  // a microservice fits nowhere (or nowhere, given others)
  SpaceTooLarge,       // joint strategy space exceeds the enumeration limit
  NonConvergence,      // dynamics hit the sweep cap (surfaced by the CLI only)
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace edgeplace
