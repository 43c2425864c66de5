#pragma once

#include <stdexcept>
#include <string>

namespace gate {

// Load-time failures carry the offending file, field, or case id in what().
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyCategorySet : std::runtime_error {
  EmptyCategorySet() : std::runtime_error("refusal requested for an empty category set") {}
};

struct UnknownInstance : std::runtime_error {
  explicit UnknownInstance(const std::string& id)
      : std::runtime_error("unknown attack instance: " + id) {}
};

struct UnknownFailureMode : std::runtime_error {
  explicit UnknownFailureMode(const std::string& msg) : std::runtime_error(msg) {}
};

struct BackendUnavailable : std::runtime_error {
  explicit BackendUnavailable(const std::string& msg) : std::runtime_error(msg) {}
};

struct MalformedResponse : std::runtime_error {
  explicit MalformedResponse(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gate
