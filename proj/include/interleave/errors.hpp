#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace interleave {

/// Root of every error raised by the library. Callers that only need to
/// distinguish "ours" from everything else can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---- tagged_stream ---------------------------------------------------------

class MalformedTags : public Error {
 public:
  MalformedTags(std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownTokenizer : public Error {
 public:
  using Error::Error;
};

// ---- trajectory_builder ----------------------------------------------------

class EmptyAfterSplit : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// ---- entailment ------------------------------------------------------------

class Unparseable : public Error {
 public:
  using Error::Error;
};

class RemoteUnavailable : public Error {
 public:
  using Error::Error;
};

class AuthError : public RemoteUnavailable {
 public:
  using RemoteUnavailable::RemoteUnavailable;
};

class Timeout : public RemoteUnavailable {
 public:
  using RemoteUnavailable::RemoteUnavailable;
};

/// Replay mode asked for a query that was never recorded.
class ReplayMiss : public RemoteUnavailable {
 public:
  using RemoteUnavailable::RemoteUnavailable;
};

class CacheCorrupt : public Error {
 public:
  CacheCorrupt(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// ---- pacing_metrics / reward_engine ----------------------------------------

class NoSpeakTokens : public Error {
 public:
  using Error::Error;
};

class GroupTooSmall : public Error {
 public:
  using Error::Error;
};

class DegenerateGroup : public Error {
 public:
  using Error::Error;
};

class NoCorrectSamples : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// ---- cli_pipeline ----------------------------------------------------------

class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace interleave
