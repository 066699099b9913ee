#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace covert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A symbol or index outside the alphabet it was looked up in.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Structurally malformed scenario (wrong table sizes, non-stochastic rows...).
class ScenarioError : public Error {
 public:
  using Error::Error;
};

// Observation with zero total likelihood under both sender types.
class ImpossibleObservation : public Error {
 public:
  using Error::Error;
};

class DegenerateLikelihood : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration asked to go beyond its horizon bound.
class HorizonTooLarge : public Error {
 public:
  using Error::Error;
};

// Raised by the engine when a scenario fails validate_scenario.
class InvalidScenario : public Error {
 public:
  using Error::Error;
};

struct SchemaIssue {
  std::string path;
  std::string message;
};

// One or more problems found while reading a scenario document. Every issue
// carries the JSON path of the offending field.
class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<SchemaIssue> issues);

  const std::vector<SchemaIssue>& issues() const { return issues_; }

 private:
  std::vector<SchemaIssue> issues_;
};

}  // namespace covert
