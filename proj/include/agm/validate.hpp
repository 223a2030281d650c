#pragma once

#include <string>
#include <vector>

#include "agm/model.hpp"

namespace agm {

enum class Severity { Error, Warning };

struct Finding {
  Severity severity = Severity::Error;
  SourceLocation location;
  std::string rule;
  std::string message;

  std::string str() const;
};

struct WellFormednessReport {
  std::vector<Finding> findings;

  bool clean() const { return findings.empty(); }
  bool has(const std::string& rule) const;
};

/// Checks every structural and typing rule of a parsed model. Never throws;
/// the report is empty exactly when the model is well formed.
WellFormednessReport validate_model(const Model& model);

}  // namespace agm
