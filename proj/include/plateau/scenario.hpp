#pragma once

// Strict JSON scenario files: wire, spanning generators, named templates,
// epsilon lists, solver overrides. Unknown keys are rejected.

#include <stdexcept>
#include <string>
#include <vector>

#include "plateau/relax.hpp"
#include "plateau/templates.hpp"
#include "plateau/wireframe.hpp"

namespace plateau {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  WireFrame wire;
  SpanningClass spanning;
  std::vector<TemplateSpec> templates;
  std::vector<double> epsilons;
  SolverOptions solver;
  std::string outputs = "out";

  const TemplateSpec* find_template(const std::string& name) const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

// log-spaced epsilon range "START:STOP:N".
std::vector<double> parse_epsilon_range(const std::string& text);

}  // namespace plateau
