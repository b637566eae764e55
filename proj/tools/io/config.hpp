#pragma once

#include <string>
#include <vector>

#include "stefan/analysis.hpp"
#include "stefan/eigensolver.hpp"
#include "stefan/fbsolver.hpp"
#include "stefan/model.hpp"

namespace stefan::io {

/// A fully resolved run configuration. `canonical` is the JSON echo with every
/// default filled in; loading it again reproduces the same run.
struct RunConfig {
  std::string name;
  ModelParams params;
  SolverConfig solver;
  ClassifyOptions classify;
  ThresholdOptions threshold;
  EigenSettings eigen;
  SemiWaveOptions semiwave;
  SamplingGrid checks;
  std::string canonical;
  std::string hash;  // sha256 of canonical
};

/// `source` is a file path or a preset name. Overrides are "section.key=value"
/// with value parsed as JSON (bare words are taken as strings).
RunConfig load_config(const std::string& source, const std::vector<std::string>& overrides = {});
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

std::vector<std::string> preset_names();
/// JSON text of a preset; InvalidArgument for unknown names.
std::string preset_text(const std::string& name);

/// Coefficient from shorthand: "const:v", "sin:offset,amp[,phase]",
/// "dip:base,amp,center,width", or a bare number.
CoefficientField parse_coefficient(const std::string& spec, double T);
/// Time function from shorthand: "const:v", "sin:offset,amp[,phase]", or a number.
PeriodicScalarFunction parse_time_function(const std::string& spec, double T);

std::string sha256_hex(const std::string& data);

}  // namespace stefan::io
