#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace stefan::io {

/// Writes the files of one run under a common prefix and a manifest listing
/// them. Numbers are printed in shortest round-trip form so reruns are byte-identical.
class OutputSet {
 public:
  OutputSet(std::string prefix, std::string subcommand, std::string inputs_hash);

  /// Returns the path written.
  std::string json_file(const std::string& suffix, const nlohmann::json& value);
  std::string csv_file(const std::string& suffix, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);
  /// Rows given as preformatted cells (for mixed text/number columns).
  std::string text_csv_file(const std::string& suffix, const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows);
  std::string text_file(const std::string& suffix, const std::string& text);

  /// Manifest with hash, subcommand, version, wall time and the file list.
  std::string write_manifest(int exit_code);

  const std::vector<std::string>& files() const { return files_; }
  const std::string& hash() const { return hash_; }

 private:
  std::string path(const std::string& suffix);

  std::string prefix_, subcommand_, hash_;
  std::vector<std::string> files_;
  std::chrono::steady_clock::time_point start_;
};

std::string format_number(double x);

/// Minimal self-contained SVG line plot.
std::string svg_line_plot(const std::vector<std::pair<double, double>>& points, const std::string& x_label,
                          const std::string& y_label, const std::string& title);
/// Verdict map on a grid: cells coloured by verdict letter (S, V, I).
std::string svg_verdict_map(const std::vector<double>& xs, const std::vector<double>& ys,
                            const std::vector<std::vector<char>>& cells, const std::string& x_label,
                            const std::string& y_label);

}  // namespace stefan::io
