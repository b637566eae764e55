#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stefan/error.hpp"
#include "stefan/version.hpp"

namespace stefan::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // shortest text that reads back to the same double
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

OutputSet::OutputSet(std::string prefix, std::string subcommand, std::string inputs_hash)
    : prefix_(std::move(prefix)), subcommand_(std::move(subcommand)), hash_(std::move(inputs_hash)),
      start_(std::chrono::steady_clock::now()) {
  const auto dir = std::filesystem::path(prefix_).parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::string OutputSet::path(const std::string& suffix) {
  std::string p = prefix_ + "." + suffix;
  files_.push_back(p);
  return p;
}

namespace {

void write_text(const std::string& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + p);
  out << text;
}

}  // namespace

std::string OutputSet::json_file(const std::string& suffix, const nlohmann::json& value) {
  auto p = path(suffix);
  write_text(p, value.dump(2) + "\n");
  return p;
}

std::string OutputSet::csv_file(const std::string& suffix, const std::vector<std::string>& header,
                                const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<std::string> c;
    for (double x : r) c.push_back(format_number(x));
    cells.push_back(std::move(c));
  }
  return text_csv_file(suffix, header, cells);
}

std::string OutputSet::text_csv_file(const std::string& suffix, const std::vector<std::string>& header,
                                     const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  for (std::size_t i = 0; i < header.size(); ++i) text += (i ? "," : "") + header[i];
  text += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) text += (i ? "," : "") + r[i];
    text += "\n";
  }
  auto p = path(suffix);
  write_text(p, text);
  return p;
}

std::string OutputSet::text_file(const std::string& suffix, const std::string& text) {
  auto p = path(suffix);
  write_text(p, text);
  return p;
}

std::string OutputSet::write_manifest(int exit_code) {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json m = {
      {"subcommand", subcommand_},
      {"version", STEFAN_VERSION},
      {"config_hash", hash_},
      {"exit_code", exit_code},
      {"outputs", files_},
      {"wall_time_s", wall},
  };
  const std::string p = prefix_ + ".manifest.json";
  write_text(p, m.dump(2) + "\n");
  return p;
}

// --- svg --------------------------------------------------------------------

namespace {

constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 50;

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

std::string svg_line_plot(const std::vector<std::pair<double, double>>& points, const std::string& x_label,
                          const std::string& y_label, const std::string& title) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (auto [x, y] : points) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (points.empty()) x0 = y0 = 0, x1 = y1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << esc(title) << "</text>\n"
    << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\"" << kH - kT - kB
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  // thin dense series to about a thousand vertices
  const std::size_t stride = std::max<std::size_t>(1, points.size() / 1000);
  for (std::size_t i = 0; i < points.size(); i += stride) s << num(px(points[i].first)) << "," << num(py(points[i].second)) << " ";
  if (!points.empty()) s << num(px(points.back().first)) << "," << num(py(points.back().second));
  s << "\"/>\n";
  s << "<text x=\"" << kL << "\" y=\"" << kH - kB + 18 << "\" font-size=\"12\">" << num(x0) << "</text>\n"
    << "<text x=\"" << kW - kR << "\" y=\"" << kH - kB + 18 << "\" font-size=\"12\" text-anchor=\"end\">" << num(x1) << "</text>\n"
    << "<text x=\"" << kL - 6 << "\" y=\"" << kH - kB << "\" font-size=\"12\" text-anchor=\"end\">" << num(y0) << "</text>\n"
    << "<text x=\"" << kL - 6 << "\" y=\"" << kT + 10 << "\" font-size=\"12\" text-anchor=\"end\">" << num(y1) << "</text>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" font-size=\"13\">" << esc(x_label) << "</text>\n"
    << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << kH / 2 << ")\">" << esc(y_label) << "</text>\n</svg>\n";
  return s.str();
}

std::string svg_verdict_map(const std::vector<double>& xs, const std::vector<double>& ys,
                            const std::vector<std::vector<char>>& cells, const std::string& x_label,
                            const std::string& y_label) {
  const double cw = (kW - kL - kR) / std::max<std::size_t>(1, xs.size());
  const double ch = (kH - kT - kB) / std::max<std::size_t>(1, ys.size());
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">verdicts (S spreading, V vanishing, I inconclusive)</text>\n";
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const char v = cells[j][i];
      const char* fill = v == 'S' ? "#d62728" : v == 'V' ? "#1f77b4" : "#bbbbbb";
      const double x = kL + i * cw, y = kH - kB - (j + 1) * ch;
      s << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cw) << "\" height=\"" << num(ch)
        << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s << "<text x=\"" << num(kL + (i + 0.5) * cw) << "\" y=\"" << kH - kB + 16
      << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xs[i]) << "</text>\n";
  }
  for (std::size_t j = 0; j < ys.size(); ++j) {
    s << "<text x=\"" << kL - 6 << "\" y=\"" << num(kH - kB - (j + 0.5) * ch + 4)
      << "\" font-size=\"11\" text-anchor=\"end\">" << num(ys[j]) << "</text>\n";
  }
  s << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" font-size=\"13\">" << esc(x_label) << "</text>\n"
    << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << kH / 2 << ")\">" << esc(y_label) << "</text>\n</svg>\n";
  return s.str();
}

}  // namespace stefan::io
