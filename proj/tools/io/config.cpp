#include "config.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stefan/error.hpp"

namespace stefan::io {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorKind::InvalidArgument, "config " + where + ": " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) bad(where, "unknown key '" + k + "'");
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) bad(where, "missing '" + key + "'");
  if (!obj.at(key).is_number()) bad(where, "'" + key + "' must be a number");
  return obj.at(key).get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::vector<double> split_numbers(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      bad(where, "cannot read number '" + item + "'");
    }
  }
  return out;
}

// --- time functions -------------------------------------------------------

json time_shorthand(const std::string& s, const std::string& where) {
  const auto colon = s.find(':');
  const std::string kind = colon == std::string::npos ? "" : s.substr(0, colon);
  const auto args = split_numbers(colon == std::string::npos ? s : s.substr(colon + 1), where);
  if ((kind.empty() || kind == "const") && args.size() == 1) return {{"type", "constant"}, {"value", args[0]}};
  if (kind == "sin" && (args.size() == 2 || args.size() == 3)) {
    return {{"type", "sinusoid"}, {"offset", args[0]}, {"amplitude", args[1]},
            {"phase", args.size() == 3 ? args[2] : 0.0}};
  }
  bad(where, "unrecognised time function '" + s + "'");
}

json normalize_time(const json& j, const std::string& where) {
  if (j.is_number()) return {{"type", "constant"}, {"value", j.get<double>()}};
  if (j.is_string()) return time_shorthand(j.get<std::string>(), where);
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) bad(where, "expected a time function");
  const auto type = j.at("type").get<std::string>();
  if (type == "constant") {
    check_keys(j, {"type", "value"}, where);
    return {{"type", type}, {"value", number(j, "value", where)}};
  }
  if (type == "sinusoid") {
    check_keys(j, {"type", "offset", "amplitude", "phase"}, where);
    return {{"type", type}, {"offset", number(j, "offset", where)},
            {"amplitude", number(j, "amplitude", where)}, {"phase", number_or(j, "phase", 0.0, where)}};
  }
  if (type == "tabulated") {
    check_keys(j, {"type", "samples"}, where);
    if (!j.contains("samples") || !j.at("samples").is_array()) bad(where, "tabulated needs 'samples'");
    std::vector<double> s;
    for (const auto& x : j.at("samples")) {
      if (!x.is_number()) bad(where, "samples must be numbers");
      s.push_back(x.get<double>());
    }
    if (s.size() < 4) bad(where, "tabulated time function needs at least 4 samples");
    return {{"type", type}, {"samples", s}};
  }
  bad(where, "unknown time function type '" + type + "'");
}

PeriodicScalarFunction build_time(const json& c, double T) {
  const auto type = c.at("type").get<std::string>();
  if (type == "constant") return PeriodicScalarFunction::constant(T, c.at("value").get<double>());
  if (type == "sinusoid") {
    return PeriodicScalarFunction::sinusoid(T, c.at("offset").get<double>(), c.at("amplitude").get<double>(),
                                            c.at("phase").get<double>());
  }
  return PeriodicScalarFunction::tabulated(T, c.at("samples").get<std::vector<double>>());
}

// --- coefficients -----------------------------------------------------------

json coefficient_shorthand(const std::string& s, const std::string& where) {
  if (s.rfind("dip:", 0) == 0) {
    const auto a = split_numbers(s.substr(4), where);
    if (a.size() != 4) bad(where, "dip shorthand is dip:base,amplitude,center,width");
    return {{"type", "dip"}, {"base", {{"type", "constant"}, {"value", a[0]}}},
            {"amplitude", a[1]}, {"center", a[2]}, {"width", a[3]}};
  }
  auto t = time_shorthand(s, where);
  if (t.at("type") == "constant") return t;
  return {{"type", "time"}, {"rule", t}};
}

json normalize_coefficient(const json& j, const std::string& where) {
  if (j.is_number()) return {{"type", "constant"}, {"value", j.get<double>()}};
  if (j.is_string()) return coefficient_shorthand(j.get<std::string>(), where);
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) bad(where, "expected a coefficient");
  const auto type = j.at("type").get<std::string>();
  const std::set<std::string> extra = {"lower", "upper", "liminf", "limsup"};
  auto keys = [&](std::set<std::string> own) {
    own.insert(extra.begin(), extra.end());
    own.insert("type");
    check_keys(j, own, where);
  };
  json out;
  if (type == "constant") {
    keys({"value"});
    out = {{"type", type}, {"value", number(j, "value", where)}};
  } else if (type == "sinusoid") {
    keys({"offset", "amplitude", "phase"});
    json t = j;
    for (const auto& k : extra) t.erase(k);
    out = {{"type", "time"}, {"rule", normalize_time(t, where)}};
  } else if (type == "time") {
    keys({"rule"});
    if (!j.contains("rule")) bad(where, "time coefficient needs 'rule'");
    out = {{"type", type}, {"rule", normalize_time(j.at("rule"), where + ".rule")}};
  } else if (type == "dip") {
    keys({"base", "amplitude", "center", "width"});
    if (!j.contains("base")) bad(where, "dip needs 'base'");
    out = {{"type", type}, {"base", normalize_time(j.at("base"), where + ".base")},
           {"amplitude", number(j, "amplitude", where)}, {"center", number_or(j, "center", 0.0, where)},
           {"width", number_or(j, "width", 1.0, where)}};
  } else if (type == "tabulated") {
    keys({"r_out", "values"});
    if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty()) {
      bad(where, "tabulated needs 'values' as rows over time");
    }
    std::vector<std::vector<double>> rows;
    for (const auto& row : j.at("values")) {
      if (!row.is_array()) bad(where, "tabulated 'values' must be an array of rows");
      rows.push_back(row.get<std::vector<double>>());
      if (rows.back().size() != rows.front().size() || rows.back().size() < 2) {
        bad(where, "tabulated rows need equal length >= 2");
      }
    }
    out = {{"type", type}, {"r_out", number(j, "r_out", where)}, {"values", rows}};
  } else {
    bad(where, "unknown coefficient type '" + type + "'");
  }
  for (const auto& k : extra) {
    if (j.contains(k)) out[k] = normalize_time(j.at(k), where + "." + k);
  }
  return out;
}

CoefficientField build_coefficient(const json& c, double T) {
  const auto type = c.at("type").get<std::string>();
  CoefficientField f;
  if (type == "constant") {
    f = CoefficientField::constant(T, c.at("value").get<double>());
  } else if (type == "time") {
    f = CoefficientField::time_periodic(build_time(c.at("rule"), T));
  } else if (type == "dip") {
    f = CoefficientField::gaussian_dip(build_time(c.at("base"), T), c.at("amplitude").get<double>(),
                                       c.at("center").get<double>(), c.at("width").get<double>());
  } else {
    const auto rows = c.at("values").get<std::vector<std::vector<double>>>();
    std::vector<double> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    f = CoefficientField::tabulated(RadialPeriodicField(T, c.at("r_out").get<double>(),
                                                        static_cast<int>(rows.size()),
                                                        static_cast<int>(rows.front().size()) - 1,
                                                        std::move(flat)));
  }
  if (c.contains("lower") || c.contains("upper")) {
    f = f.with_envelopes(c.contains("lower") ? build_time(c.at("lower"), T) : f.lower(),
                         c.contains("upper") ? build_time(c.at("upper"), T) : f.upper());
  }
  if (c.contains("liminf") || c.contains("limsup")) {
    f = f.with_asymptotics(c.contains("liminf") ? build_time(c.at("liminf"), T) : f.liminf_or_lower(),
                           c.contains("limsup") ? build_time(c.at("limsup"), T) : f.limsup_or_upper());
  }
  return f;
}

// --- initial profiles -----------------------------------------------------

json normalize_profile(const json& j, const std::string& where) {
  if (j.is_number()) return {{"type", "constant"}, {"value", j.get<double>()}};
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) bad(where, "expected a profile");
  const auto type = j.at("type").get<std::string>();
  if (type == "cosine" || type == "parabola") {
    check_keys(j, {"type", "amplitude"}, where);
    return {{"type", type}, {"amplitude", number(j, "amplitude", where)}};
  }
  if (type == "constant") {
    check_keys(j, {"type", "value"}, where);
    return {{"type", type}, {"value", number(j, "value", where)}};
  }
  if (type == "gaussian") {
    check_keys(j, {"type", "base", "amplitude", "width"}, where);
    return {{"type", type}, {"base", number_or(j, "base", 0.0, where)},
            {"amplitude", number(j, "amplitude", where)}, {"width", number(j, "width", where)}};
  }
  if (type == "samples") {
    check_keys(j, {"type", "extent", "values"}, where);
    if (!j.contains("values") || !j.at("values").is_array()) bad(where, "samples needs 'values'");
    return {{"type", type}, {"extent", number(j, "extent", where)},
            {"values", j.at("values").get<std::vector<double>>()}};
  }
  bad(where, "unknown profile type '" + type + "'");
}

RadialProfile build_profile(const json& c) {
  const auto type = c.at("type").get<std::string>();
  RadialProfile p;
  if (type == "cosine") p.shape = RadialProfile::Cosine{c.at("amplitude").get<double>()};
  if (type == "parabola") p.shape = RadialProfile::Parabola{c.at("amplitude").get<double>()};
  if (type == "constant") p.shape = RadialProfile::Constant{c.at("value").get<double>()};
  if (type == "gaussian") {
    p.shape = RadialProfile::Gaussian{c.at("base").get<double>(), c.at("amplitude").get<double>(),
                                      c.at("width").get<double>()};
  }
  if (type == "samples") {
    p.shape = RadialProfile::Samples{c.at("extent").get<double>(), c.at("values").get<std::vector<double>>()};
  }
  return p;
}

// --- sections ---------------------------------------------------------------

const json& section_defaults() {
  static const json d = {
      {"problem", {{"N", 1}, {"T", 1.0}, {"d1", 1.0}, {"d2", 1.0}, {"mu", 1.0}}},
      {"coefficients", {{"m1", 1.0}, {"m2", 1.0}, {"b1", 1.0}, {"b2", 1.0}, {"c1", 0.2}, {"c2", 0.3}}},
      {"initial",
       {{"h0", 1.0}, {"u0", {{"type", "cosine"}, {"amplitude", 0.5}}}, {"v0", {{"type", "constant"}, {"value", 1.0}}}}},
      {"solver",
       {{"Ns", 256}, {"Nr", 1024}, {"steps_per_period", 256}, {"R_out", 40.0}, {"t_end", 50.0},
        {"snapshot_every", 1}, {"negativity_tolerance", 1e-12}}},
      {"analysis",
       {{"tol_u_factor", 1e-4}, {"tol_h_factor", 1e-5}, {"stall_periods", 5}, {"min_periods", 20},
        {"max_doublings", 2}, {"rel_width", 1e-2}, {"entire_r_out", 0.0}, {"entire_grid", 0}}},
      {"eigen", {{"grid", 256}, {"steps_per_period", 256}, {"block", 6}, {"max_iterations", 500}, {"tolerance", 1e-8}}},
      {"semiwave",
       {{"dr", 0.02}, {"L", 0.0}, {"steps_per_period", 128}, {"relaxation", 0.5}, {"tolerance", 1e-6},
        {"max_iterations", 500}}},
      {"checks", {{"time_samples", 64}, {"space_samples", 256}, {"r_max", 20.0}}},
  };
  return d;
}

// Plain sections: defaults merged key by key, with the default's type.
json merge_plain(const json& user, const json& defaults, const std::string& where) {
  json out = defaults;
  if (user.is_null()) return out;
  std::set<std::string> allowed;
  for (const auto& [k, v] : defaults.items()) allowed.insert(k);
  check_keys(user, allowed, where);
  for (const auto& [k, v] : user.items()) {
    const auto& dv = defaults.at(k);
    if (!v.is_number()) bad(where, "'" + k + "' must be a number");
    if (dv.is_number_integer()) {
      const double x = v.get<double>();
      if (x != static_cast<double>(static_cast<long long>(x))) bad(where, "'" + k + "' must be an integer");
      out[k] = static_cast<long long>(x);
    } else {
      out[k] = v.get<double>();
    }
  }
  return out;
}

void apply_override(json& root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) bad("override", "expected section.key=value, got '" + spec + "'");
  const std::string path = spec.substr(0, eq);
  const std::string text = spec.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &root;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object() && !node->is_null()) bad("override", "'" + path + "' crosses a non-object");
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

json presets() {
  json spread = {
      {"name", "bench_spread"},
      {"problem", {{"N", 1}, {"T", 1.0}, {"d1", 1.0}, {"d2", 1.0}, {"mu", 5.0}}},
      {"coefficients", {{"m1", 1.0}, {"m2", 1.0}, {"b1", 1.0}, {"b2", 1.0}, {"c1", 0.2}, {"c2", 0.3}}},
      {"initial",
       {{"h0", 2.0}, {"u0", {{"type", "cosine"}, {"amplitude", 0.5}}}, {"v0", {{"type", "constant"}, {"value", 1.0}}}}},
      {"solver", {{"Ns", 256}, {"Nr", 2000}, {"steps_per_period", 256}, {"R_out", 100.0}, {"t_end", 50.0}}},
  };
  json vanish = spread;
  vanish["name"] = "bench_vanish";
  vanish["problem"]["mu"] = 0.05;
  vanish["initial"]["h0"] = 0.5;
  vanish["initial"]["u0"]["amplitude"] = 0.05;
  vanish["solver"] = {{"Ns", 128}, {"Nr", 512}, {"steps_per_period", 128}, {"R_out", 40.0}, {"t_end", 200.0}};
  json family = vanish;
  family["name"] = "bench_family";
  family["problem"]["mu"] = 1.0;
  family["initial"]["u0"]["amplitude"] = 0.5;
  family["solver"] = {{"Ns", 128}, {"Nr", 512}, {"steps_per_period", 64}, {"R_out", 40.0}, {"t_end", 40.0},
                      {"snapshot_every", 0}};
  json seasonal = spread;
  seasonal["name"] = "seasonal";
  seasonal["coefficients"]["m1"] = {{"type", "dip"}, {"base", "sin:1,0.5"}, {"amplitude", 1.5},
                                    {"center", 0.0}, {"width", 1.0}};
  seasonal["coefficients"]["m2"] = "sin:1,0.3,1.5707963267948966";
  seasonal["initial"]["h0"] = 1.0;
  return {{"bench_spread", spread}, {"bench_vanish", vanish}, {"bench_family", family}, {"seasonal", seasonal}};
}

RunConfig build(json root, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(root, o);
  check_keys(root, {"name", "problem", "coefficients", "initial", "solver", "analysis", "eigen", "semiwave", "checks"},
             "root");
  const auto& d = section_defaults();
  auto sec = [&](const char* name) { return root.contains(name) ? root.at(name) : json(); };

  json c;
  c["name"] = root.contains("name") ? root.at("name") : json("custom");
  if (!c["name"].is_string()) bad("root", "'name' must be a string");
  for (const char* s : {"problem", "solver", "analysis", "eigen", "semiwave", "checks"}) {
    c[s] = merge_plain(sec(s), d.at(s), s);
  }
  {
    const json user = sec("coefficients");
    if (!user.is_null()) check_keys(user, {"m1", "m2", "b1", "b2", "c1", "c2"}, "coefficients");
    for (const auto& [k, v] : d.at("coefficients").items()) {
      const json& src = (!user.is_null() && user.contains(k)) ? user.at(k) : v;
      c["coefficients"][k] = normalize_coefficient(src, "coefficients." + k);
    }
  }
  {
    const json user = sec("initial");
    if (!user.is_null()) check_keys(user, {"h0", "u0", "v0"}, "initial");
    const auto& di = d.at("initial");
    c["initial"]["h0"] = number_or(user.is_null() ? json::object() : user, "h0", di.at("h0").get<double>(), "initial");
    for (const char* k : {"u0", "v0"}) {
      const json& src = (!user.is_null() && user.contains(k)) ? user.at(k) : di.at(k);
      c["initial"][k] = normalize_profile(src, std::string("initial.") + k);
    }
  }

  RunConfig rc;
  rc.name = c["name"].get<std::string>();
  const auto& pr = c["problem"];
  auto& p = rc.params;
  p.N = pr["N"].get<int>();
  p.T = pr["T"].get<double>();
  p.d1 = pr["d1"].get<double>();
  p.d2 = pr["d2"].get<double>();
  p.mu = pr["mu"].get<double>();
  if (!(p.T > 0.0)) bad("problem", "T must be positive");
  const auto& co = c["coefficients"];
  p.m1 = build_coefficient(co["m1"], p.T);
  p.m2 = build_coefficient(co["m2"], p.T);
  p.b1 = build_coefficient(co["b1"], p.T);
  p.b2 = build_coefficient(co["b2"], p.T);
  p.c1 = build_coefficient(co["c1"], p.T);
  p.c2 = build_coefficient(co["c2"], p.T);
  p.init.h0 = c["initial"]["h0"].get<double>();
  p.init.u0 = build_profile(c["initial"]["u0"]);
  p.init.v0 = build_profile(c["initial"]["v0"]);

  const auto& so = c["solver"];
  rc.solver.Ns = so["Ns"].get<int>();
  rc.solver.Nr = so["Nr"].get<int>();
  rc.solver.steps_per_period = so["steps_per_period"].get<int>();
  rc.solver.R_out = so["R_out"].get<double>();
  rc.solver.t_end = so["t_end"].get<double>();
  rc.solver.snapshot_every = so["snapshot_every"].get<int>();
  rc.solver.negativity_tolerance = so["negativity_tolerance"].get<double>();

  const auto& an = c["analysis"];
  rc.classify.tol_u_factor = an["tol_u_factor"].get<double>();
  rc.classify.tol_h_factor = an["tol_h_factor"].get<double>();
  rc.classify.stall_periods = an["stall_periods"].get<int>();
  rc.classify.min_periods = an["min_periods"].get<int>();

  const auto& ei = c["eigen"];
  rc.eigen.grid = ei["grid"].get<int>();
  rc.eigen.steps_per_period = ei["steps_per_period"].get<int>();
  rc.eigen.block = ei["block"].get<int>();
  rc.eigen.max_iterations = ei["max_iterations"].get<int>();
  rc.eigen.tolerance = ei["tolerance"].get<double>();

  rc.threshold.classify = rc.classify;
  rc.threshold.eigen = rc.eigen;
  rc.threshold.rel_width = an["rel_width"].get<double>();
  rc.threshold.max_doublings = an["max_doublings"].get<int>();
  rc.threshold.entire_r_out = an["entire_r_out"].get<double>();
  rc.threshold.entire_grid = an["entire_grid"].get<int>();

  const auto& sw = c["semiwave"];
  rc.semiwave.dr = sw["dr"].get<double>();
  rc.semiwave.L = sw["L"].get<double>();
  rc.semiwave.steps_per_period = sw["steps_per_period"].get<int>();
  rc.semiwave.relaxation = sw["relaxation"].get<double>();
  rc.semiwave.tolerance = sw["tolerance"].get<double>();
  rc.semiwave.max_iterations = sw["max_iterations"].get<int>();

  const auto& ch = c["checks"];
  rc.checks.time_samples = ch["time_samples"].get<int>();
  rc.checks.space_samples = ch["space_samples"].get<int>();
  rc.checks.r_max = ch["r_max"].get<double>();

  rc.canonical = c.dump(2) + "\n";
  rc.hash = sha256_hex(rc.canonical);
  return rc;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets().items()) out.push_back(k);
  return out;
}

std::string preset_text(const std::string& name) {
  const auto all = presets();
  if (!all.contains(name)) fail(ErrorKind::InvalidArgument, "unknown preset '" + name + "'");
  return all.at(name).dump(2) + "\n";
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  return build(std::move(root), overrides);
}

RunConfig load_config(const std::string& source, const std::vector<std::string>& overrides) {
  const auto all = presets();
  if (all.contains(source)) return build(all.at(source), overrides);
  std::ifstream in(source);
  if (!in) fail(ErrorKind::InvalidArgument, "no preset or readable file named '" + source + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

CoefficientField parse_coefficient(const std::string& spec, double T) {
  return build_coefficient(normalize_coefficient(spec, spec), T);
}

PeriodicScalarFunction parse_time_function(const std::string& spec, double T) {
  return build_time(normalize_time(spec, spec), T);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

}  // namespace stefan::io
