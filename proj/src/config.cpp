#include "mkc/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "mkc/boundary.hpp"
#include "mkc/disorder.hpp"

namespace mkc {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void mismatch(const std::string& sec, const std::string& key, const std::string& v, const char* type) {
  throw config_error("[" + sec + "] " + key + ": expected " + type + ", got '" + v + "'");
}

template <class T>
T parse_number(const std::string& sec, const std::string& key, const std::string& raw, const char* type) {
  std::string v = trim(raw);
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) mismatch(sec, key, raw, type);
  return out;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(double v) { return format_double(v); }
std::string fmt(const std::string& v) { return v; }

template <class T>
std::string fmt(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

void read(const std::string& sec, const std::string& key, const std::string& raw, int& out) {
  out = parse_number<int>(sec, key, raw, "integer");
}
void read(const std::string& sec, const std::string& key, const std::string& raw, std::uint64_t& out) {
  out = parse_number<std::uint64_t>(sec, key, raw, "unsigned integer");
}
void read(const std::string& sec, const std::string& key, const std::string& raw, double& out) {
  out = parse_number<double>(sec, key, raw, "real number");
}
void read(const std::string&, const std::string&, const std::string& raw, std::string& out) { out = trim(raw); }
template <class T>
void read(const std::string& sec, const std::string& key, const std::string& raw, std::vector<T>& out) {
  out.clear();
  for (const auto& item : split_list(raw)) {
    T v{};
    read(sec, key, item, v);
    out.push_back(v);
  }
}

// Visits every configurable field as (section, key, reference).
template <class C, class F>
void visit(C& c, F&& f) {
  f("model", "type", c.model);
  f("model", "t1", c.p1.t);
  f("model", "delta1", c.p1.delta);
  f("model", "mu1", c.p1.mu);
  f("model", "t2", c.p2.t);
  f("model", "delta2", c.p2.delta);
  f("model", "mu2", c.p2.mu);
  f("lattice", "L", c.L);
  f("lattice", "Lx", c.Lx);
  f("lattice", "Ly", c.Ly);
  f("lattice", "bc", c.bc);
  f("lattice", "bcx", c.bcx);
  f("lattice", "bcy", c.bcy);
  f("task", "name", c.task);
  f("task", "R", c.R);
  f("task", "samples", c.samples);
  f("task", "zero_tol", c.zero_tol);
  f("task", "seed", c.seed);
  f("task", "threads", c.threads);
  f("task", "mu_grid", c.mu_grid);
  f("task", "mu_link", c.mu_link);
  f("task", "mu2_grid", c.mu2_grid);
  f("task", "lengths", c.lengths);
  f("task", "n_modes", c.n_modes);
  f("task", "N", c.N);
  f("task", "quant_grid", c.quant_grid);
  f("task", "edge", c.edge);
  f("task", "channels", c.channels);
  f("task", "W", c.W);
  f("task", "realizations", c.realizations);
  f("task", "k_points", c.k_points);
  f("task", "kx", c.kx);
  f("task", "ky", c.ky);
  f("output", "path", c.out_path);
  f("output", "format", c.format);
}

void validate(const RunConfig& c, const std::set<std::string>& given) {
  auto need = [&](const char* sec, const char* key) {
    if (!given.count(std::string(sec) + "." + key))
      throw config_error("[" + std::string(sec) + "] missing required key '" + key + "'");
  };
  need("model", "type");
  if (c.model != "parent" && c.model != "mkc-parallel" && c.model != "mkc-perpendicular")
    throw config_error("[model] type: unknown model '" + c.model + "'");
  for (const char* k : {"t1", "delta1", "mu1"}) need("model", k);
  if (c.model != "parent")
    for (const char* k : {"t2", "delta2", "mu2"}) need("model", k);
  parse_bc(c.bc, "bc");
  parse_bc(c.bcx, "bcx");
  parse_bc(c.bcy, "bcy");
  parse_link(c.mu_link);
  parse_edge(c.edge);
  if (c.channels != "all")
    for (const auto& s : split_list(c.channels)) parse_channel(s);
  if (c.format != "csv" && c.format != "json") throw config_error("[output] format: expected csv or json");
  auto positive = [](int v, const char* sec, const char* key) {
    if (v < 1) throw config_error("[" + std::string(sec) + "] " + key + ": must be positive");
  };
  positive(c.L, "lattice", "L");
  positive(c.Lx, "lattice", "Lx");
  positive(c.Ly, "lattice", "Ly");
  positive(c.R, "task", "R");
  positive(c.samples, "task", "samples");
  positive(c.realizations, "task", "realizations");
  positive(c.k_points, "task", "k_points");
  positive(c.quant_grid, "task", "quant_grid");
  if (c.threads < 0) throw config_error("[task] threads: must be non-negative");
  if (!(c.zero_tol > 0)) throw config_error("[task] zero_tol: must be positive");
  for (double w : c.W)
    if (w < 0) throw config_error("[task] W: amplitudes must be non-negative");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw config_error("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  std::map<std::string, std::set<std::string>> known;
  RunConfig probe;
  visit(probe, [&](const char* sec, const char* key, auto&) { known[sec].insert(key); });

  RunConfig c;
  std::set<std::string> given;
  for (const auto& [sec, body] : tree) {
    if (!body.data().empty()) throw config_error("key '" + sec + "' outside any section");
    if (!known.count(sec)) throw config_error("unknown section [" + sec + "]");
    for (const auto& [key, val] : body) {
      if (!known[sec].count(key)) throw config_error("[" + sec + "] unknown key '" + key + "'");
      if (val.data().find_first_of(";#") != std::string::npos)
        throw config_error("[" + sec + "] " + key + ": inline comments are not supported");
      given.insert(sec + "." + key);
    }
  }
  visit(c, [&](const char* sec, const char* key, auto& ref) {
    auto s = tree.get_child_optional(sec);
    if (!s) return;
    auto v = s->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (v) read(sec, key, v->data(), ref);
  });
  validate(c, given);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::vector<ConfigEntry> config_entries(const RunConfig& c) {
  std::vector<ConfigEntry> out;
  visit(c, [&](const char* sec, const char* key, const auto& ref) { out.push_back({sec, key, fmt(ref)}); });
  return out;
}

std::string serialize_config(const RunConfig& c) {
  std::string s, current;
  for (const auto& e : config_entries(c)) {
    if (e.section != current) {
      s += (current.empty() ? "" : "\n") + std::string("[") + e.section + "]\n";
      current = e.section;
    }
    s += e.key + " = " + e.value + "\n";
  }
  return s;
}

ChainModel model_of(const RunConfig& c) {
  if (c.model == "parent") return c.p1;
  return ChildSpec{c.p1, c.p2, c.model == "mkc-parallel" ? Orientation::Parallel : Orientation::Perpendicular};
}

BoundaryCondition parse_bc(const std::string& s, const std::string& key) {
  if (s == "open" || s == "obc") return BoundaryCondition::Open;
  if (s == "periodic" || s == "pbc") return BoundaryCondition::Periodic;
  throw config_error("[lattice] " + key + ": expected open or periodic, got '" + s + "'");
}

MuLink parse_link(const std::string& s) {
  if (s == "equal") return MuLink::Equal;
  if (s == "opposite") return MuLink::Opposite;
  if (s == "fixed") return MuLink::FixedSecond;
  throw config_error("[task] mu_link: expected equal, opposite or fixed, got '" + s + "'");
}

Edge parse_edge(const std::string& s) {
  if (s == "low") return Edge::Low;
  if (s == "high") return Edge::High;
  throw config_error("[task] edge: expected low or high, got '" + s + "'");
}

}  // namespace mkc
