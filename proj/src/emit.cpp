#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "mkc/tasks.hpp"

namespace mkc {

namespace {

using json = nlohmann::ordered_json;

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Non-finite values have no JSON number form and travel as strings.
json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_real(v);
        }
        return v;
      },
      c);
}

}  // namespace

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else return std::to_string(v);
      },
      c);
}

std::string format_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_json(const ResultEnvelope& env) {
  json j;
  j["artifact"] = env.artifact;
  j["version"] = env.version;
  j["task"] = env.task;
  j["timestamp"] = env.timestamp;
  j["wall_time"] = env.wall_time;
  j["threads"] = env.threads;
  json cfg = json::object();
  for (const auto& e : config_entries(env.config)) cfg[e.section][e.key] = e.value;
  j["config"] = cfg;
  json summary = json::object();
  for (const auto& [k, v] : env.summary) summary[k] = cell_json(v);
  j["summary"] = summary;
  json rows = json::array();
  for (const auto& row : env.payload.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["payload"] = {{"columns", env.payload.columns}, {"rows", std::move(rows)}};
  return j.dump(2) + "\n";
}

void emit(const ResultEnvelope& env, const std::string& format) {
  std::string text;
  if (format == "csv") text = format_csv(env.payload);
  else if (format == "json") text = format_json(env);
  else throw config_error("[output] format: expected csv or json, got '" + format + "'");
  const std::string& path = env.config.out_path;
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("[output] path: cannot write '" + path + "'");
  f << text;
  f.close();
  if (!f) throw config_error("[output] path: write failed for '" + path + "'");
}

}  // namespace mkc
