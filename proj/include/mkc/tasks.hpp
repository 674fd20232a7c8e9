#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mkc/config.hpp"

namespace mkc {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  template <class... Ts>
  void add(Ts&&... cells) {
    rows.push_back({to_cell(std::forward<Ts>(cells))...});
  }

 private:
  static Cell to_cell(int v) { return std::int64_t{v}; }
  static Cell to_cell(long v) { return std::int64_t{v}; }
  static Cell to_cell(long long v) { return std::int64_t{v}; }
  static Cell to_cell(unsigned long v) { return static_cast<std::int64_t>(v); }
  static Cell to_cell(double v) { return v; }
  static Cell to_cell(bool v) { return v; }
  static Cell to_cell(const char* v) { return std::string(v); }
  static Cell to_cell(std::string v) { return v; }
};

struct ResultEnvelope {
  std::string artifact = "mkc";
  std::string version;
  std::string task;
  std::string timestamp;  // UTC, ISO 8601
  double wall_time = 0.0; // seconds
  unsigned threads = 1;
  RunConfig config;
  std::vector<std::pair<std::string, Cell>> summary;
  Table payload;
};

const std::vector<std::string>& task_names();

// threads == 0 picks the config key, then the hardware count.
ResultEnvelope run_task(const RunConfig& cfg, unsigned threads = 0);

std::string format_csv(const Table& t);
std::string format_json(const ResultEnvelope& env);
std::string format_cell(const Cell& c);

// Writes to cfg.out_path, or stdout when it is empty; unwritable paths raise config_error.
void emit(const ResultEnvelope& env, const std::string& format);

const char* artifact_version();

}  // namespace mkc
