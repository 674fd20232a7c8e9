#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mkc/tasks.hpp"

namespace {

unsigned env_threads() {
  const char* v = std::getenv("MKC_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw mkc::config_error("MKC_THREADS: expected a positive integer, got '" + std::string(v) + "'");
  return static_cast<unsigned>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for multiplicative Kitaev chains"};
  app.set_version_flag("--version", mkc::artifact_version());
  std::string task, config, out, format;
  unsigned threads = 0;
  app.add_option("task", task, "Task to run")->required()->check(CLI::IsMember(mkc::task_names()));
  app.add_option("--config", config, "Configuration file")->required();
  app.add_option("--out", out, "Output path ('-' for stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "Worker threads (default: MKC_THREADS, then [task] threads)")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    mkc::RunConfig cfg = mkc::load_config(config);
    if (!cfg.task.empty() && cfg.task != task)
      throw mkc::config_error("[task] name: config names task '" + cfg.task + "' but '" + task + "' was requested");
    cfg.task = task;
    if (!out.empty()) cfg.out_path = out;
    if (!format.empty()) cfg.format = format;
    if (threads == 0) threads = env_threads();
    auto env = mkc::run_task(cfg, threads);
    mkc::emit(env, cfg.format);
    for (const auto& [k, v] : env.summary) std::cerr << k << " = " << mkc::format_cell(v) << "\n";
    return 0;
  } catch (const mkc::config_error& e) {
    std::cerr << "mkc: config error: " << e.what() << "\n";
    return 2;
  } catch (const mkc::precondition_error& e) {
    std::cerr << "mkc: config error: " << e.what() << "\n";
    return 2;
  } catch (const mkc::numerical_error& e) {
    std::cerr << "mkc: numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "mkc: error: " << e.what() << "\n";
    return 1;
  }
}
