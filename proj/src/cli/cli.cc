#include "ciqa/cli/cli.h"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ciqa/common/hash.h"
#include "ciqa/common/parallel.h"
#include "common.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace ciqa {
namespace {

void HashPath(Fnv1a64& h, const std::string& path) {
  h.Update(std::string_view(path));
  h.Update(std::string_view("\0", 1));
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      h.Update(std::string_view(fs::relative(f, path).generic_string()));
      const uint64_t v = HashFile(f.string());
      h.Update(&v, sizeof v);
    }
  } else if (fs::is_regular_file(path)) {
    const uint64_t v = HashFile(path);
    h.Update(&v, sizeof v);
  }
}

std::string Timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void AppendRunLog(const std::string& path, const std::string& subcommand, const std::string& hash, uint64_t seed,
                  int exit_code) {
  if (path.empty()) return;
  try {
    cli::EnsureParent(path);
    std::ofstream out(path, std::ios::app);
    nlohmann::ordered_json j;
    j["timestamp"] = Timestamp();
    j["subcommand"] = subcommand;
    j["config_hash"] = hash;
    j["seed"] = seed;
    j["exit_code"] = exit_code;
    out << j.dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "warning: cannot append run log " << path << ": " << e.what() << "\n";
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"Quality assessment toolkit for superimposed (confusing) and AR images", "confusion_iqa"};
  app.require_subcommand(1);
  std::string run_log = "confusion_iqa_runs.jsonl";
  app.add_option("--run-log", run_log, "JSON-lines run log to append to (empty disables)")->capture_default_str();

  cli::CommandList commands;
  cli::AddSynthCommands(app, commands);
  cli::AddScoreCommands(app, commands);
  cli::AddModelCommands(app, commands);
  cli::AddEvalCommands(app, commands);

  Fnv1a64 flags_hash;
  for (int i = 1; i < argc; ++i) {
    flags_hash.Update(std::string_view(argv[i]));
    flags_hash.Update(std::string_view("\0", 1));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    const int code = rc == 0 ? kExitOk : kExitUsage;
    if (code != kExitOk) AppendRunLog(run_log, "", flags_hash.Hex(), 0, code);
    return code;
  }

  const cli::Command* selected = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) selected = &c;
  }
  if (selected == nullptr) {
    std::cerr << app.help();
    return kExitUsage;
  }
  const std::string name = selected->app->get_name();

  cli::RunContext ctx;
  ctx.jobs = DefaultJobs();
  int code = kExitOk;
  try {
    selected->run(ctx);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitData;
  }
  Fnv1a64 config = flags_hash;
  for (const auto& input : ctx.inputs) {
    try {
      HashPath(config, input);
    } catch (const std::exception&) {
      config.Update(std::string_view("<unreadable>"));
    }
  }
  AppendRunLog(run_log, name, config.Hex(), ctx.seed, code);
  return code;
}

}  // namespace ciqa
