#pragma once

#include <string>
#include <vector>

#include "CLI11.hpp"

namespace stefan::cli {

// Exit codes shared by every subcommand.
enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kDomain = 3 };

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  double t_end = 0.0;  // 0: keep the config value
  bool svg = false;
};

struct Command {
  CLI::App* app = nullptr;
  int (*run)(const Common&) = nullptr;
};

void register_commands(CLI::App& app, Common& common, std::vector<Command>& commands);

}  // namespace stefan::cli
