#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "stefan/error.hpp"
#include "stefan/fbsolver.hpp"
#include "stefan/version.hpp"

namespace {

void on_sigint(int) { stefan::interrupt_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
  using namespace stefan::cli;
  CLI::App app{"Competition model with a free boundary in a periodic radial environment"};
  app.set_version_flag("--version", STEFAN_VERSION);
  app.require_subcommand(1);
  Common common;
  std::vector<Command> commands;
  register_commands(app, common, commands);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  std::signal(SIGINT, on_sigint);

  for (const auto& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      return c.run(common);
    } catch (const stefan::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      if (e.kind() == stefan::ErrorKind::InvalidArgument) {
        std::cerr << c.app->help();
        return kUsage;
      }
      return e.kind() == stefan::ErrorKind::DomainExhausted ? kDomain : kNumerical;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kNumerical;
    }
  }
  return kUsage;
}
