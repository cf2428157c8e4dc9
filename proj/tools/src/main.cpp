#include <fmt/format.h>

#include "common.hpp"
#include "tigranet/errors.hpp"

int main(int argc, char** argv) {
  using namespace tigranet;
  CLI::App app{"Graph-signal networks with spectral filters, dynamic pooling and statistical features"};
  app.name("tigranet");
  app.require_subcommand(1);
  app.set_version_flag("--version", "tigranet 0.1.0");
  const std::vector<cli::Command> commands{cli::add_train(app),     cli::add_eval(app),   cli::add_gradcheck(app),
                                           cli::add_equiv(app),     cli::add_export(app), cli::add_dataset_build(app)};
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  for (const auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      return cmd.run();
    } catch (const cli::UsageError& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return 2;
    } catch (const std::invalid_argument& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return 2;
    } catch (const FormatError& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      fmt::print(stderr, "failure: {}\n", e.what());
      return 1;
    }
  }
  return 2;
}
