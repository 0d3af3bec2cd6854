// sci: simulate | reconstruct | benchmark | verify-theory | make-masks
//
// Every config key is also a flag (--key value). A --config file is applied
// first, then flags in command-line order.
#include "sci/pipeline/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

bool is_validation(sci::ErrorKind k)
{
  using sci::ErrorKind;
  return k == ErrorKind::InvalidArgument || k == ErrorKind::CropOutOfBounds || k == ErrorKind::NonPositiveGamma ||
         k == ErrorKind::GammaOutOfRange;
}

struct Subcommand
{
  CLI::App                          *app = nullptr;
  std::string                        config_path;
  bool                               print_config = false;
  std::map<std::string, std::string> values;
};

} // namespace

int main(int argc, char **argv)
{
  using namespace sci::pipeline;

  CLI::App cli{"Snapshot compressive imaging toolkit"};
  cli.require_subcommand(1);

  std::vector<std::pair<Mode, Subcommand>> subs;
  for (Mode m : {Mode::Simulate, Mode::Reconstruct, Mode::Benchmark, Mode::VerifyTheory, Mode::MakeMasks}) {
    Subcommand s;
    s.app = cli.add_subcommand(std::string(to_string(m)));
    subs.emplace_back(m, std::move(s));
  }
  subs[0].second.app->description("Simulate a measurement from a cube and masks");
  subs[1].second.app->description("Reconstruct a cube from a measurement");
  subs[2].second.app->description("Run a solver over a directory of scenes");
  subs[3].second.app->description("Run the operator and convergence checks");
  subs[4].second.app->description("Generate or crop a mask set");

  for (auto &[mode, s] : subs) {
    s.app->add_option("--config", s.config_path, "key = value config file")->check(CLI::ExistingFile);
    s.app->add_flag("--print-config", s.print_config, "Print the effective config and exit");
    for (auto const &key : config_keys()) {
      if (key == "mode") { continue; }
      s.app->add_option("--" + key, s.values[key]);
    }
  }

  try {
    cli.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    int const code = cli.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  for (auto &[mode, s] : subs) {
    if (!s.app->parsed()) { continue; }
    try {
      RunConfig cfg;
      if (!s.config_path.empty()) { cfg = load_config(s.config_path); }
      cfg.mode = mode;
      for (auto *opt : s.app->parse_order()) {
        auto const name = opt->get_name(false, true);
        if (name.rfind("--", 0) != 0 || name == "--config" || name == "--print-config") { continue; }
        set_field(cfg, name.substr(2), s.values[name.substr(2)]);
      }
      if (s.print_config) {
        std::cout << serialize(cfg);
        return 0;
      }
      cfg.validate();
      switch (mode) {
      case Mode::Simulate: simulate(cfg, std::cout); break;
      case Mode::Reconstruct: reconstruct_run(cfg, std::cout); break;
      case Mode::Benchmark: benchmark(cfg, std::cout); break;
      case Mode::VerifyTheory:
        if (!verify_theory(cfg, std::cout)) {
          std::cerr << "verify-theory: one or more checks failed\n";
          return kExitRuntime;
        }
        break;
      case Mode::MakeMasks: make_masks(cfg, std::cout); break;
      }
    } catch (sci::Error const &e) {
      std::cerr << "error: " << e.what() << '\n';
      return is_validation(e.kind()) ? kExitValidation : kExitRuntime;
    } catch (std::exception const &e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
  }
  return 0;
}
