#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "renorm2/config.hpp"
#include "renorm2/errors.hpp"
#include "renorm2/runner.hpp"
#include "renorm2/version.hpp"

namespace {

struct ModeDoc {
  const char* name;
  const char* text;
};

constexpr ModeDoc kModes[] = {
    {"iterate", "closed-form iterate of an elementary map"},
    {"renorm", "renormalized composite at one depth"},
    {"limit", "coefficients of the limiting shear"},
    {"scan", "sup distance to the limit over a depth list"},
    {"zalcman", "rescaling extraction for a non-normal family"},
    {"counterexample", "linearly renormalized coefficient growth"},
    {"correspondence", "renormalization of a germ with algebraic branch"},
    {"basin", "conjugation approximants at a repulsive fixed point"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"renormalization experiments for elementary maps of the "
               "complex 2-plane"};
  app.set_version_flag("--version", renorm2::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned long long seed = 0;
  double tolerance = 0.0;

  for (const ModeDoc& mode : kModes) {
    CLI::App* sub = app.add_subcommand(mode.name, mode.text);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--seed", seed, "seed recorded in the manifest");
    sub->add_option("--tolerance", tolerance,
                    "numerical guard tolerance override");
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    renorm2::ExperimentConfig cfg = renorm2::parse_config(config_path);
    if (cfg.mode != sub->get_name()) {
      throw renorm2::ConfigError("config: mode `" + cfg.mode +
                                 "` does not match subcommand `" +
                                 sub->get_name() + "`");
    }
    if (sub->count("--out") > 0) cfg.out_dir = out_dir;
    if (sub->count("--seed") > 0) cfg.seed = seed;
    if (sub->count("--tolerance") > 0) {
      if (!(tolerance > 0.0)) {
        throw renorm2::ConfigError("--tolerance must be positive");
      }
      cfg.tolerance = tolerance;
    }
    renorm2::RunResult res = renorm2::run_experiment(cfg);
    std::cout << "wrote " << res.manifest_path << "\n";
    for (const renorm2::TableRecord& t : res.tables) {
      std::cout << "  " << t.file << ": " << t.rows << " rows, " << t.checksum
                << "\n";
    }
    return 0;
  } catch (const renorm2::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const renorm2::HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return 3;
  } catch (const renorm2::DiagnosticError& e) {
    std::cerr << "numerical diagnostic: " << e.what() << "\n";
    return 4;
  } catch (const renorm2::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
