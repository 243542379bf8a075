#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nodalcert/cli.hpp"

namespace cli = nodalcert::cli;

int main(int argc, char** argv) {
  CLI::App app{"Certified nodal domain counts for -Laplace u = f(u) on rectangles"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string m, sigma, rho, report, image;
  std::vector<std::string> sets;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "Newton-Galerkin approximation (heuristic)"},
      {"classify", "Classify cells into Omega_+, Omega_-, Omega_0"},
      {"verify", "Certify nodal domain counts for a coefficient file"},
      {"render", "Write the classification as PGM or SVG"},
      {"pipeline", "solve, error radii, classify, verify, render"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Config file (section.key = value lines)")->required();
    sub->add_option("--m", m, "Overrides grid.m");
    sub->add_option("--sigma", sigma, "Overrides certificates.sigma");
    sub->add_option("--rho", rho, "Overrides certificates.rho");
    sub->add_option("--report", report, "Overrides paths.report");
    sub->add_option("--image", image, "Overrides paths.image");
    sub->add_option("--set", sets, "Overrides any key: --set section.key=value");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    auto config = cli::Config::load(config_path);
    if (!m.empty()) config.set("grid.m", m);
    if (!sigma.empty()) config.set("certificates.sigma", sigma);
    if (!rho.empty()) config.set("certificates.rho", rho);
    if (!report.empty()) config.set("paths.report", report);
    if (!image.empty()) config.set("paths.image", image);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::cerr << "nodalcert: --set expects section.key=value, got '" << s << "'\n";
        return cli::kExitError;
      }
      config.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (config.has("command") && config.str("command") != name) {
      std::cerr << "nodalcert: note: config names command '" << config.str("command") << "', running '"
                << name << "'\n";
    }
    return cli::run(cli::parse_command(name), config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "nodalcert " << name << ": error: " << e.what() << "\n";
    return cli::kExitError;
  }
}
