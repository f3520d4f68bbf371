// univdyn: run scenario files and write certificates.
//
//   univdyn --scenario scenarios/factor_nilpotent.scn --out out/
//   univdyn verify-covers --space interval --depth 6
//
// Exit 0 when every check passes, 1 on any FAIL, 2 on bad input.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "univdyn/error.hpp"
#include "univdyn/scenario.hpp"

namespace fs = std::filesystem;
using namespace univdyn;

namespace {

int report(const scenario::RunResult& res, const std::string& name, const std::string& out_dir) {
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / (name + ".cert")) << res.certificate;
    std::ofstream(fs::path(out_dir) / (name + ".summary.txt")) << res.summary;
  }
  std::cout << res.summary;
  if (!res.ok) {
    for (const auto& s : res.sections) {
      if (!s.ok) {
        std::cerr << "FAIL " << s.construction << ": " << s.witness << "\n";
        break;
      }
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified constructions of universal dynamical systems"};
  app.set_version_flag("--version", "univdyn 1.0");

  std::string scenario_path, out_dir, format = "text";
  std::optional<std::size_t> depth, samples;
  std::optional<std::uint64_t> seed;
  app.add_option("--scenario", scenario_path, "Scenario file");
  app.add_option("--depth", depth, "Override the depth of every construction");
  app.add_option("--samples", samples, "Override the sample count");
  app.add_option("--seed", seed, "Sampling seed (recorded in the certificate)");
  app.add_option("--out", out_dir, "Directory for <name>.cert and <name>.summary.txt");
  app.add_option("--format", format, "Certificate layout")->check(CLI::IsMember({"text", "tree"}));

  auto* vc = app.add_subcommand("verify-covers", "Check the cover conditions of shipped spaces");
  std::vector<std::string> spaces;
  std::size_t vc_depth = 6;
  vc->add_option("--space", spaces, "interval | circle | cantor | finite:<matrix> | a*b")->required();
  vc->add_option("--depth", vc_depth, "Levels to check");
  vc->add_option("--out", out_dir, "Directory for the certificate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    scenario::Scenario sc;
    scenario::Overrides ov{depth, samples, seed};
    if (vc->parsed()) {
      std::string text = "[verify-covers]\ndepth = " + std::to_string(vc_depth) + "\n";
      for (const auto& s : spaces) text += "space = " + s + "\n";
      sc = scenario::parse_scenario(text, "verify-covers");
    } else {
      if (scenario_path.empty()) {
        std::cerr << "either --scenario or a subcommand is required\n" << app.help();
        return 2;
      }
      sc = scenario::load_scenario(scenario_path);
    }
    auto fmt = format == "tree" ? scenario::Format::Tree : scenario::Format::Text;
    auto res = scenario::run_scenario(sc, ov, fmt);
    return report(res, sc.name, out_dir);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::ParseError ? 2 : 1;
  }
}
