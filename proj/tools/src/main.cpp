#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qnd/errors.hpp"
#include "qnd/presets.hpp"
#include "qnd_cli/commands.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string preset;
  std::string probs;
  std::size_t points = 0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_state) {
  cmd->add_option("-c,--config", c.config_path, "JSON run configuration");
  std::string presets;
  for (auto n : qnd::preset_names()) presets += (presets.empty() ? "" : ", ") + std::string(n);
  cmd->add_option("--params-preset", c.preset, "device preset (" + presets + ")");
  if (needs_state) {
    cmd->add_option("--probs", c.probs, "comma-separated basis-state probabilities, overrides state.probs");
    cmd->add_option("--points", c.points, "grid points, overrides grid.points");
  }
}

qnd::cli::RunConfig load(const Common& c) {
  qnd::cli::RunConfig cfg = c.config_path.empty() ? qnd::cli::RunConfig{} : qnd::cli::load_config(c.config_path);
  if (!c.preset.empty()) qnd::cli::apply_preset(cfg, c.preset);
  if (!c.probs.empty()) {
    std::vector<double> p;
    std::stringstream ss(c.probs);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        p.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw qnd::InvalidInput("--probs: not a number: '" + item + "'");
      }
    }
    cfg.probs = p;
  }
  if (c.points) {
    if (c.points < 2) throw qnd::InvalidInput("--points must be >= 2");
    cfg.grid.points = c.points;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission spectra of a cavity dispersively coupled to N qubits"};
  app.set_version_flag("--version", std::string(qnd::cli::kToolVersion));
  app.require_subcommand(1);

  Common common;
  std::string out;
  std::string method = "exact";
  std::string input;
  std::string populations_out;

  auto* validate = app.add_subcommand("validate", "check the dispersive-regime conditions");
  add_common(validate, common, false);

  auto* spectrum = app.add_subcommand("spectrum", "steady-state transmission spectrum as CSV");
  add_common(spectrum, common, true);
  spectrum->add_option("-m,--method", method, "exact | fast | meanfield | closed1 | closed2 | mixture");
  spectrum->add_option("-o,--out", out, "output CSV (default: output.csv or stdout)");

  auto* oracle = app.add_subcommand("oracle", "brute-force master-equation spectrum as CSV");
  add_common(oracle, common, true);
  oracle->add_option("-o,--out", out, "output CSV");

  auto* decay = app.add_subcommand("decay", "T1 populations over time and the quasi-static spectrum");
  add_common(decay, common, true);
  decay->add_option("--populations-out", populations_out, "populations CSV (default: output.populations_csv)");
  decay->add_option("-o,--out", out, "spectrum CSV at decay.tau_us (default: output.csv)");

  auto* average = app.add_subcommand("average", "time-averaged spectrum over [0, decay.tau_max_us]");
  add_common(average, common, true);
  average->add_option("-o,--out", out, "output CSV");

  auto* infer = app.add_subcommand("infer", "recover basis-state weights from a spectrum CSV");
  add_common(infer, common, false);
  infer->add_option("--probs", common.probs, "reference probabilities; the report adds max_abs_error");
  infer->add_option("-i,--input", input, "spectrum CSV")->required();
  infer->add_option("-o,--out", out, "JSON report (default: output.json or stdout)");

  auto* plot = app.add_subcommand("plot", "render a spectrum CSV as SVG");
  plot->add_option("-i,--input", input, "spectrum CSV")->required();
  plot->add_option("-o,--out", out, "SVG path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qnd::cli::kExitInvalid;
  }

  using namespace qnd::cli;
  try {
    if (*plot) return cmd_plot(input, out);
    const auto cfg = load(common);
    if (*validate) return cmd_validate(cfg, std::cout);
    if (*spectrum) return cmd_spectrum(cfg, parse_method(method), out);
    if (*oracle) return cmd_oracle(cfg, out, std::cerr);
    if (*decay) return cmd_decay(cfg, populations_out, out, std::cerr);
    if (*average) return cmd_average(cfg, out, std::cerr);
    if (*infer) return cmd_infer(cfg, input, out);
  } catch (const qnd::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const qnd::NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInvalid;
}
