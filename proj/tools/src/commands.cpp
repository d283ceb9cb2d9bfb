#include "qnd_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <random>

#include "qnd/chain.hpp"
#include "qnd/decay.hpp"
#include "qnd/errors.hpp"
#include "qnd/infer.hpp"
#include "qnd/lindblad.hpp"
#include "qnd/spectra.hpp"
#include "qnd_cli/plot.hpp"

namespace qnd::cli {

using nlohmann::ordered_json;

namespace {

std::string header(const RunConfig& config, std::string_view kind) {
  return "method=" + std::string(kind) + " params_hash=" + params_hash(config) + " version=" + std::string(kToolVersion);
}

std::string fixed(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

void add_noise(const RunConfig& config, std::vector<double>& v) {
  if (config.noise_relative_sigma == 0.0 || v.empty()) return;
  const double peak = *std::max_element(v.begin(), v.end());
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, config.noise_relative_sigma * peak);
  for (auto& x : v) x += noise(rng);
}

std::string pick(const std::string& flag, const std::optional<std::string>& from_config) {
  if (!flag.empty()) return flag;
  return from_config.value_or("-");
}

}  // namespace

SpectrumMethod parse_method(std::string_view name) {
  if (name == "exact") return SpectrumMethod::Exact;
  if (name == "fast") return SpectrumMethod::Fast;
  if (name == "meanfield") return SpectrumMethod::MeanField;
  if (name == "closed1") return SpectrumMethod::Closed1;
  if (name == "closed2") return SpectrumMethod::Closed2;
  if (name == "mixture") return SpectrumMethod::Mixture;
  throw InvalidInput("unknown method '" + std::string(name) + "' (exact, fast, meanfield, closed1, closed2, mixture)");
}

std::string_view to_string(SpectrumMethod method) {
  switch (method) {
    case SpectrumMethod::Exact: return "exact";
    case SpectrumMethod::Fast: return "fast";
    case SpectrumMethod::MeanField: return "meanfield";
    case SpectrumMethod::Closed1: return "closed1";
    case SpectrumMethod::Closed2: return "closed2";
    case SpectrumMethod::Mixture: return "mixture";
  }
  return "unknown";
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
  const auto& dev = config.require_device();
  const auto report = validate_dispersive(dev);
  out << "qubits: " << dev.n_qubits() << "\n";
  for (const auto& r : report.ratios) {
    out << (r.j ? "qubits " + std::to_string(r.i) + "," + std::to_string(r.j) : "qubit " + std::to_string(r.i)) << ": "
        << r.label << " = " << fixed("%.6g", r.value);
    if (r.label != "Gamma_j > 0") out << " (threshold " << fixed("%g", report.threshold) << ")";
    out << (r.passed ? " ok" : " FAIL") << "\n";
  }
  for (const auto& d : report.decay)
    out << "qubit " << d.qubit << ": (1/T1)/kappa = " << fixed("%.6g", d.gamma_over_kappa) << (d.warn ? " WARN" : " ok")
        << "\n";
  for (const auto& n : report.notes) out << "note: " << n << "\n";
  out << "result: " << (report.passed() ? "PASS" : "FAIL") << "\n";
  return report.passed() ? kExitOk : kExitInvalid;
}

std::string spectrum_csv(const RunConfig& config, SpectrumMethod method) {
  const auto& dev = config.require_device();
  const auto state = config.require_state();
  const auto grid = make_grid(config);
  Spectrum s = [&] {
    switch (method) {
      case SpectrumMethod::Exact: return exact_spectrum(dev, state, grid);
      case SpectrumMethod::Fast: return fast_spectrum(dev, state, grid);
      case SpectrumMethod::MeanField: return meanfield_spectrum(dev, state, grid);
      case SpectrumMethod::Closed1: return closed_form_n1(dev, state, grid);
      case SpectrumMethod::Closed2: return closed_form_n2(dev, state, grid);
      case SpectrumMethod::Mixture: return mixture_spectrum(dev, state, grid);
    }
    throw InvalidInput("unknown method");
  }();
  auto values = to_vector(s.values());
  add_noise(config, values);
  return format_spectrum_csv(header(config, to_string(method)), grid, values);
}

int cmd_spectrum(const RunConfig& config, SpectrumMethod method, const std::string& out_path) {
  write_text(pick(out_path, config.output.csv), spectrum_csv(config, method));
  return kExitOk;
}

OracleCsv oracle_csv(const RunConfig& config) {
  const auto& dev = config.require_device();
  const auto state = config.require_state();
  const auto grid = make_grid(config);
  const auto result = oracle_spectrum(dev, state, grid, config.oracle);

  std::vector<double> values, converged, tail, steps;
  for (const auto& p : result.points) {
    values.push_back(p.value);
    converged.push_back(p.converged ? 1.0 : 0.0);
    tail.push_back(p.tail_occupation);
    steps.push_back(static_cast<double>(p.steps));
  }
  OracleCsv out;
  out.all_converged = result.all_converged();
  out.text = format_spectrum_csv(header(config, "oracle") + " n_max=" + std::to_string(config.oracle.n_max), grid, values,
                                 {{"converged", converged, true}, {"tail_occupation", tail, false}, {"steps", steps, true}});
  return out;
}

int cmd_oracle(const RunConfig& config, const std::string& out_path, std::ostream& err) {
  const auto result = oracle_csv(config);
  write_text(pick(out_path, config.output.csv), result.text);
  if (!result.all_converged) {
    err << "error: some oracle points did not converge (see the converged column)\n";
    return kExitNumerical;
  }
  return kExitOk;
}

DecayCsvs decay_csvs(const RunConfig& config) {
  const auto& dev = config.require_device();
  const auto initial = config.require_state();
  const auto t1 = t1_times(dev);
  const auto times = decay_times(config);
  const auto n = dev.n_qubits();

  DecayCsvs out;
  out.populations = "# " + header(config, "populations") + "\n";
  out.populations += "tau_us";
  for (std::size_t k = 0; k < dev.dimension(); ++k) {
    const auto label = ket_label(k, n);
    out.populations += ",p_" + label.substr(1, label.size() - 2);
  }
  out.populations += "\n";
  const auto traj = decay_trajectory(initial, t1, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.populations += fixed("%.6f", times[i]);
    for (double p : traj.states[i].probs()) out.populations += "," + fixed("%.11e", p);
    out.populations += "\n";
  }

  const auto grid = make_grid(config);
  const auto s = quasi_static_spectrum(dev, initial, config.decay.tau_us, grid);
  out.spectrum = format_spectrum_csv(header(config, "quasistatic") + " tau_us=" + fixed("%g", config.decay.tau_us), grid,
                                     to_vector(s.values()));
  return out;
}

int cmd_decay(const RunConfig& config, const std::string& populations_path, const std::string& spectrum_path,
              std::ostream& err) {
  for (const auto& w : timescale_warnings(config.require_device())) err << "warning: " << w << "\n";
  const auto csvs = decay_csvs(config);
  const auto pop = pick(populations_path, config.output.populations_csv);
  const auto spectrum_out = pick(spectrum_path, config.output.csv);
  if (pop == "-" && spectrum_out == "-") throw InvalidInput("decay: give at least one output path (populations or spectrum)");
  write_text(pop, csvs.populations);
  write_text(spectrum_out, csvs.spectrum);
  return kExitOk;
}

std::string average_csv(const RunConfig& config) {
  const auto& dev = config.require_device();
  const auto grid = make_grid(config);
  const auto s = time_averaged_spectrum(dev, config.require_state(), config.decay.tau_max_us, config.decay.n_steps, grid,
                                        config.decay.averaging);
  const std::string how = config.decay.averaging == Averaging::Analytic ? "analytic" : "trapezoid";
  return format_spectrum_csv(header(config, "average") + " tau_max_us=" + fixed("%g", config.decay.tau_max_us) +
                                 " averaging=" + how,
                             grid, to_vector(s.values()));
}

int cmd_average(const RunConfig& config, const std::string& out_path, std::ostream& err) {
  for (const auto& w : timescale_warnings(config.require_device())) err << "warning: " << w << "\n";
  write_text(pick(out_path, config.output.csv), average_csv(config));
  return kExitOk;
}

std::string infer_report(const RunConfig& config, const CsvTable& table, const std::string& source) {
  const auto& dev = config.require_device();
  const auto sampled = spectrum_from_table(table, source);
  const auto est = infer_weights(sampled.grid, sampled.values, dev);
  const auto table_centers = predicted_centers(dev);
  const auto peaks = assign_peaks(find_peaks(sampled.grid, sampled.values, config.prominence), dev, sampled.grid);
  const auto n = dev.n_qubits();

  ordered_json doc;
  doc["version"] = kToolVersion;
  doc["input"] = source;
  doc["n_qubits"] = n;
  ordered_json weights = ordered_json::array();
  for (std::size_t g = 0; g < est.groups.size(); ++g) {
    ordered_json w;
    ordered_json labels = ordered_json::array();
    for (auto k : est.groups[g]) labels.push_back(ket_label(k, n));
    w["basis_indices"] = est.groups[g];
    w["labels"] = labels;
    w["center_MHz"] = table_centers.centers[est.groups[g].front()].mhz();
    w["weight"] = est.probs[g];
    weights.push_back(w);
  }
  doc["weights"] = weights;
  doc["residual_norm"] = est.residual_norm;
  doc["kkt_residual"] = est.kkt_residual;
  doc["iterations"] = est.iterations;
  doc["unresolvable"] = est.unresolvable;
  doc["degenerate_groups"] = table_centers.degenerate_groups();

  ordered_json pj = ordered_json::array();
  for (const auto& p : peaks.peaks) {
    ordered_json e;
    e["omega_MHz"] = p.location.mhz();
    e["height"] = p.height;
    e["basis_index"] = p.basis_index ? ordered_json(*p.basis_index) : ordered_json(nullptr);
    e["label"] = p.basis_index ? ordered_json(ket_label(*p.basis_index, n)) : ordered_json(nullptr);
    pj.push_back(e);
  }
  doc["peaks"] = pj;
  doc["peak_assignment_residual_MHz"] = AngularFrequency(peaks.residual).mhz();

  if (config.probs && !est.unresolvable) {
    const auto ref = config.require_state();
    const auto got = est.basis_probs();
    double worst = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) worst = std::max(worst, std::abs(got[k] - ref[k]));
    doc["reference_probs"] = *config.probs;
    doc["max_abs_error"] = worst;
  }
  return doc.dump(2) + "\n";
}

int cmd_infer(const RunConfig& config, const std::string& input_path, const std::string& out_path) {
  if (input_path.empty()) throw InvalidInput("infer: --input is required");
  const auto table = read_csv(input_path);
  write_text(pick(out_path, config.output.json), infer_report(config, table, input_path));
  return kExitOk;
}

int cmd_plot(const std::string& input_path, const std::string& out_path) {
  if (input_path.empty()) throw InvalidInput("plot: --input is required");
  write_text(out_path, render_svg(read_csv(input_path)));
  return kExitOk;
}

}  // namespace qnd::cli
