#include "qnd_cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qnd/chain.hpp"
#include "qnd/errors.hpp"
#include "qnd/presets.hpp"

namespace qnd::cli {

using nlohmann::json;

namespace {

class Reader {
public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    throw InvalidInput(std::string(source_) + ": " + (pointer.empty() ? "/" : pointer) + ": " + what);
  }

  void only_keys(const json& obj, const std::string& at, std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(at, "expected an object");
    const std::set<std::string_view> ok(allowed);
    for (const auto& [key, _] : obj.items())
      if (!ok.contains(key)) fail(at + "/" + key, "unknown field");
  }

  double number(const json& obj, const std::string& at, const std::string& key) const {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(at + "/" + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at + "/" + key, "must be finite");
    return x;
  }

  std::optional<double> opt_number(const json& obj, const std::string& at, const std::string& key) const {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, at, key);
  }

  double positive(const json& obj, const std::string& at, const std::string& key) const {
    const double x = number(obj, at, key);
    if (!(x > 0.0)) fail(at + "/" + key, "must be > 0");
    return x;
  }

  std::size_t count(const json& obj, const std::string& at, const std::string& key, std::size_t min) const {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min))
      fail(at + "/" + key, "expected an integer >= " + std::to_string(min));
    return v.get<std::size_t>();
  }

  std::string string(const json& obj, const std::string& at, const std::string& key) const {
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(at + "/" + key, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const std::string& at, const std::string& key) const {
    const auto& v = obj.at(key);
    if (!v.is_array()) fail(at + "/" + key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at + "/" + key + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  /// Reads `stem_MHz` or `stem_GHz`; both present is an error.
  std::optional<AngularFrequency> frequency(const json& obj, const std::string& at, const std::string& stem) const {
    const bool mhz = obj.contains(stem + "_MHz");
    const bool ghz = obj.contains(stem + "_GHz");
    if (mhz && ghz) fail(at + "/" + stem + "_GHz", "conflicts with " + stem + "_MHz");
    if (mhz) return AngularFrequency::from_mhz(number(obj, at, stem + "_MHz"));
    if (ghz) return AngularFrequency::from_ghz(number(obj, at, stem + "_GHz"));
    return std::nullopt;
  }

  AngularFrequency required_frequency(const json& obj, const std::string& at, const std::string& stem) const {
    auto f = frequency(obj, at, stem);
    if (!f) fail(at + "/" + stem + "_MHz", "missing");
    return *f;
  }

private:
  std::string_view source_;
};

DeviceParams parse_device(const Reader& r, const json& obj) {
  const std::string at = "/device";
  r.only_keys(obj, at,
              {"cavity_freq_MHz", "cavity_freq_GHz", "kappa_MHz", "kappa_GHz", "drive_MHz", "drive_GHz", "qubits", "max_qubits"});
  DeviceParams dev;
  dev.cavity_freq = r.required_frequency(obj, at, "cavity_freq");
  dev.cavity_decay = r.required_frequency(obj, at, "kappa");
  if (!(dev.cavity_decay.rad_per_us() > 0.0)) r.fail(at + (obj.contains("kappa_MHz") ? "/kappa_MHz" : "/kappa_GHz"), "must be > 0");
  dev.drive = r.frequency(obj, at, "drive");
  if (dev.drive && dev.drive->rad_per_us() < 0.0) r.fail(at + "/drive_MHz", "must be >= 0");
  if (obj.contains("max_qubits")) dev.max_qubits = r.count(obj, at, "max_qubits", 0);
  if (obj.contains("qubits")) {
    const auto& qs = obj.at("qubits");
    if (!qs.is_array()) r.fail(at + "/qubits", "expected an array");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const std::string qat = at + "/qubits/" + std::to_string(i);
      const auto& q = qs[i];
      r.only_keys(q, qat, {"omega_MHz", "omega_GHz", "g_MHz", "g_GHz", "gamma_shift_MHz", "gamma_shift_GHz", "t1_us"});
      QubitParams qp;
      qp.transition_freq = r.frequency(q, qat, "omega");
      qp.coupling = r.frequency(q, qat, "g");
      qp.direct_shift = r.frequency(q, qat, "gamma_shift");
      if (q.contains("t1_us")) qp.t1_us = r.positive(q, qat, "t1_us");
      dev.qubits.push_back(qp);
    }
  }
  try {
    return derive_dispersive_shifts(dev);
  } catch (const InvalidInput& e) {
    r.fail(at, e.what());
  }
}

}  // namespace

const DeviceParams& RunConfig::require_device() const {
  if (!device) throw InvalidInput("no device: give a device block or --params-preset");
  return *device;
}

DiagonalState RunConfig::require_state() const {
  if (!probs) throw InvalidInput("no state: give state.probs or --probs");
  const auto& dev = require_device();
  if (probs->size() != dev.dimension())
    throw InvalidInput("/state/probs: expected " + std::to_string(dev.dimension()) + " entries for " +
                       std::to_string(dev.n_qubits()) + " qubit(s), got " + std::to_string(probs->size()));
  try {
    return DiagonalState::from_probs(*probs);
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("/state/probs: ") + e.what());
  }
}

RunConfig parse_config(const json& doc, std::string_view source) {
  const Reader r(source);
  r.only_keys(doc, "", {"device", "state", "grid", "oracle", "decay", "infer", "noise", "seed", "output"});
  RunConfig cfg;

  if (doc.contains("device")) cfg.device = parse_device(r, doc.at("device"));

  if (doc.contains("state")) {
    const auto& s = doc.at("state");
    r.only_keys(s, "/state", {"probs", "n_qubits"});
    if (s.contains("probs")) cfg.probs = r.numbers(s, "/state", "probs");
    if (s.contains("n_qubits")) {
      const auto n = r.count(s, "/state", "n_qubits", 0);
      if (cfg.probs && cfg.probs->size() != (std::size_t{1} << n))
        r.fail("/state/probs", "length " + std::to_string(cfg.probs->size()) + " does not match n_qubits = " + std::to_string(n));
    }
  }

  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    r.only_keys(g, "/grid", {"center_MHz", "half_span_MHz", "points"});
    cfg.grid.center_mhz = r.opt_number(g, "/grid", "center_MHz");
    if (g.contains("half_span_MHz")) cfg.grid.half_span_mhz = r.positive(g, "/grid", "half_span_MHz");
    if (g.contains("points")) cfg.grid.points = r.count(g, "/grid", "points", 2);
  }

  if (doc.contains("oracle")) {
    const auto& o = doc.at("oracle");
    const std::string at = "/oracle";
    r.only_keys(o, at, {"n_max", "drive_MHz", "drive_GHz", "time_step_us", "convergence_tol", "max_time_us", "invariant_check_interval"});
    if (o.contains("n_max")) cfg.oracle.n_max = r.count(o, at, "n_max", 2);
    cfg.oracle.drive = r.frequency(o, at, "drive");
    if (cfg.oracle.drive && cfg.oracle.drive->rad_per_us() < 0.0) r.fail(at + "/drive_MHz", "must be >= 0");
    if (o.contains("time_step_us")) cfg.oracle.time_step_us = r.positive(o, at, "time_step_us");
    if (o.contains("convergence_tol")) cfg.oracle.convergence_tol = r.positive(o, at, "convergence_tol");
    if (o.contains("max_time_us")) cfg.oracle.max_time_us = r.positive(o, at, "max_time_us");
    if (o.contains("invariant_check_interval")) cfg.oracle.invariant_check_interval = r.count(o, at, "invariant_check_interval", 1);
  }

  if (doc.contains("decay")) {
    const auto& d = doc.at("decay");
    const std::string at = "/decay";
    r.only_keys(d, at, {"times_us", "tau_us", "tau_max_us", "n_steps", "averaging"});
    if (d.contains("times_us")) {
      cfg.decay.times_us = r.numbers(d, at, "times_us");
      for (std::size_t i = 0; i < cfg.decay.times_us.size(); ++i)
        if (!(cfg.decay.times_us[i] >= 0.0)) r.fail(at + "/times_us/" + std::to_string(i), "must be >= 0");
    }
    if (d.contains("tau_us")) {
      cfg.decay.tau_us = r.number(d, at, "tau_us");
      if (cfg.decay.tau_us < 0.0) r.fail(at + "/tau_us", "must be >= 0");
    }
    if (d.contains("tau_max_us")) {
      cfg.decay.tau_max_us = r.number(d, at, "tau_max_us");
      if (cfg.decay.tau_max_us < 0.0) r.fail(at + "/tau_max_us", "must be >= 0");
    }
    if (d.contains("n_steps")) cfg.decay.n_steps = r.count(d, at, "n_steps", 2);
    if (d.contains("averaging")) {
      const auto m = r.string(d, at, "averaging");
      if (m == "analytic")
        cfg.decay.averaging = Averaging::Analytic;
      else if (m == "trapezoid")
        cfg.decay.averaging = Averaging::Trapezoid;
      else
        r.fail(at + "/averaging", "expected \"analytic\" or \"trapezoid\"");
    }
  }

  if (doc.contains("infer")) {
    const auto& i = doc.at("infer");
    r.only_keys(i, "/infer", {"prominence"});
    if (i.contains("prominence")) {
      cfg.prominence = r.number(i, "/infer", "prominence");
      if (!(cfg.prominence > 0.0 && cfg.prominence < 1.0)) r.fail("/infer/prominence", "must lie in (0, 1)");
    }
  }

  if (doc.contains("noise")) {
    const auto& n = doc.at("noise");
    r.only_keys(n, "/noise", {"relative_sigma"});
    if (n.contains("relative_sigma")) {
      cfg.noise_relative_sigma = r.number(n, "/noise", "relative_sigma");
      if (cfg.noise_relative_sigma < 0.0) r.fail("/noise/relative_sigma", "must be >= 0");
    }
  }

  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_unsigned()) r.fail("/seed", "expected a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    r.only_keys(o, "/output", {"csv", "populations_csv", "json"});
    if (o.contains("csv")) cfg.output.csv = r.string(o, "/output", "csv");
    if (o.contains("populations_csv")) cfg.output.populations_csv = r.string(o, "/output", "populations_csv");
    if (o.contains("json")) cfg.output.json = r.string(o, "/output", "json");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path.string() + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.string());
}

void apply_preset(RunConfig& config, std::string_view name) {
  auto dev = preset(name);
  if (!dev) {
    std::string known;
    for (auto n : preset_names()) known += (known.empty() ? "" : ", ") + std::string(n);
    throw InvalidInput("unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  if (config.device) throw InvalidInput("--params-preset conflicts with the config's device block");
  config.device = derive_dispersive_shifts(*dev);
}

FrequencyGrid make_grid(const RunConfig& config) {
  const auto& dev = config.require_device();
  const auto fallback = default_window(dev, config.grid.points);
  const auto center = config.grid.center_mhz ? AngularFrequency::from_mhz(*config.grid.center_mhz) : dev.cavity_freq;
  const auto half = config.grid.half_span_mhz ? AngularFrequency::from_mhz(*config.grid.half_span_mhz)
                                              : (fallback.stop() - fallback.start()) / 2.0;
  return FrequencyGrid::centered(center, half, config.grid.points);
}

std::vector<double> decay_times(const RunConfig& config) {
  if (!config.decay.times_us.empty()) return config.decay.times_us;
  std::vector<double> t;
  for (int i = 0; i <= 30; ++i) t.push_back(0.1 * i);
  return t;
}

std::string params_hash(const RunConfig& config) {
  json canon;
  if (config.device) {
    const auto& d = *config.device;
    canon["cavity_freq"] = d.cavity_freq.rad_per_us();
    canon["kappa"] = d.cavity_decay.rad_per_us();
    canon["drive"] = d.drive_amplitude().rad_per_us();
    json qs = json::array();
    for (const auto& q : d.qubits) {
      json jq;
      jq["gamma"] = q.dispersive_shift ? q.dispersive_shift->rad_per_us() : 0.0;
      if (q.t1_us) jq["t1_us"] = *q.t1_us;
      qs.push_back(jq);
    }
    canon["qubits"] = qs;
    const auto grid = make_grid(config);
    canon["grid"] = {grid.start().rad_per_us(), grid.stop().rad_per_us(), grid.size()};
  }
  if (config.probs) canon["probs"] = *config.probs;
  const auto& o = config.oracle;
  canon["oracle"] = {o.n_max, o.drive ? o.drive->rad_per_us() : -1.0, o.time_step_us, o.convergence_tol, o.max_time_us};
  const auto& d = config.decay;
  canon["decay"] = {decay_times(config), d.tau_us, d.tau_max_us, d.n_steps, d.averaging == Averaging::Analytic};
  canon["seed"] = config.seed;
  canon["noise"] = config.noise_relative_sigma;

  const std::string text = canon.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ket_label(std::size_t k, std::size_t n_qubits) {
  std::string s = "|";
  for (std::size_t j = 0; j < n_qubits; ++j) s += ((k >> j) & 1u) ? '1' : '0';
  return s + ">";
}

}  // namespace qnd::cli
