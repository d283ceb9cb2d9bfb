#include "qnd/presets.hpp"

namespace qnd {

DeviceParams preset_n1_2010() {
  DeviceParams p;
  p.cavity_freq = AngularFrequency::from_mhz(6444.2);
  p.cavity_decay = AngularFrequency::from_mhz(1.69);
  p.qubits.push_back(QubitParams::from_coupling(AngularFrequency::from_mhz(4009.0), AngularFrequency::from_mhz(134.0)));
  return p;
}

DeviceParams preset_n2_2010() {
  DeviceParams p;
  p.cavity_freq = AngularFrequency::from_mhz(6806.0);
  p.cavity_decay = AngularFrequency::from_mhz(1.0);
  p.qubits.push_back(QubitParams::from_shift(AngularFrequency::from_mhz(13.0), 1.0));
  p.qubits.push_back(QubitParams::from_shift(AngularFrequency::from_mhz(4.0), 1.0));
  return p;
}

std::optional<DeviceParams> preset(std::string_view name) {
  if (name == "n1-2010") return preset_n1_2010();
  if (name == "n2-2010") return preset_n2_2010();
  return std::nullopt;
}

std::vector<std::string_view> preset_names() { return {"n1-2010", "n2-2010"}; }

}  // namespace qnd
