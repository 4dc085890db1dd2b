#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lops/device.hpp"
#include "lops/engine.hpp"
#include "lops/outcomes.hpp"

namespace lops {

// Numeric field of a scenario record: a literal, or a reference to a named
// parameter plus a constant offset ("$dt", "$tau+0.001").
struct ParamValue {
  double value = 0.0;
  std::string ref;
  double offset = 0.0;

  double resolve(const std::map<std::string, double>& params) const;
  static ParamValue literal(double v) { return ParamValue{v, {}, 0.0}; }
  static ParamValue reference(std::string name, double off = 0.0) {
    return ParamValue{0.0, std::move(name), off};
  }
};

struct PhotonRecord {
  int n = 1;
  int channel = 0;
  int polarization = 0;
  ParamValue t, f, w;
};

struct BellRecord {
  int ch1 = 0;
  int ch2 = 1;
  BellKind kind = BellKind::PhiPlus;
  ParamValue phase, t1, f1, w1, t2, f2, w2;
};

// Photon and Bell-pair declarations share one ordered list: declaration
// order fixes wavepacket registration order, which in turn fixes which
// packet leads the orthonormalization.
struct SourceRecord {
  enum Kind { Photons, Bell } kind = Photons;
  PhotonRecord photon;
  BellRecord bell;
};

struct ElementRecord {
  enum Kind { Beamsplitter, PhaseShifter, Delay, Detector } kind = Beamsplitter;
  int a = 0;
  int b = 0;
  double x = 0.0;  // bs theta / ps phi (degrees)
  double y = 0.0;  // bs phi (degrees)
  std::optional<int> condition;
};

// Extra photon whose output amplitude is probed: the run is restricted to the
// single ket holding one photon per probe record.
struct ProbePhoton {
  int channel = 0;
  int polarization = 0;
  ParamValue t, f, w;
};

struct SweepSpec {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
};

enum class OutputMode { Distribution, Density };

struct Scenario {
  std::string name;
  int channels = 2;
  int polarizations = 1;
  PacketShape shape = PacketShape::Gaussian;
  int periods = 1;
  double period_length = 0.0;
  bool order_packets_by_time = false;
  std::vector<std::pair<std::string, double>> params;  // declaration order
  std::vector<SourceRecord> sources;
  std::vector<ElementRecord> elements;  // circuit elements and detectors, in order
  std::vector<ProbePhoton> probes;
  Core core = Core::Permanent;
  OutputMode output = OutputMode::Distribution;
  bool cartesian = false;  // required to declare more than one sweep
  std::vector<SweepSpec> sweeps;
};

class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Line-oriented text format; see the README for the grammar.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const Scenario& sc);

// Built-in scenarios: hom, hom3, delay_mz, swap.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_names();

struct SweepPoint {
  int index = 0;
  std::vector<std::pair<std::string, double>> params;  // resolved, declaration order
  // Distribution / probe output: (label, probability), label-ordered.
  std::vector<std::pair<std::string, double>> rows;
  std::optional<DensityMatrix> density;
  double purity_value = 0.0;  // only meaningful with density
};

struct ScenarioResult {
  std::string name;
  std::vector<std::string> param_names;
  OutputMode output = OutputMode::Distribution;
  std::vector<SweepPoint> points;
};

// Executes every sweep point (cartesian product over sweeps). Overrides must
// name declared parameters.
ScenarioResult run_scenario(const Scenario& sc,
                            std::optional<Core> core_override = std::nullopt,
                            const std::map<std::string, double>& overrides = {});

// index,param...,label,probability rows; density output (single point only)
// becomes a basis-label header plus real,imag pair rows.
std::string format_csv(const ScenarioResult& result);
std::string format_json(const ScenarioResult& result);

}  // namespace lops
