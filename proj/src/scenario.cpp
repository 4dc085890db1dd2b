#include "lops/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lops {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok.front() == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ScenarioParseError(line, message);
}

double parse_double(const std::string& tok, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size())
    fail(line, "expected a number, got '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end != begin + tok.size())
    fail(line, "expected an integer, got '" + tok + "'");
  return static_cast<int>(v);
}

int parse_polarization(const std::string& tok, int line) {
  if (tok == "H" || tok == "h" || tok == "0") return kPolH;
  if (tok == "V" || tok == "v" || tok == "1") return kPolV;
  fail(line, "expected polarization H or V, got '" + tok + "'");
}

BellKind parse_bell_kind(const std::string& tok, int line) {
  if (tok == "phi+") return BellKind::PhiPlus;
  if (tok == "phi-") return BellKind::PhiMinus;
  if (tok == "psi+") return BellKind::PsiPlus;
  if (tok == "psi-") return BellKind::PsiMinus;
  fail(line, "expected Bell kind phi+|phi-|psi+|psi-, got '" + tok + "'");
}

ParamValue parse_param_value(const std::string& tok, int line) {
  if (tok.empty() || tok.front() != '$')
    return ParamValue::literal(parse_double(tok, line));
  size_t i = 1;
  while (i < tok.size() &&
         (std::isalnum(static_cast<unsigned char>(tok[i])) || tok[i] == '_'))
    ++i;
  if (i == 1) fail(line, "empty parameter name in '" + tok + "'");
  const std::string name = tok.substr(1, i - 1);
  if (i == tok.size()) return ParamValue::reference(name);
  if (tok[i] != '+' && tok[i] != '-')
    fail(line, "expected +offset or -offset after $" + name);
  const double off = parse_double(tok.substr(i), line);
  return ParamValue::reference(name, off);
}

std::string render_param_value(const ParamValue& pv) {
  if (pv.ref.empty()) return fmt_double(pv.value);
  if (pv.offset == 0.0) return "$" + pv.ref;
  if (pv.offset > 0.0) return "$" + pv.ref + "+" + fmt_double(pv.offset);
  return "$" + pv.ref + fmt_double(pv.offset);
}

void expect_tokens(const std::vector<std::string>& tokens, size_t count, int line) {
  if (tokens.size() != count)
    fail(line, "'" + tokens[0] + "' takes " + std::to_string(count - 1) +
                   " arguments, got " + std::to_string(tokens.size() - 1));
}

}  // namespace

ScenarioParseError::ScenarioParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

double ParamValue::resolve(const std::map<std::string, double>& params) const {
  if (ref.empty()) return value;
  const auto it = params.find(ref);
  if (it == params.end())
    throw std::invalid_argument("unknown parameter '" + ref + "'");
  return it->second + offset;
}

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::vector<std::string> seen_once;
  const auto once = [&](const std::string& keyword, int line) {
    for (const std::string& s : seen_once)
      if (s == keyword) fail(line, "duplicate '" + keyword + "'");
    seen_once.push_back(keyword);
  };

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::vector<std::string> t = tokenize(raw);
    if (t.empty()) continue;
    const std::string& kw = t[0];

    if (kw == "name") {
      expect_tokens(t, 2, lineno);
      once(kw, lineno);
      sc.name = t[1];
    } else if (kw == "channels") {
      expect_tokens(t, 2, lineno);
      once(kw, lineno);
      sc.channels = parse_int(t[1], lineno);
      if (sc.channels < 1) fail(lineno, "need at least one channel");
    } else if (kw == "polarizations") {
      expect_tokens(t, 2, lineno);
      once(kw, lineno);
      sc.polarizations = parse_int(t[1], lineno);
      if (sc.polarizations < 1 || sc.polarizations > 2)
        fail(lineno, "polarizations must be 1 or 2");
    } else if (kw == "shape") {
      expect_tokens(t, 2, lineno);
      once(kw, lineno);
      if (t[1] == "gaussian")
        sc.shape = PacketShape::Gaussian;
      else if (t[1] == "exponential")
        sc.shape = PacketShape::Exponential;
      else
        fail(lineno, "shape must be gaussian or exponential");
    } else if (kw == "periods") {
      expect_tokens(t, 3, lineno);
      once(kw, lineno);
      sc.periods = parse_int(t[1], lineno);
      sc.period_length = parse_double(t[2], lineno);
      if (sc.periods < 1) fail(lineno, "need at least one period");
      if (sc.periods > 1 && !(sc.period_length > 0.0))
        fail(lineno, "multiple periods need a positive period length");
    } else if (kw == "order_packets_by_time") {
      expect_tokens(t, 1, lineno);
      once(kw, lineno);
      sc.order_packets_by_time = true;
    } else if (kw == "param") {
      expect_tokens(t, 3, lineno);
      for (const auto& [existing, v] : sc.params)
        if (existing == t[1]) fail(lineno, "duplicate parameter '" + t[1] + "'");
      sc.params.emplace_back(t[1], parse_double(t[2], lineno));
    } else if (kw == "photons") {
      expect_tokens(t, 7, lineno);
      SourceRecord rec;
      rec.kind = SourceRecord::Photons;
      rec.photon.n = parse_int(t[1], lineno);
      rec.photon.channel = parse_int(t[2], lineno);
      rec.photon.polarization = parse_polarization(t[3], lineno);
      rec.photon.t = parse_param_value(t[4], lineno);
      rec.photon.f = parse_param_value(t[5], lineno);
      rec.photon.w = parse_param_value(t[6], lineno);
      if (rec.photon.n < 0) fail(lineno, "photon count must be non-negative");
      sc.sources.push_back(std::move(rec));
    } else if (kw == "bell") {
      expect_tokens(t, 11, lineno);
      SourceRecord rec;
      rec.kind = SourceRecord::Bell;
      rec.bell.ch1 = parse_int(t[1], lineno);
      rec.bell.ch2 = parse_int(t[2], lineno);
      rec.bell.kind = parse_bell_kind(t[3], lineno);
      rec.bell.phase = parse_param_value(t[4], lineno);
      rec.bell.t1 = parse_param_value(t[5], lineno);
      rec.bell.f1 = parse_param_value(t[6], lineno);
      rec.bell.w1 = parse_param_value(t[7], lineno);
      rec.bell.t2 = parse_param_value(t[8], lineno);
      rec.bell.f2 = parse_param_value(t[9], lineno);
      rec.bell.w2 = parse_param_value(t[10], lineno);
      sc.sources.push_back(std::move(rec));
    } else if (kw == "bs") {
      expect_tokens(t, 5, lineno);
      ElementRecord e;
      e.kind = ElementRecord::Beamsplitter;
      e.a = parse_int(t[1], lineno);
      e.b = parse_int(t[2], lineno);
      e.x = parse_double(t[3], lineno);
      e.y = parse_double(t[4], lineno);
      sc.elements.push_back(e);
    } else if (kw == "ps") {
      expect_tokens(t, 3, lineno);
      ElementRecord e;
      e.kind = ElementRecord::PhaseShifter;
      e.a = parse_int(t[1], lineno);
      e.x = parse_double(t[2], lineno);
      sc.elements.push_back(e);
    } else if (kw == "delay") {
      expect_tokens(t, 2, lineno);
      ElementRecord e;
      e.kind = ElementRecord::Delay;
      e.a = parse_int(t[1], lineno);
      sc.elements.push_back(e);
    } else if (kw == "detector") {
      if (t.size() != 2 && t.size() != 4)
        fail(lineno, "'detector' takes a channel and optionally 'cond <n>'");
      ElementRecord e;
      e.kind = ElementRecord::Detector;
      e.a = parse_int(t[1], lineno);
      if (t.size() == 4) {
        if (t[2] != "cond") fail(lineno, "expected 'cond', got '" + t[2] + "'");
        e.condition = parse_int(t[3], lineno);
        if (*e.condition < 0) fail(lineno, "condition must be non-negative");
      }
      sc.elements.push_back(e);
    } else if (kw == "probe") {
      expect_tokens(t, 6, lineno);
      ProbePhoton p;
      p.channel = parse_int(t[1], lineno);
      p.polarization = parse_polarization(t[2], lineno);
      p.t = parse_param_value(t[3], lineno);
      p.f = parse_param_value(t[4], lineno);
      p.w = parse_param_value(t[5], lineno);
      sc.probes.push_back(std::move(p));
    } else if (kw == "core") {
      expect_tokens(t, 2, lineno);
      once(kw, lineno);
      if (t[1] == "direct")
        sc.core = Core::Direct;
      else if (t[1] == "permanent")
        sc.core = Core::Permanent;
      else
        fail(lineno, "core must be direct or permanent");
    } else if (kw == "output") {
      expect_tokens(t, 2, lineno);
      once(kw, lineno);
      if (t[1] == "distribution")
        sc.output = OutputMode::Distribution;
      else if (t[1] == "density")
        sc.output = OutputMode::Density;
      else
        fail(lineno, "output must be distribution or density");
    } else if (kw == "cartesian") {
      expect_tokens(t, 1, lineno);
      once(kw, lineno);
      sc.cartesian = true;
    } else if (kw == "sweep") {
      expect_tokens(t, 5, lineno);
      SweepSpec s;
      s.param = t[1];
      s.from = parse_double(t[2], lineno);
      s.to = parse_double(t[3], lineno);
      s.steps = parse_int(t[4], lineno);
      if (s.steps < 1) fail(lineno, "sweep needs at least one step");
      sc.sweeps.push_back(std::move(s));
    } else {
      fail(lineno, "unknown keyword '" + kw + "'");
    }
  }

  // Cross-field validation; anchored to the end of the file.
  const auto check = [&](bool ok, const std::string& message) {
    if (!ok) fail(lineno, message);
  };
  const auto declared = [&](const std::string& name) {
    for (const auto& [k, v] : sc.params)
      if (k == name) return true;
    return false;
  };
  for (const SweepSpec& s : sc.sweeps)
    check(declared(s.param), "sweep parameter '" + s.param + "' is not declared");
  check(sc.sweeps.size() <= 1 || sc.cartesian,
        "multiple sweeps need the 'cartesian' flag");
  check(sc.probes.empty() || sc.output == OutputMode::Distribution,
        "probe photons require distribution output");
  const auto uses = [&](const ParamValue& pv) {
    check(pv.ref.empty() || declared(pv.ref),
          "parameter '" + pv.ref + "' is not declared");
  };
  for (const SourceRecord& rec : sc.sources) {
    if (rec.kind == SourceRecord::Photons) {
      uses(rec.photon.t);
      uses(rec.photon.f);
      uses(rec.photon.w);
      check(rec.photon.channel >= 0 && rec.photon.channel < sc.channels,
            "photon channel out of range");
      check(rec.photon.polarization < sc.polarizations,
            "photon polarization out of range");
    } else {
      uses(rec.bell.phase);
      uses(rec.bell.t1);
      uses(rec.bell.f1);
      uses(rec.bell.w1);
      uses(rec.bell.t2);
      uses(rec.bell.f2);
      uses(rec.bell.w2);
      check(rec.bell.ch1 >= 0 && rec.bell.ch1 < sc.channels &&
                rec.bell.ch2 >= 0 && rec.bell.ch2 < sc.channels,
            "bell channel out of range");
      check(sc.polarizations == 2, "bell pairs need two polarizations");
    }
  }
  for (const ElementRecord& e : sc.elements) {
    check(e.a >= 0 && e.a < sc.channels, "element channel out of range");
    if (e.kind == ElementRecord::Beamsplitter)
      check(e.b >= 0 && e.b < sc.channels && e.b != e.a,
            "beamsplitter needs two distinct channels");
    if (e.kind == ElementRecord::Delay)
      check(sc.periods > 1, "delay needs multiple periods");
  }
  for (const ProbePhoton& p : sc.probes) {
    uses(p.t);
    uses(p.f);
    uses(p.w);
    check(p.channel >= 0 && p.channel < sc.channels, "probe channel out of range");
    check(p.polarization < sc.polarizations, "probe polarization out of range");
  }
  if (sc.name.empty()) sc.name = "scenario";
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "name " << sc.name << "\n";
  out << "channels " << sc.channels << "\n";
  out << "polarizations " << sc.polarizations << "\n";
  out << "shape "
      << (sc.shape == PacketShape::Gaussian ? "gaussian" : "exponential") << "\n";
  if (sc.periods > 1 || sc.period_length != 0.0)
    out << "periods " << sc.periods << " " << fmt_double(sc.period_length) << "\n";
  if (sc.order_packets_by_time) out << "order_packets_by_time\n";
  for (const auto& [k, v] : sc.params)
    out << "param " << k << " " << fmt_double(v) << "\n";
  for (const SourceRecord& rec : sc.sources) {
    if (rec.kind == SourceRecord::Photons) {
      const PhotonRecord& p = rec.photon;
      out << "photons " << p.n << " " << p.channel << " "
          << (p.polarization == kPolH ? "H" : "V") << " "
          << render_param_value(p.t) << " " << render_param_value(p.f) << " "
          << render_param_value(p.w) << "\n";
    } else {
      const BellRecord& b = rec.bell;
      const char* kind = b.kind == BellKind::PhiPlus    ? "phi+"
                         : b.kind == BellKind::PhiMinus ? "phi-"
                         : b.kind == BellKind::PsiPlus  ? "psi+"
                                                        : "psi-";
      out << "bell " << b.ch1 << " " << b.ch2 << " " << kind << " "
          << render_param_value(b.phase) << " " << render_param_value(b.t1) << " "
          << render_param_value(b.f1) << " " << render_param_value(b.w1) << " "
          << render_param_value(b.t2) << " " << render_param_value(b.f2) << " "
          << render_param_value(b.w2) << "\n";
    }
  }
  for (const ElementRecord& e : sc.elements) {
    switch (e.kind) {
      case ElementRecord::Beamsplitter:
        out << "bs " << e.a << " " << e.b << " " << fmt_double(e.x) << " "
            << fmt_double(e.y) << "\n";
        break;
      case ElementRecord::PhaseShifter:
        out << "ps " << e.a << " " << fmt_double(e.x) << "\n";
        break;
      case ElementRecord::Delay:
        out << "delay " << e.a << "\n";
        break;
      case ElementRecord::Detector:
        out << "detector " << e.a;
        if (e.condition.has_value()) out << " cond " << *e.condition;
        out << "\n";
        break;
    }
  }
  for (const ProbePhoton& p : sc.probes)
    out << "probe " << p.channel << " " << (p.polarization == kPolH ? "H" : "V")
        << " " << render_param_value(p.t) << " " << render_param_value(p.f) << " "
        << render_param_value(p.w) << "\n";
  if (sc.core == Core::Direct) out << "core direct\n";
  out << "output "
      << (sc.output == OutputMode::Density ? "density" : "distribution") << "\n";
  if (sc.cartesian) out << "cartesian\n";
  for (const SweepSpec& s : sc.sweeps)
    out << "sweep " << s.param << " " << fmt_double(s.from) << " "
        << fmt_double(s.to) << " " << s.steps << "\n";
  return out.str();
}

namespace {

// Two photons, one per channel, meeting at a balanced beamsplitter; the
// second photon is delayed by dt.
constexpr const char* kBuiltinHom = R"(name hom
channels 2
polarizations 1
shape gaussian
param dt 0.0
photons 1 0 H 0.0 1.0 1.0
photons 1 1 H $dt 1.0 1.0
bs 0 1 45.0 0.0
detector 0
detector 1
output distribution
sweep dt 0.0 3.0 60
)";

// Three photons per channel instead of one.
constexpr const char* kBuiltinHom3 = R"(name hom3
channels 2
polarizations 1
shape gaussian
param dt 0.0
photons 3 0 H 0.0 1.0 1.0
photons 3 1 H $dt 1.0 1.0
bs 0 1 45.0 0.0
detector 0
detector 1
output distribution
sweep dt 0.0 3.0 60
)";

// Mach-Zehnder made of two balanced beamsplitters with a one-period delay in
// the lower arm. One photon enters each beamsplitter input, the second a full
// period (3.1) after the first. Narrow zero-photon packets define the
// measurement windows probed at the outputs: a coincidence of the early
// window on channel 0 with a window at tau on channel 1. The coincidence
// probability over tau shows peaks where the delayed and undelayed paths
// align (tau near one and two periods).
constexpr const char* kBuiltinDelayMz = R"(name delay_mz
channels 2
polarizations 1
shape exponential
periods 3 3.1
param tau 1.0
photons 0 0 H 0.001 1.0 0.01
photons 0 1 H $tau+0.001 1.0 0.01
photons 1 0 H 0.001 1.0 0.3
photons 1 1 H 3.101 1.0 0.3
bs 0 1 45.0 0.0
delay 1
bs 0 1 45.0 0.0
detector 0
detector 1
probe 0 H 0.001 1.0 0.01
probe 1 H $tau+0.001 1.0 0.01
output distribution
sweep tau 0.0 8.0 160
)";

// Entanglement swap: two Bell pairs, the inner photons (channels 1 and 2)
// interfere at a balanced beamsplitter and herald on a coincidence; the
// outer photons (channels 0 and 3) end up entangled. dt shifts the channel-2
// photon against the channel-1 photon, degrading the heralded state's
// purity. Packet times are spaced far apart (30 units at unit width) so only
// the two interfering photons overlap.
constexpr const char* kBuiltinSwap = R"(name swap
channels 4
polarizations 2
shape gaussian
param dt 1.0
bell 0 1 phi+ 0.0 0.0 1.0 1.0 30.0 1.0 1.0
bell 2 3 phi+ 0.0 $dt+30.0 1.0 1.0 60.0 1.0 1.0
bs 1 2 45.0 0.0
detector 0
detector 1 cond 1
detector 2 cond 1
detector 3
output density
)";

}  // namespace

std::vector<std::string> builtin_names() { return {"hom", "hom3", "delay_mz", "swap"}; }

Scenario builtin_scenario(const std::string& name) {
  if (name == "hom") return parse_scenario(kBuiltinHom);
  if (name == "hom3") return parse_scenario(kBuiltinHom3);
  if (name == "delay_mz") return parse_scenario(kBuiltinDelayMz);
  if (name == "swap") return parse_scenario(kBuiltinSwap);
  throw std::invalid_argument("unknown built-in scenario '" + name +
                              "' (have: hom, hom3, delay_mz, swap)");
}

namespace {

std::vector<double> sweep_grid(const SweepSpec& s) {
  std::vector<double> grid(static_cast<size_t>(s.steps));
  for (int k = 0; k < s.steps; ++k)
    grid[static_cast<size_t>(k)] =
        s.steps == 1 ? s.from
                     : s.from + (s.to - s.from) * static_cast<double>(k) /
                                    static_cast<double>(s.steps - 1);
  return grid;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& sc, std::optional<Core> core_override,
                            const std::map<std::string, double>& overrides) {
  std::map<std::string, double> base;
  for (const auto& [k, v] : sc.params) base[k] = v;
  for (const auto& [k, v] : overrides) {
    if (base.find(k) == base.end())
      throw std::invalid_argument("override names unknown parameter '" + k + "'");
    base[k] = v;
  }
  if (sc.sweeps.size() > 1 && !sc.cartesian)
    throw std::invalid_argument("multiple sweeps need the cartesian flag");

  std::vector<std::vector<double>> grids;
  grids.reserve(sc.sweeps.size());
  size_t total = 1;
  for (const SweepSpec& s : sc.sweeps) {
    if (base.find(s.param) == base.end())
      throw std::invalid_argument("sweep parameter '" + s.param + "' is not declared");
    grids.push_back(sweep_grid(s));
    total *= grids.back().size();
  }

  ScenarioResult result;
  result.name = sc.name;
  result.output = sc.output;
  for (const auto& [k, v] : sc.params) result.param_names.push_back(k);

  for (size_t idx = 0; idx < total; ++idx) {
    std::map<std::string, double> params = base;
    // First sweep outermost, last sweep fastest.
    size_t rest = idx;
    for (size_t s = sc.sweeps.size(); s-- > 0;) {
      const std::vector<double>& grid = grids[s];
      params[sc.sweeps[s].param] = grid[rest % grid.size()];
      rest /= grid.size();
    }

    SweepPoint pt;
    pt.index = static_cast<int>(idx);
    for (const std::string& name : result.param_names)
      pt.params.emplace_back(name, params.at(name));

    QODevice dev(sc.channels, sc.polarizations, sc.shape, sc.periods,
                 sc.period_length);
    dev.order_packets_by_time = sc.order_packets_by_time;
    for (const SourceRecord& rec : sc.sources) {
      if (rec.kind == SourceRecord::Photons) {
        const PhotonRecord& p = rec.photon;
        dev.add_photons(p.n, p.channel, p.polarization, p.t.resolve(params),
                        p.f.resolve(params), p.w.resolve(params));
      } else {
        const BellRecord& b = rec.bell;
        dev.add_bell_pair(b.ch1, b.ch2, b.kind, b.phase.resolve(params),
                          b.t1.resolve(params), b.f1.resolve(params),
                          b.w1.resolve(params), b.t2.resolve(params),
                          b.f2.resolve(params), b.w2.resolve(params));
      }
    }
    for (const ElementRecord& e : sc.elements) {
      switch (e.kind) {
        case ElementRecord::Beamsplitter:
          dev.beamsplitter(e.a, e.b, e.x, e.y);
          break;
        case ElementRecord::PhaseShifter:
          dev.phase_shifter(e.a, e.x);
          break;
        case ElementRecord::Delay:
          dev.delay(e.a);
          break;
        case ElementRecord::Detector:
          dev.detector(e.a, e.condition);
          break;
      }
    }
    if (!dev.sent())
      throw std::runtime_error("scenario does not give every channel a detector");

    const LevelIndex& levels = dev.circuit().levels();
    SimConfig cfg;
    cfg.core = core_override.value_or(sc.core);
    Occupation probe_occ;
    if (!sc.probes.empty()) {
      probe_occ.assign(static_cast<size_t>(levels.dim()), 0);
      for (const ProbePhoton& p : sc.probes) {
        const int flat = dev.table().find_packet(
            p.t.resolve(params), p.f.resolve(params), p.w.resolve(params));
        probe_occ[static_cast<size_t>(
            levels.level_of(p.channel, p.polarization, flat))] += 1;
      }
      cfg.restricted = std::vector<Occupation>{probe_occ};
    }

    const FockState out = run(dev.circuit(), dev.input_state(), cfg);

    if (sc.output == OutputMode::Density) {
      const std::vector<Branch> branches = postselect(out, dev.circuit().detectors());
      std::vector<int> surviving;
      for (const DetectorSpec& d : dev.circuit().detectors())
        if (!d.condition.has_value()) surviving.push_back(d.channel);
      DensityMatrix dm = density_matrix(branches, surviving);
      pt.purity_value = purity(dm);
      pt.density = std::move(dm);
    } else if (!sc.probes.empty()) {
      pt.rows.emplace_back(render_ket(levels, probe_occ),
                           std::norm(out.amplitude_of(probe_occ)));
    } else {
      const Distribution dist = distribution(out, dev.circuit().detectors());
      pt.rows.assign(dist.entries.begin(), dist.entries.end());
    }
    result.points.push_back(std::move(pt));
  }
  return result;
}

std::string format_csv(const ScenarioResult& result) {
  std::ostringstream out;
  if (result.output == OutputMode::Density) {
    if (result.points.size() != 1 || !result.points[0].density.has_value())
      throw std::invalid_argument(
          "density CSV covers a single sweep point; use JSON for sweeps");
    const DensityMatrix& dm = *result.points[0].density;
    for (size_t j = 0; j < dm.labels.size(); ++j)
      out << (j ? "," : "") << csv_quote(dm.labels[j]);
    out << "\n";
    for (int i = 0; i < dm.rho.rows(); ++i) {
      for (int j = 0; j < dm.rho.cols(); ++j)
        out << (j ? "," : "") << fmt_double(dm.rho(i, j).real()) << ","
            << fmt_double(dm.rho(i, j).imag());
      out << "\n";
    }
    return out.str();
  }

  out << "index";
  for (const std::string& name : result.param_names) out << "," << name;
  out << ",label,probability\n";
  for (const SweepPoint& pt : result.points) {
    for (const auto& [label, prob] : pt.rows) {
      out << pt.index;
      for (const auto& [k, v] : pt.params) out << "," << fmt_double(v);
      out << "," << csv_quote(label) << "," << fmt_double(prob) << "\n";
    }
  }
  return out.str();
}

std::string format_json(const ScenarioResult& result) {
  nlohmann::ordered_json j;
  j["name"] = result.name;
  j["output"] =
      result.output == OutputMode::Density ? "density" : "distribution";
  j["points"] = nlohmann::ordered_json::array();
  for (const SweepPoint& pt : result.points) {
    nlohmann::ordered_json jp;
    jp["index"] = pt.index;
    jp["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : pt.params) jp["params"][k] = v;
    if (pt.density.has_value()) {
      const DensityMatrix& dm = *pt.density;
      nlohmann::ordered_json jd;
      jd["labels"] = dm.labels;
      nlohmann::ordered_json re = nlohmann::ordered_json::array();
      nlohmann::ordered_json im = nlohmann::ordered_json::array();
      for (int r = 0; r < dm.rho.rows(); ++r) {
        nlohmann::ordered_json row_re = nlohmann::ordered_json::array();
        nlohmann::ordered_json row_im = nlohmann::ordered_json::array();
        for (int c = 0; c < dm.rho.cols(); ++c) {
          row_re.push_back(dm.rho(r, c).real());
          row_im.push_back(dm.rho(r, c).imag());
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
      }
      jd["real"] = std::move(re);
      jd["imag"] = std::move(im);
      jd["purity"] = pt.purity_value;
      jp["density"] = std::move(jd);
    } else {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& [label, prob] : pt.rows)
        rows.push_back({{"label", label}, {"probability", prob}});
      jp["rows"] = std::move(rows);
    }
    j["points"].push_back(std::move(jp));
  }
  return j.dump(2) + "\n";
}

}  // namespace lops
