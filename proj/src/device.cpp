#include "lops/device.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lops {

BellKind bell_kind_from_char(char c) {
  switch (c) {
    case 'p':
      return BellKind::PhiPlus;
    case 'm':
      return BellKind::PhiMinus;
    case 's':
      return BellKind::PsiPlus;
    case 'b':
      return BellKind::PsiMinus;
    default:
      throw std::invalid_argument("bell_kind_from_char: unknown kind character");
  }
}

QODevice::QODevice(int channels, int polarizations, PacketShape shape, int periods,
                   double period_length)
    : channels_(channels),
      polarizations_(polarizations),
      table_(shape, periods, period_length),
      channel_has_detector_(static_cast<size_t>(std::max(channels, 0)), false) {
  if (channels < 1) throw std::invalid_argument("QODevice: need at least one channel");
  if (polarizations < 1 || polarizations > 2)
    throw std::invalid_argument("QODevice: polarizations must be 1 or 2");
  // One branch with vacuum content; photons accumulate into it.
  branches_.emplace_back(Complex(1.0, 0.0), std::map<ModeKey, int>{});
}

void QODevice::require_not_sent(const char* who) const {
  if (circuit_.has_value())
    throw std::logic_error(std::string(who) + ": device already sent to circuit");
}

void QODevice::check_channel(int ch, const char* who) const {
  if (ch < 0 || ch >= channels_)
    throw std::out_of_range(std::string(who) + ": channel out of range");
}

int QODevice::register_packet(double t, double f, double w, int* period_out) {
  const int base = table_.def_packet(-1, t, f, w);
  if (period_out != nullptr) *period_out = table_.period_of(t);
  return base;
}

int QODevice::add_photons(int n, int channel, int polarization, double t, double f,
                          double w) {
  require_not_sent("add_photons");
  check_channel(channel, "add_photons");
  if (polarization < 0 || polarization >= polarizations_)
    throw std::out_of_range("add_photons: polarization out of range");
  if (n < 0) throw std::invalid_argument("add_photons: negative photon count");
  int period = 0;
  const int base = register_packet(t, f, w, &period);
  if (n > 0) {
    for (auto& [amp, modes] : branches_)
      modes[ModeKey{channel, polarization, base, period}] += n;
  }
  return base;
}

void QODevice::add_bell_pair(int ch1, int ch2, BellKind kind, double phase_deg,
                             double t1, double f1, double w1, double t2, double f2,
                             double w2) {
  require_not_sent("add_bell_pair");
  check_channel(ch1, "add_bell_pair");
  check_channel(ch2, "add_bell_pair");
  if (ch1 == ch2) throw std::invalid_argument("add_bell_pair: channels must differ");
  if (polarizations_ < 2)
    throw std::logic_error("add_bell_pair: device needs two polarizations");
  int period1 = 0;
  int period2 = 0;
  const int base1 = register_packet(t1, f1, w1, &period1);
  const int base2 = register_packet(t2, f2, w2, &period2);

  // (pol in ch1, pol in ch2) for each of the two superposed terms.
  int pa1 = kPolH, pa2 = kPolH, pb1 = kPolV, pb2 = kPolV;
  double sign = 1.0;
  switch (kind) {
    case BellKind::PhiPlus:
      break;
    case BellKind::PhiMinus:
      sign = -1.0;
      break;
    case BellKind::PsiPlus:
      pa2 = kPolV;
      pb2 = kPolH;
      break;
    case BellKind::PsiMinus:
      pa2 = kPolV;
      pb2 = kPolH;
      sign = -1.0;
      break;
  }
  const double rad = phase_deg * std::numbers::pi / 180.0;
  const Complex second = sign * std::exp(Complex(0.0, rad)) / std::sqrt(2.0);
  const Complex first = Complex(1.0 / std::sqrt(2.0), 0.0);

  std::vector<std::pair<Complex, std::map<ModeKey, int>>> next;
  next.reserve(branches_.size() * 2);
  for (const auto& [amp, modes] : branches_) {
    auto m1 = modes;
    m1[ModeKey{ch1, pa1, base1, period1}] += 1;
    m1[ModeKey{ch2, pa2, base2, period2}] += 1;
    next.emplace_back(amp * first, std::move(m1));
    auto m2 = modes;
    m2[ModeKey{ch1, pb1, base1, period1}] += 1;
    m2[ModeKey{ch2, pb2, base2, period2}] += 1;
    next.emplace_back(amp * second, std::move(m2));
  }
  branches_ = std::move(next);
}

void QODevice::beamsplitter(int ch1, int ch2, double theta_deg, double phi_deg) {
  require_not_sent("beamsplitter");
  check_channel(ch1, "beamsplitter");
  check_channel(ch2, "beamsplitter");
  if (ch1 == ch2) throw std::invalid_argument("beamsplitter: channels must differ");
  elements_.push_back({PendingElement::Beamsplitter, ch1, ch2, theta_deg, phi_deg, {}});
}

void QODevice::phase_shifter(int ch, double phi_deg) {
  require_not_sent("phase_shifter");
  check_channel(ch, "phase_shifter");
  elements_.push_back({PendingElement::PhaseShifter, ch, 0, phi_deg, 0.0, {}});
}

void QODevice::delay(int ch) {
  require_not_sent("delay");
  check_channel(ch, "delay");
  if (table_.periods() < 2)
    throw std::logic_error("delay: device was built without time periods");
  elements_.push_back({PendingElement::Delay, ch, 0, 0.0, 0.0, {}});
}

void QODevice::detector(int ch, std::optional<int> condition) {
  require_not_sent("detector");
  check_channel(ch, "detector");
  if (channel_has_detector_[static_cast<size_t>(ch)])
    throw std::invalid_argument("detector: channel already has a detector");
  if (condition.has_value() && *condition < 0)
    throw std::invalid_argument("detector: condition must be non-negative");
  elements_.push_back({PendingElement::Detector, ch, 0, 0.0, 0.0, condition});
  channel_has_detector_[static_cast<size_t>(ch)] = true;
  if (std::all_of(channel_has_detector_.begin(), channel_has_detector_.end(),
                  [](bool b) { return b; }))
    send_to_circuit();
}

const FockState& QODevice::send_to_circuit() {
  require_not_sent("send_to_circuit");
  if (table_.packet_count() == 0)
    throw std::logic_error("send_to_circuit: no wavepackets were declared");

  // Optional renumbering so the earliest packet leads the orthonormalization.
  std::vector<int> remap(static_cast<size_t>(table_.packets_per_period()));
  if (order_packets_by_time) {
    std::vector<int> order(remap.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
      return table_.descriptor(a).t0 < table_.descriptor(b).t0;
    });
    PacketTable sorted(table_.shape(), table_.periods(), table_.period_length());
    sorted.max_packets = table_.max_packets;
    for (size_t rank = 0; rank < order.size(); ++rank) {
      const PacketDescriptor d = table_.descriptor(order[rank]);
      sorted.def_packet(-1, d.t0, d.f0, d.width);
      remap[static_cast<size_t>(order[rank])] = static_cast<int>(rank);
    }
    table_ = std::move(sorted);
  } else {
    for (size_t i = 0; i < remap.size(); ++i) remap[i] = static_cast<int>(i);
  }

  const LevelIndex levels{channels_, polarizations_, table_.packet_count()};
  circuit_.emplace(levels, table_.periods());
  circuit_->emitter_from_table(table_, emitter_epsilon);

  for (const PendingElement& e : elements_) {
    switch (e.kind) {
      case PendingElement::Beamsplitter:
        circuit_->beamsplitter(e.a, e.b, e.x, e.y);
        break;
      case PendingElement::PhaseShifter:
        circuit_->phase_shifter(e.a, e.x);
        break;
      case PendingElement::Delay:
        circuit_->delay(e.a);
        break;
      case PendingElement::Detector:
        circuit_->detector(e.a, e.condition);
        break;
    }
  }

  std::vector<Ket> kets;
  kets.reserve(branches_.size());
  for (const auto& [amp, modes] : branches_) {
    Occupation occ(static_cast<size_t>(levels.dim()), 0);
    for (const auto& [key, count] : modes) {
      const int base = remap[static_cast<size_t>(key.base)];
      const int flat = table_.flat_of(base, key.period);
      occ[static_cast<size_t>(levels.level_of(key.channel, key.polarization, flat))] +=
          count;
    }
    kets.push_back(Ket{amp, std::move(occ)});
  }
  input_.emplace(levels, std::move(kets));
  return *input_;
}

const CircuitBuilder& QODevice::circuit() const {
  if (!circuit_.has_value())
    throw std::logic_error("circuit: device was not sent to circuit yet");
  return *circuit_;
}

const FockState& QODevice::input_state() const {
  if (!input_.has_value())
    throw std::logic_error("input_state: device was not sent to circuit yet");
  return *input_;
}

}  // namespace lops
