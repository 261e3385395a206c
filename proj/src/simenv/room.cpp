#include "ligen/simenv/room.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ligen/common/errors.hpp"
#include "ligen/common/seeding.hpp"

namespace ligen {
namespace {

// Relative AS7341-style channel responses (F1..F8, NIR, Clear) of a
// ~4000 K and a ~4500 K white LED.
constexpr ChannelWeights kWarmWhite{0.18, 0.62, 0.42, 0.55, 0.80, 0.95, 0.88, 0.52, 0.08, 2.10};
constexpr ChannelWeights kCoolWhite{0.22, 0.78, 0.50, 0.60, 0.82, 0.90, 0.78, 0.44, 0.06, 2.15};

// Per-panel binning tint, a few percent per channel.
constexpr std::array<ChannelWeights, 4> kPanelTint{{
    {0.03, -0.02, 0.04, -0.01, 0.02, -0.03, 0.01, 0.05, -0.04, 0.00},
    {-0.04, 0.03, -0.02, 0.05, -0.01, 0.02, -0.05, 0.01, 0.06, 0.01},
    {0.02, 0.05, -0.03, 0.00, -0.04, 0.01, 0.04, -0.02, -0.05, -0.01},
    {-0.01, -0.04, 0.01, -0.03, 0.05, 0.03, -0.02, -0.04, 0.03, 0.00},
}};
constexpr std::array<double, 4> kPanelPower{1.00, 0.94, 1.05, 0.97};
constexpr double kBasePower = 20000.0;

// Clips the parametric segment p(t) = a + t (b - a), t in [0, 1], against the
// slab [lo, hi] on one axis; narrows [t0, t1]. False when empty.
bool clip_axis(double a, double b, double lo, double hi, double& t0, double& t1) {
  const double d = b - a;
  if (std::abs(d) < 1e-15) return a >= lo && a <= hi;
  double ta = (lo - a) / d;
  double tb = (hi - a) / d;
  if (ta > tb) std::swap(ta, tb);
  t0 = std::max(t0, ta);
  t1 = std::min(t1, tb);
  return t0 <= t1;
}

bool ray_hits_box(const Occluder& o, Coordinate sensor, const Panel& panel) {
  double t0 = 0.0, t1 = 1.0;
  return clip_axis(sensor.x, panel.position.x, o.min.x, o.max.x, t0, t1) &&
         clip_axis(sensor.y, panel.position.y, o.min.y, o.max.y, t0, t1) &&
         clip_axis(0.0, panel.height, 0.0, o.height, t0, t1);
}

bool segment_hits_rect(const Occluder& o, Coordinate a, Coordinate b) {
  double t0 = 0.0, t1 = 1.0;
  return clip_axis(a.x, b.x, o.min.x, o.max.x, t0, t1) &&
         clip_axis(a.y, b.y, o.min.y, o.max.y, t0, t1);
}

void require_inside(const Extent& e, Coordinate c, const std::string& what) {
  if (!e.contains(c)) throw ContractViolation(what + " lies outside the room extent");
}

}  // namespace

void validate(const RoomModel& room) {
  if (!(room.extent.width > 0.0 && room.extent.height > 0.0))
    throw ContractViolation("RoomModel: extent must be positive");
  for (const Panel& p : room.panels) {
    require_inside(room.extent, p.position, "panel");
    if (!(p.height > 0.0)) throw ContractViolation("RoomModel: panel height must be positive");
    if (!(p.power > 0.0)) throw ContractViolation("RoomModel: panel power must be positive");
    for (double w : p.emission)
      if (!(w >= 0.0)) throw ContractViolation("RoomModel: emission weights must be >= 0");
  }
  for (const AccessPoint& ap : room.access_points) {
    require_inside(room.extent, ap.position, "access point");
    if (!(ap.path_loss_exponent > 0.0))
      throw ContractViolation("RoomModel: path loss exponent must be positive");
  }
  for (const Occluder& o : room.occluders) {
    require_inside(room.extent, o.min, "occluder");
    require_inside(room.extent, o.max, "occluder");
    if (o.min.x > o.max.x || o.min.y > o.max.y || !(o.height >= 0.0))
      throw ContractViolation("RoomModel: occluder box is inverted");
    for (double a : o.spectral_attenuation)
      if (!(a >= 0.0 && a <= 1.0))
        throw ContractViolation("RoomModel: attenuation factors must lie in [0, 1]");
    if (!(o.rssi_attenuation_db >= 0.0))
      throw ContractViolation("RoomModel: RSSI attenuation must be >= 0 dB");
  }
}

void validate(const NoiseModel& noise) {
  if (!(noise.spectral_relative >= 0.0) || !(noise.rssi_db >= 0.0))
    throw ContractViolation("NoiseModel: standard deviations must be >= 0");
}

RoomModel default_room(Extent extent) {
  RoomModel room;
  room.extent = extent;
  const double w = extent.width, h = extent.height;
  const std::array<Coordinate, 4> spots{{{w / 7.0, h / 7.0},
                                         {6.0 * w / 7.0, h / 7.0},
                                         {w / 7.0, 6.0 * h / 7.0},
                                         {6.0 * w / 7.0, 6.0 * h / 7.0}}};
  for (std::size_t p = 0; p < 4; ++p) {
    const double mix = static_cast<double>(p) / 3.0;  // 4000 K ... 4500 K
    Panel panel;
    panel.position = spots[p];
    panel.height = 2.5;
    panel.power = kBasePower * kPanelPower[p];
    for (std::size_t j = 0; j < kSpectralChannels; ++j)
      panel.emission[j] = ((1.0 - mix) * kWarmWhite[j] + mix * kCoolWhite[j]) * (1.0 + kPanelTint[p][j]);
    room.panels.push_back(panel);
  }
  const std::array<Coordinate, 6> ap_spots{{{0.0, 0.2 * h},
                                            {0.0, 0.8 * h},
                                            {w, 0.2 * h},
                                            {w, 0.8 * h},
                                            {0.5 * w, 0.0},
                                            {0.5 * w, h}}};
  for (const Coordinate& c : ap_spots) room.access_points.push_back({c, -40.0, 3.0});
  return room;
}

ChannelWeights spectral_transmission(const RoomModel& room, const Panel& panel, Coordinate at) {
  ChannelWeights t;
  t.fill(1.0);
  for (const Occluder& o : room.occluders)
    if (ray_hits_box(o, at, panel))
      for (std::size_t j = 0; j < kSpectralChannels; ++j) t[j] *= o.spectral_attenuation[j];
  return t;
}

SpectralFingerprint expected_spectral(const RoomModel& room, Coordinate at) {
  require_inside(room.extent, at, "sampling coordinate");
  SpectralFingerprint fp;
  for (const Panel& p : room.panels) {
    const double dx = at.x - p.position.x, dy = at.y - p.position.y;
    const double falloff = p.power / (dx * dx + dy * dy + p.height * p.height);
    const ChannelWeights t = spectral_transmission(room, p, at);
    for (std::size_t j = 0; j < kSpectralChannels; ++j) fp.channels[j] += falloff * p.emission[j] * t[j];
  }
  return fp;
}

RssiFingerprint expected_rssi(const RoomModel& room, Coordinate at) {
  require_inside(room.extent, at, "sampling coordinate");
  if (room.access_points.size() != kRssiChannels)
    throw ContractViolation("RoomModel: RSSI fingerprints need exactly 6 access points");
  RssiFingerprint fp;
  for (std::size_t a = 0; a < kRssiChannels; ++a) {
    const AccessPoint& ap = room.access_points[a];
    const double dist = std::hypot(at.x - ap.position.x, at.y - ap.position.y);
    double loss_db = 0.0;
    for (const Occluder& o : room.occluders)
      if (segment_hits_rect(o, ap.position, at)) loss_db += o.rssi_attenuation_db;
    fp.rssi[a] = ap.tx_power_dbm - 10.0 * ap.path_loss_exponent * std::log10(std::max(dist, 0.1)) - loss_db;
  }
  return fp;
}

RoomModel apply_clutter(const RoomModel& room, std::uint64_t clutter_seed, std::size_t n_occluders) {
  RoomModel out = room;
  Rng rng(derive_seed(clutter_seed, "clutter"));
  std::uniform_real_distribution<double> side(0.3, 1.0), unit(0.0, 1.0), transmission(0.3, 0.9),
      tint(-0.05, 0.05), loss(3.0, 10.0), height(0.4, 1.0);
  for (std::size_t i = 0; i < n_occluders; ++i) {
    Occluder o;
    const double w = std::min(side(rng), room.extent.width);
    const double h = std::min(side(rng), room.extent.height);
    o.min = {unit(rng) * (room.extent.width - w), unit(rng) * (room.extent.height - h)};
    o.max = {o.min.x + w, o.min.y + h};
    o.height = height(rng);
    const double base = transmission(rng);
    for (double& a : o.spectral_attenuation) a = std::clamp(base * (1.0 + tint(rng)), 0.3, 0.9);
    o.rssi_attenuation_db = loss(rng);
    out.occluders.push_back(o);
  }
  return out;
}

}  // namespace ligen
