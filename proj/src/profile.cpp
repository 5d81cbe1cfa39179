#include "acipmaps/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acipmaps {

Bridge::Bridge(double x0, double x1, double v0, double d0, double s0, double v1)
    : x0_(x0), x1_(x1) {
  if (!(x1 > x0)) throw std::invalid_argument("Bridge: empty interval");
  const double len = x1 - x0;
  c_[0] = v0;
  c_[1] = len * d0;
  c_[2] = 0.5 * len * len * s0;
  const double A = v1 - (c_[0] + c_[1] + c_[2]);
  const double B = -(c_[1] + 2.0 * c_[2]);
  const double C = -2.0 * c_[2];
  c_[3] = 10.0 * A - 4.0 * B + 0.5 * C;
  c_[4] = -15.0 * A + 7.0 * B - C;
  c_[5] = 6.0 * A - 3.0 * B + 0.5 * C;
}

double Bridge::value(double x) const {
  const double tau = std::clamp((x - x0_) / (x1_ - x0_), 0.0, 1.0);
  double v = c_[5];
  for (int k = 4; k >= 0; --k) v = v * tau + c_[static_cast<std::size_t>(k)];
  return v;
}

double Bridge::slope(double x) const {
  const double tau = std::clamp((x - x0_) / (x1_ - x0_), 0.0, 1.0);
  double v = 5.0 * c_[5];
  for (int k = 4; k >= 1; --k) v = v * tau + k * c_[static_cast<std::size_t>(k)];
  return v / (x1_ - x0_);
}

double Bridge::integral(double x) const {
  const double tau = std::clamp((x - x0_) / (x1_ - x0_), 0.0, 1.0);
  double v = c_[5] / 6.0;
  for (int k = 4; k >= 0; --k) v = v * tau + c_[static_cast<std::size_t>(k)] / (k + 1);
  return (x1_ - x0_) * v * tau;
}

double Bridge::max_value(int samples) const {
  double m = -1e300;
  for (int i = 0; i <= samples; ++i) m = std::max(m, value(x0_ + (x1_ - x0_) * i / samples));
  return m;
}

double Bridge::min_value(int samples) const {
  double m = 1e300;
  for (int i = 0; i <= samples; ++i) m = std::min(m, value(x0_ + (x1_ - x0_) * i / samples));
  return m;
}

double Bridge::max_abs_slope(int samples) const {
  double m = 0.0;
  for (int i = 0; i <= samples; ++i)
    m = std::max(m, std::fabs(slope(x0_ + (x1_ - x0_) * i / samples)));
  return m;
}

Profile::Profile(std::vector<Piece> pieces, std::shared_ptr<const Modulus> omega)
    : pieces_(std::move(pieces)), omega_(std::move(omega)) {
  if (pieces_.empty()) throw std::invalid_argument("Profile: no pieces");
  prefix_.reserve(pieces_.size() + 1);
  prefix_.push_back(0.0);
  double expected = 0.0;
  for (const auto& p : pieces_) {
    if (p.x0 != expected || !(p.x1 > p.x0))
      throw std::invalid_argument("Profile: pieces must tile [0, length]");
    if (p.kind == Piece::Kind::modulus && !omega_)
      throw std::invalid_argument("Profile: modulus piece without modulus");
    if (p.kind == Piece::Kind::bridge && !p.bridge)
      throw std::invalid_argument("Profile: bridge piece without bridge");
    prefix_.push_back(prefix_.back() + piece_integral(p, p.x1));
    expected = p.x1;
  }
}

std::size_t Profile::locate(double x) const {
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (x < pieces_[i].x1) return i;
  return pieces_.size() - 1;
}

double Profile::value(double x) const {
  x = std::clamp(x, 0.0, length());
  const Piece& p = pieces_[locate(x)];
  switch (p.kind) {
    case Piece::Kind::modulus: return p.offset + p.scale * (*omega_)(x);
    case Piece::Kind::bridge: return p.bridge->value(x);
    case Piece::Kind::constant: return p.level;
  }
  return 0.0;
}

double Profile::piece_integral(const Piece& p, double x) const {
  switch (p.kind) {
    case Piece::Kind::modulus:
      return p.offset * (x - p.x0) + p.scale * (omega_->integral(x) - omega_->integral(p.x0));
    case Piece::Kind::bridge: return p.bridge->integral(x);
    case Piece::Kind::constant: return p.level * (x - p.x0);
  }
  return 0.0;
}

double Profile::integral(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= length()) return total();
  const std::size_t i = locate(x);
  return prefix_[i] + piece_integral(pieces_[i], x);
}

BridgeStart flat_start(const Modulus& omega, double c, double offset, double scale) {
  return BridgeStart{offset + scale * omega(c), 0.0, 0.0, false};
}

BridgeStart matched_start(const Modulus& omega, double c, double offset, double scale) {
  const BridgeStart flat = flat_start(omega, c, offset, scale);
  const auto jet = omega.jet(c);
  if (!jet || c <= 0.0) return flat;
  const double d0 = scale * jet->d1;
  const double s0 = scale * jet->d2;
  if (!std::isfinite(d0) || !std::isfinite(s0)) return flat;
  return BridgeStart{flat.value, d0, s0, true};
}

double Profile::max_abs_slope() const {
  double m = 0.0;
  for (const auto& p : pieces_)
    if (p.kind == Piece::Kind::bridge) m = std::max(m, p.bridge->max_abs_slope());
  return m;
}

double Profile::max_value(int samples) const {
  double m = -1e300;
  for (int i = 0; i <= samples; ++i) m = std::max(m, value(length() * i / samples));
  return m;
}

double Profile::min_value(int samples) const {
  double m = 1e300;
  for (int i = 0; i <= samples; ++i) m = std::min(m, value(length() * i / samples));
  return m;
}

}  // namespace acipmaps
