#pragma once

#include <array>
#include <memory>
#include <vector>

#include "acipmaps/modulus.hpp"

namespace acipmaps {

/// Quintic Hermite bridge on [x0, x1]: starts at (v0, d0, s0) (value, slope,
/// curvature) and lands on v1 with zero slope and curvature.
class Bridge {
 public:
  Bridge(double x0, double x1, double v0, double d0, double s0, double v1);
  double value(double x) const;
  double slope(double x) const;
  /// int_{x0}^{x} of the bridge.
  double integral(double x) const;
  double x0() const { return x0_; }
  double x1() const { return x1_; }
  double max_value(int samples = 512) const;
  double min_value(int samples = 512) const;
  double max_abs_slope(int samples = 512) const;

 private:
  double x0_;
  double x1_;
  std::array<double, 6> c_{};  // coefficients in tau = (x - x0) / (x1 - x0)
};

/// Piecewise profile on [0, length]: an initial piece offset + scale * omega(x)
/// followed by bridges and constant holds. Antiderivatives are exact for the
/// polynomial pieces and use the modulus integral on the first piece.
class Profile {
 public:
  struct Piece {
    enum class Kind { modulus, bridge, constant };
    Kind kind;
    double x0;
    double x1;
    double offset = 0.0;  // modulus pieces
    double scale = 0.0;   // modulus pieces
    double level = 0.0;   // constant pieces
    std::shared_ptr<const Bridge> bridge;
  };

  Profile(std::vector<Piece> pieces, std::shared_ptr<const Modulus> omega);

  double value(double x) const;
  /// int_0^x of the profile; x is clamped to [0, length].
  double integral(double x) const;
  double length() const { return pieces_.back().x1; }
  double total() const { return prefix_.back(); }
  const std::vector<Piece>& pieces() const { return pieces_; }
  double max_abs_slope() const;  // over bridge pieces
  double max_value(int samples = 4096) const;
  double min_value(int samples = 4096) const;

 private:
  std::size_t locate(double x) const;
  double piece_integral(const Piece& p, double x) const;

  std::vector<Piece> pieces_;
  std::vector<double> prefix_;  // prefix_[i] = int_0^{x0_i}; last entry is the total
  std::shared_ptr<const Modulus> omega_;
};

/// Starting jet of a bridge that leaves the modulus piece offset + scale*omega
/// at x = c: either matched to omega's slope and curvature (C^2 junction) or
/// flat (C^0 junction). Callers decide which one is admissible.
struct BridgeStart {
  double value;
  double slope;
  double curvature;
  bool smooth;  // true when slope and curvature are matched
};
BridgeStart flat_start(const Modulus& omega, double c, double offset, double scale);
/// Falls back to flat_start when omega has no jet at c.
BridgeStart matched_start(const Modulus& omega, double c, double offset, double scale);

}  // namespace acipmaps
