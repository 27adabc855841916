#pragma once

#include "stratawave/model.hpp"

namespace stratawave {

struct Derivatives {
  double f = 0.0, fx = 0.0, fy = 0.0, fxx = 0.0, fxy = 0.0, fyy = 0.0;
};

/// A stream function of one layer, known on the fixed rectangle
/// (y in [-1,0] below, [0,1] above) and mapped to the wavy physical domain by
/// Y = y + (1 + y) eta(x) below and Y = y + (1 - y) eta(x) above.
class StreamFunction {
 public:
  virtual ~StreamFunction() = default;

  virtual Layer layer() const = 0;
  virtual const WaveProfile& profile() const = 0;
  // w and its derivatives at reference point (x, y).
  virtual Derivatives reference(double x, double y) const = 0;

  // psi and its derivatives in physical coordinates (x, Y); derivatives are
  // with respect to x and Y.
  Derivatives physical(double x, double Y) const;

  double to_physical(double x, double y) const;
  double to_reference(double x, double Y) const;
  // Physical height of the layer's flat wall (-1 or 1) and interface eta(x).
  bool inside_physical(double x, double Y) const;

  double y_min() const { return layer() == Layer::lower ? -1.0 : 0.0; }
  double y_max() const { return layer() == Layer::lower ? 0.0 : 1.0; }
};

}  // namespace stratawave
