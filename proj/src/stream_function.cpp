#include "stratawave/stream_function.hpp"

namespace stratawave {

namespace {
double wall_sign(Layer l) { return l == Layer::lower ? 1.0 : -1.0; }
}  // namespace

double StreamFunction::to_physical(double x, double y) const {
  const double s = wall_sign(layer());
  return y + (1.0 + s * y) * profile()(x);
}

double StreamFunction::to_reference(double x, double Y) const {
  const double s = wall_sign(layer());
  const double eta = profile()(x);
  return (Y - eta) / (1.0 + s * eta);
}

bool StreamFunction::inside_physical(double x, double Y) const {
  const double y = to_reference(x, Y);
  return y >= y_min() && y <= y_max();
}

Derivatives StreamFunction::physical(double x, double Y) const {
  const double sl = wall_sign(layer());
  const auto e = profile().evaluate(x);
  const double D = 1.0 + sl * e[0];
  const double y = (Y - e[0]) / D;
  const double a = 1.0 + sl * Y;
  const double yx = -e[1] * a / (D * D);
  const double yxx = -a * (e[2] * D - 2.0 * sl * e[1] * e[1]) / (D * D * D);
  const double yxY = -sl * e[1] / (D * D);
  const double yY = 1.0 / D;
  const Derivatives w = reference(x, y);
  Derivatives p;
  p.f = w.f;
  p.fx = w.fx + w.fy * yx;
  p.fy = w.fy * yY;
  p.fxx = w.fxx + 2.0 * w.fxy * yx + w.fyy * yx * yx + w.fy * yxx;
  p.fxy = (w.fxy + w.fyy * yx) * yY + w.fy * yxY;
  p.fyy = w.fyy * yY * yY;
  return p;
}

}  // namespace stratawave
