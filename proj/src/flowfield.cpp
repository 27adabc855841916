#include "stratawave/flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "stratawave/parallel.hpp"

namespace stratawave {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

template <class F>
double refine(F&& f, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

// Sign changes of f on [a, b] over n equal intervals, each refined to full precision.
template <class F>
std::vector<double> scan_roots(F&& f, double a, double b, int n) {
  std::vector<double> roots;
  double xa = a, fa = f(a);
  for (int q = 1; q <= n; ++q) {
    const double xb = q == n ? b : a + (b - a) * q / n;
    const double fb = f(xb);
    if (fa == 0.0)
      roots.push_back(xa);
    else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0)
      roots.push_back(refine(f, xa, xb, fa, fb));
    xa = xb;
    fa = fb;
  }
  if (fa == 0.0) roots.push_back(xa);
  return roots;
}

double wall_sign(Layer l) { return l == Layer::lower ? 1.0 : -1.0; }

double wrap(double x, double P) {
  double r = std::fmod(x, P);
  if (r < 0) r += P;
  if (r >= P) r -= P;
  return r;
}

std::optional<Point2> newton_stagnation(const StreamFunction& f, double x, double y, double gscale) {
  for (int it = 0; it < 60; ++it) {
    const Derivatives d = f.reference(x, y);
    const double det = d.fxx * d.fyy - d.fxy * d.fxy;
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double dx = (d.fyy * d.fx - d.fxy * d.fy) / det;
    const double dy = (d.fxx * d.fy - d.fxy * d.fx) / det;
    x -= dx;
    y -= dy;
    if (std::abs(dx) + std::abs(dy) < 1e-14) break;
  }
  const Derivatives d = f.reference(x, y);
  if (!(std::abs(d.fx) + std::abs(d.fy) <= 1e-9 * gscale)) return std::nullopt;
  if (y < f.y_min() - 1e-12 || y > f.y_max() + 1e-12) return std::nullopt;
  return Point2{x, y};
}

// x in [0, pi/k] with eta(x) = Y, for an interface increasing on (0, pi/k).
double surface_abscissa(const WaveProfile& eta, double Y) {
  const double half = 0.5 * eta.period();
  const double e0 = eta(0.0), e1 = eta(half);
  if (Y <= e0) return 0.0;
  if (Y >= e1) return half;
  auto g = [&](double x) { return eta(x) - Y; };
  return refine(g, 0.0, half, e0 - Y, e1 - Y);
}

enum class Quantity { psi_x, psi_xy };

double quantity(const StreamFunction& f, Quantity q, double x, double Y) {
  const Derivatives d = f.physical(x, Y);
  return q == Quantity::psi_x ? d.fx : d.fxy;
}

// Root in x of the quantity on the fluid part of row Y inside (0, pi/k).
double row_root(const StreamFunction& f, Quantity q, double Y, int scan, int* count = nullptr) {
  const double half = 0.5 * f.profile().period();
  const double delta = 1e-6 * half;
  const double a = surface_abscissa(f.profile(), Y) + delta;
  const double b = half - delta;
  if (!(a < b)) {
    if (count) *count = 0;
    return nan_v;
  }
  const auto r = scan_roots([&](double x) { return quantity(f, q, x, Y); }, a, b, scan);
  if (count) *count = static_cast<int>(r.size());
  return r.empty() ? nan_v : r.front();
}

struct SurfaceRoot {
  double x = nan_v;
  int count = 0;
};

SurfaceRoot surface_root(const StreamFunction& f, Quantity q, int scan) {
  const WaveProfile& eta = f.profile();
  const double half = 0.5 * eta.period();
  const double delta = 1e-6 * half;
  const auto r = scan_roots([&](double x) { return quantity(f, q, x, eta(x)); }, delta, half - delta, scan);
  SurfaceRoot s;
  s.count = static_cast<int>(r.size());
  if (!r.empty()) s.x = r.front();
  return s;
}

Polyline row_curve(const StreamFunction& f, Quantity q, double x_top, double Y_top, int samples, int scan,
                   const char* name, std::vector<std::string>& warnings) {
  Polyline c;
  int bad = 0;
  for (int r = 1; r < samples; ++r) {
    const double Y = -1.0 + (Y_top + 1.0) * r / (samples - 1);
    if (r == samples - 1) {
      c.push_back({x_top, Y_top});
      break;
    }
    int n = 0;
    const double x = row_root(f, q, Y, scan, &n);
    if (n != 1) ++bad;
    if (std::isfinite(x)) c.push_back({x, Y});
  }
  if (bad) {
    std::ostringstream os;
    os << name << ": " << bad << " rows without a unique root";
    warnings.push_back(os.str());
  }
  return c;
}

}  // namespace

const char* to_string(StagnationKind k) noexcept {
  return k == StagnationKind::surface ? "surface" : "interior-center";
}

const StagnationPoint* StagnationReport::center() const {
  for (const auto& p : points)
    if (p.kind == StagnationKind::interior_center) return &p;
  return nullptr;
}

VelocitySamples velocity(const StreamFunction& field, const FieldSpec& spec) {
  require(spec.nx >= 4 && spec.ny >= 3, ErrorCode::invalid_argument, "velocity: need nx >= 4 and ny >= 3");
  VelocitySamples v;
  v.layer = field.layer();
  v.nx = spec.nx;
  v.ny = spec.ny;
  const WaveProfile& eta = field.profile();
  const double P = eta.period();
  const double sl = wall_sign(field.layer());
  v.x.resize(v.nx);
  v.y.resize(v.ny);
  for (int i = 0; i < v.nx; ++i) v.x[i] = P * i / v.nx;
  for (int j = 0; j < v.ny; ++j) v.y[j] = field.y_min() + (field.y_max() - field.y_min()) * j / (v.ny - 1);
  const std::size_t n = static_cast<std::size_t>(v.nx) * v.ny;
  v.Y.resize(n);
  v.u_rel.resize(n);
  v.v.resize(n);
  parallel_for(static_cast<std::size_t>(v.nx), [&](std::size_t i) {
    for (int j = 0; j < v.ny; ++j) {
      const std::size_t q = i * v.ny + j;
      v.Y[q] = field.to_physical(v.x[i], v.y[j]);
      const Derivatives d = field.physical(v.x[i], v.Y[q]);
      v.u_rel[q] = d.fy;
      v.v[q] = -d.fx;
    }
  });
  // d/dx|_Y = d_x + y_x d_y and d/dY = d_y / D in reference coordinates
  const double hx = P / v.nx, hy = (field.y_max() - field.y_min()) / (v.ny - 1);
  double umax = 0.0;
  for (std::size_t q = 0; q < n; ++q) umax = std::max({umax, std::abs(v.u_rel[q]), std::abs(v.v[q])});
  auto at = [&](const std::vector<double>& a, int i, int j) {
    return a[static_cast<std::size_t>((i + v.nx) % v.nx) * v.ny + j];
  };
  for (int i = 0; i < v.nx; ++i) {
    const auto e = eta.evaluate(v.x[i]);
    const double D = 1.0 + sl * e[0];
    for (int j = 1; j + 1 < v.ny; ++j) {
      const double yx = -e[1] * (1.0 + sl * v.y[j]) / D;
      const double ux = (at(v.u_rel, i + 1, j) - at(v.u_rel, i - 1, j)) / (2 * hx);
      const double uy = (at(v.u_rel, i, j + 1) - at(v.u_rel, i, j - 1)) / (2 * hy);
      const double vy = (at(v.v, i, j + 1) - at(v.v, i, j - 1)) / (2 * hy);
      v.max_divergence = std::max(v.max_divergence, std::abs(ux + yx * uy + vy / D));
    }
  }
  const double kk = eta.k();
  v.divergence_tolerance = 0.1 * (hx * hx + hy * hy) * kk * kk * umax + 1e-12 * umax;
  return v;
}

StagnationReport find_stagnation_points(const StreamFunction& field, const AnalysisOptions& opt) {
  require(opt.nx >= 8 && opt.nx % 2 == 0 && opt.ny >= 8, ErrorCode::invalid_argument,
          "find_stagnation_points: need even nx >= 8 and ny >= 8");
  const WaveProfile& eta = field.profile();
  if (eta.is_flat())
    fail(ErrorCode::degenerate_input, "find_stagnation_points: flat interface (the laminar surface is stagnant)");
  const double P = eta.period();
  const int nx = opt.nx, ny = opt.ny;
  const double h = P / nx;
  StagnationReport rep;
  rep.layer = field.layer();

  std::vector<StagnationPoint> found;
  auto add = [&](double x, double y_ref) {
    x = wrap(x, P);
    const double Y = field.to_physical(x, y_ref);
    for (const auto& p : found) {
      const double dx = std::min(std::abs(p.x - x), P - std::abs(p.x - x));
      if (dx < 1e-7 && std::abs(p.y - Y) < 1e-7) return;
    }
    const double e = eta(x);
    const double cell = 0.5 * (1.0 + wall_sign(field.layer()) * e) / (ny - 1);
    found.push_back({x, Y, std::abs(Y - e) <= cell ? StagnationKind::surface : StagnationKind::interior_center});
  };

  // along the interface psi = 0, so only psi_Y can vanish there
  auto wy0 = [&](double x) { return field.reference(x, 0.0).fy; };
  for (double x : scan_roots(wy0, 0.5 * h, P + 0.5 * h, nx)) add(x, 0.0);

  // interior: per column roots of w_y, then sign changes of w_x between neighbouring columns
  std::vector<std::vector<double>> col(nx);
  std::vector<std::vector<double>> colx(nx);
  std::vector<double> gmax(nx, 0.0);
  const double ya = field.y_min(), yb = field.y_max();
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    const double x = (i + 0.5) * h;
    auto g = [&](double y) {
      const double v = field.reference(x, y).fy;
      gmax[i] = std::max(gmax[i], std::abs(v));
      return v;
    };
    for (double y : scan_roots(g, ya, yb, ny)) {
      if (std::abs(y) < 1e-12) continue;
      col[i].push_back(y);
      colx[i].push_back(field.reference(x, y).fx);
    }
  });
  const double gscale = *std::max_element(gmax.begin(), gmax.end());
  for (int i = 0; i < nx; ++i) {
    const int j = (i + 1) % nx;
    for (std::size_t a = 0; a < col[i].size(); ++a) {
      std::size_t best = col[j].size();
      double dist = 0.25 * (yb - ya);
      for (std::size_t b = 0; b < col[j].size(); ++b) {
        if (std::abs(col[j][b] - col[i][a]) < dist) {
          dist = std::abs(col[j][b] - col[i][a]);
          best = b;
        }
      }
      if (best == col[j].size()) continue;
      if ((colx[i][a] < 0.0) == (colx[j][best] < 0.0)) continue;
      const auto p = newton_stagnation(field, (i + 1.0) * h, 0.5 * (col[i][a] + col[j][best]), gscale);
      if (p) add(p->x, std::clamp(p->y, ya, yb));
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  rep.points = std::move(found);

  for (const auto& p : rep.points)
    if (p.kind == StagnationKind::surface && p.x > 0.0 && p.x < 0.5 * P) {
      rep.zeta = p.x;
      break;
    }
  const std::size_t expected = field.layer() == Layer::lower ? 3 : 0;
  if (rep.points.size() != expected) {
    std::ostringstream os;
    os << "unexpected topology: " << rep.points.size() << " stagnation points in the " << to_string(field.layer())
       << " layer (expected " << expected << ")";
    rep.warnings.push_back(os.str());
  }
  return rep;
}

double y_zeta_at(const StreamFunction& field, double zeta, double x, int scan) {
  const WaveProfile& eta = field.profile();
  const double P = eta.period();
  x = wrap(x, P);
  if (x <= zeta || x >= P - zeta) return eta(x);
  const auto r = scan_roots([&](double y) { return field.reference(x, y).fy; }, -1.0, 0.0, scan);
  if (r.empty()) return nan_v;
  return field.to_physical(x, r.back());
}

CriticalCurves critical_curves(const StreamFunction& field, double zeta, const AnalysisOptions& opt) {
  require(field.layer() == Layer::lower, ErrorCode::invalid_argument, "critical_curves: lower layer only");
  const WaveProfile& eta = field.profile();
  const double P = eta.period();
  require(std::isfinite(zeta) && zeta > 0.0 && zeta < 0.5 * P, ErrorCode::invalid_argument,
          "critical_curves: zeta must lie in (0, pi/k)");
  require(opt.curve_samples >= 3, ErrorCode::invalid_argument, "critical_curves: need curve_samples >= 3");
  CriticalCurves c;
  const int M = opt.curve_samples;

  int missing = 0;
  for (int q = 0; q < M; ++q) {
    const double x = zeta + (P - 2.0 * zeta) * q / (M - 1);
    const double Y = y_zeta_at(field, zeta, x, opt.ny);
    if (std::isfinite(Y))
      c.y_zeta.push_back({x, Y});
    else
      ++missing;
  }
  if (missing) c.warnings.push_back("y_zeta: " + std::to_string(missing) + " columns without a root");

  const auto sb = surface_root(field, Quantity::psi_xy, opt.nx / 2);
  if (sb.count != 1) c.warnings.push_back("xi: " + std::to_string(sb.count) + " surface roots of psi_xy");
  if (std::isfinite(sb.x)) {
    c.y_b = eta(sb.x);
    c.xi = row_curve(field, Quantity::psi_xy, sb.x, c.y_b, M, opt.nx / 2, "xi", c.warnings);
  }
  c.y_bar_b = eta(zeta);
  c.xi_bar = row_curve(field, Quantity::psi_x, zeta, c.y_bar_b, M, opt.nx / 2, "xi_bar", c.warnings);
  // the last interior row should already sit next to the surface stagnation point
  return c;
}

Streamline trace_streamline(const StreamFunction& field, Point2 seed, double step, double max_len,
                            std::optional<Point2> center) {
  require(step > 0.0 && max_len > step && std::isfinite(max_len), ErrorCode::invalid_argument,
          "trace_streamline: need 0 < step < max_len");
  const double P = field.profile().period();
  auto inside = [&](Point2 p) {
    const double y = field.to_reference(p.x, p.y);
    return y >= field.y_min() && y <= field.y_max();
  };
  {
    const double y = field.to_reference(seed.x, seed.y);
    require(y > field.y_min() && y < field.y_max(), ErrorCode::invalid_argument,
            "trace_streamline: seed is not strictly inside the layer");
  }
  Streamline s;
  s.points.push_back(seed);
  const double psi0 = field.physical(seed.x, seed.y).f;
  auto dir = [&](Point2 p, Derivatives* out) -> std::optional<Point2> {
    const Derivatives d = field.physical(p.x, p.y);
    if (out) *out = d;
    const double n = std::hypot(d.fx, d.fy);
    if (!(n > 0.0)) return std::nullopt;
    return Point2{d.fy / n, -d.fx / n};
  };
  double angle = 0.0;
  auto turn = [&](Point2 a, Point2 b) {
    if (!center) return;
    const double t0 = std::atan2(a.y - center->y, a.x - center->x);
    const double t1 = std::atan2(b.y - center->y, b.x - center->x);
    double d = t1 - t0;
    while (d > pi) d -= 2 * pi;
    while (d < -pi) d += 2 * pi;
    angle += d;
  };
  bool left_seed = false;
  Point2 p = seed;
  while (s.length < max_len) {
    Derivatives here;
    const auto k1 = dir(p, &here);
    s.psi_drift = std::max(s.psi_drift, std::abs(here.f - psi0));
    if (!k1) break;
    const auto k2 = dir({p.x + 0.5 * step * k1->x, p.y + 0.5 * step * k1->y}, nullptr);
    if (!k2) break;
    const auto k3 = dir({p.x + 0.5 * step * k2->x, p.y + 0.5 * step * k2->y}, nullptr);
    if (!k3) break;
    const auto k4 = dir({p.x + step * k3->x, p.y + step * k3->y}, nullptr);
    if (!k4) break;
    const Point2 q{p.x + step / 6.0 * (k1->x + 2 * k2->x + 2 * k3->x + k4->x),
                   p.y + step / 6.0 * (k1->y + 2 * k2->y + 2 * k3->y + k4->y)};
    s.length += step;
    if (!inside(q)) {
      s.exited = true;
      break;
    }
    turn(p, q);
    s.points.push_back(q);
    s.psi_drift = std::max(s.psi_drift, std::abs(field.physical(q.x, q.y).f - psi0));
    if (std::abs(q.x - seed.x) >= P) {
      s.spans_period = true;
      break;
    }
    const double dq = std::hypot(q.x - seed.x, q.y - seed.y);
    if (dq > 4.0 * step) left_seed = true;
    if (left_seed) {
      // closest approach of the segment p -> q to the seed
      const double ex = q.x - p.x, ey = q.y - p.y;
      const double t = std::clamp(((seed.x - p.x) * ex + (seed.y - p.y) * ey) / (ex * ex + ey * ey), 0.0, 1.0);
      const double gap = std::hypot(p.x + t * ex - seed.x, p.y + t * ey - seed.y);
      if (gap < step && t < 1.0) {
        s.closed = true;
        s.closure_gap = gap;
        turn(q, seed);
        break;
      }
    }
    p = q;
  }
  if (center) s.winding = static_cast<int>(std::lround(angle / (2 * pi)));
  return s;
}

std::vector<Streamline> streamline_family(const StreamFunction& field, const StagnationReport& report, int count,
                                          double step, double max_len) {
  require(count >= 1, ErrorCode::invalid_argument, "streamline_family: count must be >= 1");
  const double xc = 0.5 * field.profile().period();
  const StagnationPoint* c = report.center();
  const double wall = field.layer() == Layer::lower ? -1.0 : 1.0;
  double ya = field.to_reference(xc, wall);
  double yb = c ? field.to_reference(xc, c->y) : 0.0;
  if (ya > yb) std::swap(ya, yb);
  const double fa = field.reference(xc, ya).f, fb = field.reference(xc, yb).f;
  std::optional<Point2> centre;
  if (c) centre = Point2{c->x, c->y};
  std::vector<Streamline> out(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t q) {
    const double level = fa + (fb - fa) * (q + 0.5) / count;
    auto g = [&](double y) { return field.reference(xc, y).f - level; };
    const auto r = scan_roots(g, ya, yb, 64);
    if (r.empty()) return;
    out[q] = trace_streamline(field, {xc, field.to_physical(xc, r.front())}, step, max_len, centre);
  });
  return out;
}

namespace {

struct Contour {
  Polyline pts;  // reference coordinates
  bool closed = false;
};

// Zero level set of g sampled on (nx+1) x ny nodes (values[i * ny + j]) by marching squares.
std::vector<Contour> marching_squares(const std::vector<double>& g, const std::vector<double>& xs,
                                      const std::vector<double>& ys) {
  const int nX = static_cast<int>(xs.size()), nY = static_cast<int>(ys.size());
  auto val = [&](int i, int j) { return g[static_cast<std::size_t>(i) * nY + j]; };
  auto hid = [&](int i, int j) { return 2L * (static_cast<long>(i) * nY + j); };
  auto vid = [&](int i, int j) { return 2L * (static_cast<long>(i) * nY + j) + 1; };
  std::map<long, Point2> cross;
  auto point_on = [&](long id) -> Point2 {
    auto it = cross.find(id);
    if (it != cross.end()) return it->second;
    const long node = id / 2;
    const int i = static_cast<int>(node / nY), j = static_cast<int>(node % nY);
    const int i2 = (id % 2 == 0) ? i + 1 : i, j2 = (id % 2 == 0) ? j : j + 1;
    const double a = val(i, j), b = val(i2, j2);
    const double t = a / (a - b);
    const Point2 p{xs[i] + t * (xs[i2] - xs[i]), ys[j] + t * (ys[j2] - ys[j])};
    cross.emplace(id, p);
    return p;
  };
  std::vector<std::pair<long, long>> segs;
  for (int i = 0; i + 1 < nX; ++i) {
    for (int j = 0; j + 1 < nY; ++j) {
      const double v0 = val(i, j), v1 = val(i + 1, j), v2 = val(i + 1, j + 1), v3 = val(i, j + 1);
      const bool b0 = v0 > 0, b1 = v1 > 0, b2 = v2 > 0, b3 = v3 > 0;
      const long e0 = hid(i, j), e1 = vid(i + 1, j), e2 = hid(i, j + 1), e3 = vid(i, j);
      std::vector<long> e;
      if (b0 != b1) e.push_back(e0);
      if (b1 != b2) e.push_back(e1);
      if (b2 != b3) e.push_back(e2);
      if (b3 != b0) e.push_back(e3);
      if (e.size() == 2) {
        segs.emplace_back(e[0], e[1]);
      } else if (e.size() == 4) {
        const bool bc = 0.25 * (v0 + v1 + v2 + v3) > 0;
        if (bc == b0) {
          segs.emplace_back(e0, e1);
          segs.emplace_back(e2, e3);
        } else {
          segs.emplace_back(e3, e0);
          segs.emplace_back(e1, e2);
        }
      }
    }
  }
  std::map<long, std::vector<std::size_t>> at;
  for (std::size_t q = 0; q < segs.size(); ++q) {
    at[segs[q].first].push_back(q);
    at[segs[q].second].push_back(q);
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Contour> out;
  auto walk = [&](long start, std::size_t first) {
    Contour c;
    long e = start;
    std::size_t s = first;
    c.pts.push_back(point_on(e));
    while (true) {
      used[s] = true;
      e = segs[s].first == e ? segs[s].second : segs[s].first;
      c.pts.push_back(point_on(e));
      std::size_t next = segs.size();
      for (std::size_t t : at[e])
        if (!used[t]) next = t;
      if (next == segs.size()) break;
      s = next;
    }
    c.closed = e == start && c.pts.size() > 2;
    out.push_back(std::move(c));
  };
  for (auto& [id, list] : at)
    if (list.size() == 1 && !used[list[0]]) walk(id, list[0]);
  for (std::size_t q = 0; q < segs.size(); ++q)
    if (!used[q]) walk(segs[q].first, q);
  return out;
}

}  // namespace

LayerAnalysis separatrix_and_layer(const StreamFunction& field, const StagnationReport& report,
                                   const AnalysisOptions& opt) {
  require(field.layer() == Layer::lower, ErrorCode::invalid_argument, "separatrix_and_layer: lower layer only");
  require(opt.nx >= 8 && opt.ny >= 8 && opt.streamlines >= 1, ErrorCode::invalid_argument,
          "separatrix_and_layer: need nx, ny >= 8 and at least one streamline");
  LayerAnalysis L;
  const StagnationPoint* c = report.center();
  if (report.points.size() != 3 || !c || !std::isfinite(report.zeta)) {
    L.warnings.push_back("separatrix: expected two surface points and one center");
    return L;
  }
  const WaveProfile& eta = field.profile();
  const double P = eta.period(), zeta = report.zeta;
  const int nx = opt.nx, ny = opt.ny;

  // psi vanishes on the surface as well; dividing by y removes that branch of the zero set
  auto gtilde = [&](double x, double y) {
    const Derivatives d = field.reference(x, y);
    return y == 0.0 ? d.fy : d.f / y;
  };
  std::vector<double> xs(nx + 1), ys(ny);
  for (int i = 0; i <= nx; ++i) xs[i] = P * i / nx;
  for (int j = 0; j < ny; ++j) ys[j] = -1.0 + static_cast<double>(j) / (ny - 1);
  ys.back() = 0.0;
  std::vector<double> g(static_cast<std::size_t>(nx + 1) * ny);
  parallel_for(static_cast<std::size_t>(nx + 1), [&](std::size_t i) {
    for (int j = 0; j < ny; ++j) g[i * ny + j] = gtilde(xs[i], ys[j]);
  });
  const auto contours = marching_squares(g, xs, ys);

  const double hx = P / nx;
  double emin = 1.0;
  for (int i = 0; i < nx; ++i) emin = std::min(emin, 1.0 + eta(xs[i]));
  L.cell = std::min(hx, emin / (ny - 1));
  const Contour* best = nullptr;
  double best_err = std::numeric_limits<double>::infinity();
  for (const auto& ct : contours) {
    if (ct.closed || ct.pts.size() < 2) continue;
    const Point2 a = ct.pts.front(), b = ct.pts.back();
    if (a.y < -1e-12 || b.y < -1e-12) continue;
    const double lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
    const double err = std::abs(lo - zeta) + std::abs(hi - (P - zeta));
    if (err < best_err) {
      best_err = err;
      best = &ct;
    }
  }
  if (!best) {
    L.warnings.push_back("separatrix: no open zero contour joins the surface");
    return L;
  }
  Polyline sep = best->pts;
  if (sep.front().x > sep.back().x) std::reverse(sep.begin(), sep.end());
  L.closes = std::abs(sep.front().x - zeta) < hx && std::abs(sep.back().x - (P - zeta)) < hx;
  if (!L.closes) L.warnings.push_back("separatrix: contour does not end at the surface stagnation points");
  for (auto& p : sep) p.y = field.to_physical(p.x, p.y);
  L.separatrix = sep;

  L.layer_region = sep;
  const int ns = 256;
  const double x0 = sep.front().x, x1 = sep.back().x;
  for (int q = 1; q < ns; ++q) {
    const double x = x1 + (x0 - x1) * q / ns;
    L.layer_region.push_back({x, eta(x)});
  }
  double area = 0.0;
  const auto& poly = L.layer_region;
  for (std::size_t q = 0; q < poly.size(); ++q) {
    const Point2& a = poly[q];
    const Point2& b = poly[(q + 1) % poly.size()];
    area += a.x * b.y - b.x * a.y;
  }
  L.area = 0.5 * std::abs(area);

  const double xc = 0.5 * P;
  const double yc_ref = field.to_reference(xc, c->y);
  const auto r = scan_roots([&](double y) { return gtilde(xc, y); }, -1.0, yc_ref, ny);
  if (r.empty()) {
    L.warnings.push_back("separatrix: no crossing below the center");
    return L;
  }
  L.separatrix_depth = field.to_physical(xc, r.back());

  const int n = opt.streamlines;
  const double step = 0.125 * L.cell;
  const double max_len = 4.0 * (P + 2.0);
  L.closed_streamline_samples.resize(n);
  L.outer_streamline_samples.resize(n);
  const Point2 centre{c->x, c->y};
  parallel_for(static_cast<std::size_t>(2 * n), [&](std::size_t q) {
    const double f = static_cast<double>(q % n + 1) / (n + 1);
    if (q < static_cast<std::size_t>(n)) {
      const Point2 seed{xc, c->y + f * (L.separatrix_depth - c->y)};
      L.closed_streamline_samples[q] = trace_streamline(field, seed, step, max_len, centre);
    } else {
      const Point2 seed{0.0, -1.0 + f * (1.0 + eta(0.0))};
      L.outer_streamline_samples[q - n] = trace_streamline(field, seed, step, max_len, centre);
    }
  });
  for (const auto& s : L.closed_streamline_samples)
    if (!s.closed || std::abs(s.winding) != 1) L.warnings.push_back("critical layer: a sampled streamline does not close");
  for (const auto& s : L.outer_streamline_samples)
    if (s.closed || !s.spans_period) L.warnings.push_back("outer flow: a sampled streamline does not span the period");
  return L;
}

StagnationReport analyze_flow(const StreamFunction& field, const AnalysisOptions& opt, LayerAnalysis* layer) {
  StagnationReport rep = find_stagnation_points(field, opt);
  if (field.layer() != Layer::lower || !std::isfinite(rep.zeta)) return rep;
  CriticalCurves cc = critical_curves(field, rep.zeta, opt);
  rep.y_zeta_curve = std::move(cc.y_zeta);
  rep.xi_curve = std::move(cc.xi);
  rep.xi_bar_curve = std::move(cc.xi_bar);
  rep.y_b = cc.y_b;
  rep.y_bar_b = cc.y_bar_b;
  rep.warnings.insert(rep.warnings.end(), cc.warnings.begin(), cc.warnings.end());
  if (rep.points.size() == 3) {
    LayerAnalysis L = separatrix_and_layer(field, rep, opt);
    rep.separatrix = L.separatrix;
    rep.critical_layer_area = L.area;
    rep.warnings.insert(rep.warnings.end(), L.warnings.begin(), L.warnings.end());
    if (layer) *layer = std::move(L);
  }
  return rep;
}

namespace {

void record(SignCheck& c, double value, int expected) {
  if (expected == 0) {
    ++c.skipped;
    return;
  }
  ++c.sampled;
  const double v = expected * value;
  if (!(v > 0.0)) {
    ++c.violations;
    c.worst = std::min(c.worst, v);
  }
}

void merge(SignCheck& into, const SignCheck& from) {
  into.sampled += from.sampled;
  into.skipped += from.skipped;
  into.violations += from.violations;
  into.worst = std::min(into.worst, from.worst);
}

// +1 left of the curve and below its top, -1 right of it or above the top, 0 inside the margin.
int side_of(double xr, double Y, double top, double xcurve, double margin) {
  if (Y > top + margin) return -1;
  if (Y >= top - margin) return 0;
  if (!std::isfinite(xcurve)) return 0;
  if (xr < xcurve - margin) return 1;
  if (xr > xcurve + margin) return -1;
  return 0;
}

}  // namespace

std::vector<SignCheck> lower_sign_checks(const StreamFunction& f, double omega, const StagnationReport& rep,
                                         const SignOptions& opt) {
  require(f.layer() == Layer::lower, ErrorCode::invalid_argument, "lower_sign_checks: lower layer only");
  require(opt.nx >= 4 && opt.nx % 2 == 0 && opt.ny >= 3 && opt.margin >= 0, ErrorCode::invalid_argument,
          "lower_sign_checks: need even nx >= 4, ny >= 3, margin >= 0");
  require(std::isfinite(rep.zeta) && std::isfinite(rep.y_b) && std::isfinite(rep.y_bar_b),
          ErrorCode::invalid_argument, "lower_sign_checks: report lacks zeta, y_b or y_bar_b");
  require(omega != 0.0, ErrorCode::invalid_argument, "lower_sign_checks: omega must be nonzero");
  const WaveProfile& eta = f.profile();
  const double P = eta.period(), half = 0.5 * P, zeta = rep.zeta, m = opt.margin;
  const int nx = opt.nx, ny = opt.ny;
  const int scan = std::max(64, nx / 4);

  // pushforward grid: psi_yy and psi_Y about y_zeta
  std::vector<SignCheck> yy(nx), yc(nx);
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    const double x = P * i / nx;
    const bool edge = std::abs(x - zeta) <= m || std::abs(x - (P - zeta)) <= m;
    const bool in = x > zeta && x < P - zeta;
    const double yz = in ? y_zeta_at(f, zeta, x, scan) : nan_v;
    for (int j = 0; j < ny; ++j) {
      const double Y = f.to_physical(x, -1.0 + static_cast<double>(j) / (ny - 1));
      const Derivatives d = f.physical(x, Y);
      record(yy[i], omega * d.fyy, 1);
      int e = -1;
      if (edge)
        e = 0;
      else if (in)
        e = !std::isfinite(yz) ? 0 : Y > yz + m ? 1 : Y < yz - m ? -1 : 0;
      if (in && !std::isfinite(yz)) ++yc[i].violations;
      record(yc[i], omega * d.fy, e);
    }
  });

  // physical rows: psi_xY about xi and psi_x about xi_bar; both are odd about x = pi/k
  double top = -1.0;
  for (int i = 0; i < nx; ++i) top = std::max(top, eta(P * i / nx));
  std::vector<SignCheck> xy(ny), xb(ny);
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    const double Y = -1.0 + (top + 1.0) * j / (ny - 1);
    const double xi = Y < rep.y_b - m ? row_root(f, Quantity::psi_xy, Y, scan) : nan_v;
    const double xib = Y < rep.y_bar_b - m && j > 0 ? row_root(f, Quantity::psi_x, Y, scan) : nan_v;
    if (Y < rep.y_b - m && !std::isfinite(xi)) ++xy[j].violations;
    if (Y < rep.y_bar_b - m && j > 0 && !std::isfinite(xib)) ++xb[j].violations;
    for (int i = 0; i < nx; ++i) {
      const double x = P * i / nx;
      if (Y > eta(x)) continue;
      if (i == 0 || i == nx / 2) {
        ++xy[j].skipped;
        ++xb[j].skipped;
        continue;
      }
      const double xr = x < half ? x : P - x;
      const int parity = x < half ? 1 : -1;
      const Derivatives d = f.physical(x, Y);
      record(xy[j], omega * d.fxy, parity * side_of(xr, Y, rep.y_b, xi, m));
      if (j == 0)
        ++xb[j].skipped;  // psi is constant on the bed
      else
        record(xb[j], omega * d.fx, parity * side_of(xr, Y, rep.y_bar_b, xib, m));
    }
  });

  std::vector<SignCheck> out(4);
  out[0].name = "lower: omega psi_yy > 0";
  out[1].name = "lower: omega psi_y about y_zeta";
  out[2].name = "lower: omega psi_xy about xi";
  out[3].name = "lower: omega psi_x about xi_bar";
  for (int i = 0; i < nx; ++i) {
    merge(out[0], yy[i]);
    merge(out[1], yc[i]);
  }
  for (int j = 0; j < ny; ++j) {
    merge(out[2], xy[j]);
    merge(out[3], xb[j]);
  }
  return out;
}

std::vector<SignCheck> upper_sign_checks(const StreamFunction& f, double orientation, const SignOptions& opt) {
  require(f.layer() == Layer::upper, ErrorCode::invalid_argument, "upper_sign_checks: upper layer only");
  require(opt.nx >= 4 && opt.nx % 2 == 0 && opt.ny >= 3, ErrorCode::invalid_argument,
          "upper_sign_checks: need even nx >= 4 and ny >= 3");
  require(orientation == 1.0 || orientation == -1.0, ErrorCode::invalid_argument,
          "upper_sign_checks: orientation must be +1 or -1");
  const double P = f.profile().period();
  const int nx = opt.nx, ny = opt.ny;
  std::vector<SignCheck> py(nx), px(nx);
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    const double x = P * i / nx;
    const bool open_half = i > 0 && static_cast<int>(i) < nx / 2;
    for (int j = 0; j < ny; ++j) {
      const double Y = f.to_physical(x, static_cast<double>(j) / (ny - 1));
      const Derivatives d = f.physical(x, Y);
      record(py[i], orientation * d.fy, 1);
      if (open_half && j < ny - 1) record(px[i], orientation * d.fx, -1);
    }
  });
  std::vector<SignCheck> out(2);
  out[0].name = "upper: psi_y > 0";
  out[1].name = "upper: psi_x < 0 on (0, pi/k)";
  if (orientation < 0) {
    out[0].name = "upper: psi_y < 0";
    out[1].name = "upper: psi_x > 0 on (0, pi/k)";
  }
  for (int i = 0; i < nx; ++i) {
    merge(out[0], py[i]);
    merge(out[1], px[i]);
  }
  return out;
}

}  // namespace stratawave
