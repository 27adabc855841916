#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stratawave/asymptotics.hpp"
#include "stratawave/stream_function.hpp"

namespace stratawave {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};
using Polyline = std::vector<Point2>;

// Relative velocity (u - c, v) = (psi_Y, -psi_x) at the physical points of the pushforward grid.
struct VelocitySamples {
  Layer layer = Layer::lower;
  int nx = 0;
  int ny = 0;
  std::vector<double> x;       // nx
  std::vector<double> y;       // ny reference heights
  std::vector<double> Y;       // physical heights, [i * ny + j]
  std::vector<double> u_rel;   // [i * ny + j]
  std::vector<double> v;
  // second-order central differences over interior nodes
  double max_divergence = 0.0;
  double divergence_tolerance = 0.0;
  bool divergence_ok() const { return max_divergence <= divergence_tolerance; }
};

VelocitySamples velocity(const StreamFunction& field, const FieldSpec& spec);

enum class StagnationKind { surface, interior_center };
const char* to_string(StagnationKind k) noexcept;

struct StagnationPoint {
  double x = 0.0;
  double y = 0.0;  // physical height
  StagnationKind kind = StagnationKind::surface;
};

struct AnalysisOptions {
  int nx = 256;             // scan columns over one period
  int ny = 128;             // scan rows over the layer
  int curve_samples = 129;  // samples per critical curve
  int streamlines = 3;      // closed and open samples each
};

struct StagnationReport {
  Layer layer = Layer::lower;
  std::vector<StagnationPoint> points;  // sorted by x
  double zeta = std::numeric_limits<double>::quiet_NaN();
  Polyline y_zeta_curve;                // (x, y_zeta(x)) for x in [zeta, 2pi/k - zeta]
  Polyline xi_curve;                    // (xi(y), y) for y in (-1, y_b]
  Polyline xi_bar_curve;                // (xi_bar(y), y) for y in (-1, y_bar_b]
  double y_b = std::numeric_limits<double>::quiet_NaN();
  double y_bar_b = std::numeric_limits<double>::quiet_NaN();
  Polyline separatrix;
  double critical_layer_area = 0.0;
  std::vector<std::string> warnings;

  const StagnationPoint* center() const;
};

// Zeros of grad psi in one period. A flat interface is rejected (degenerate_input);
// an unexpected count only adds a warning.
StagnationReport find_stagnation_points(const StreamFunction& field, const AnalysisOptions& options = {});

struct CriticalCurves {
  Polyline y_zeta, xi, xi_bar;
  double y_b = std::numeric_limits<double>::quiet_NaN();
  double y_bar_b = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

// Lower layer only; zeta is the surface stagnation abscissa in (0, pi/k).
CriticalCurves critical_curves(const StreamFunction& field, double zeta, const AnalysisOptions& options = {});

// y_zeta(x): the root of psi_Y on the column x (lower layer), or eta(x) outside (zeta, 2pi/k - zeta).
double y_zeta_at(const StreamFunction& field, double zeta, double x, int scan = 128);

struct Streamline {
  Polyline points;
  bool closed = false;
  bool exited = false;        // left the layer domain; the polyline is truncated
  bool spans_period = false;  // travelled a full period in x
  int winding = 0;            // around `center`, when given
  double closure_gap = std::numeric_limits<double>::quiet_NaN();
  double psi_drift = 0.0;     // max |psi - psi(seed)| along the path
  double length = 0.0;
};

// RK4 on the unit-speed field (psi_Y, -psi_x) / |grad psi|.
Streamline trace_streamline(const StreamFunction& field, Point2 seed, double step, double max_len,
                            std::optional<Point2> center = std::nullopt);

// Streamlines through evenly spaced psi-levels on the column x = pi/k, taken between the
// layer's flat wall and the center stagnation point (or the interface without one).
std::vector<Streamline> streamline_family(const StreamFunction& field, const StagnationReport& report, int count,
                                          double step, double max_len);

struct LayerAnalysis {
  Polyline separatrix;    // physical, from near (zeta, eta) to near (2pi/k - zeta, eta)
  Polyline layer_region;  // separatrix followed by the surface back to the start
  std::vector<Streamline> closed_streamline_samples;
  std::vector<Streamline> outer_streamline_samples;
  double area = 0.0;
  bool closes = false;
  double separatrix_depth = std::numeric_limits<double>::quiet_NaN();  // on x = pi/k
  double cell = 0.0;
  std::vector<std::string> warnings;
};

LayerAnalysis separatrix_and_layer(const StreamFunction& field, const StagnationReport& report,
                                   const AnalysisOptions& options = {});

// find_stagnation_points, critical_curves and separatrix_and_layer combined.
StagnationReport analyze_flow(const StreamFunction& field, const AnalysisOptions& options = {},
                              LayerAnalysis* layer = nullptr);

struct SignCheck {
  std::string name;
  long long sampled = 0;
  long long skipped = 0;  // within the margin of a curve
  long long violations = 0;
  double worst = 0.0;     // most wrong-signed value seen
  bool ok() const { return sampled > 0 && violations == 0; }
};

struct SignOptions {
  int nx = 512;
  int ny = 256;
  double margin = 1e-8;
};

// Sign patterns of the lower layer with omega > 0 on branch (k, 1): omega psi_yy > 0,
// psi_Y about y_zeta, psi_xY about xi and psi_x about xi_bar.
std::vector<SignCheck> lower_sign_checks(const StreamFunction& lower, double omega, const StagnationReport& report,
                                         const SignOptions& options = {});
// Upper layer: psi_Y > 0 everywhere and psi_x < 0 for x in (0, pi/k), eta <= Y < 1.
// `orientation` multiplies both quantities (+1 is the literal statement).
std::vector<SignCheck> upper_sign_checks(const StreamFunction& upper, double orientation = 1.0,
                                         const SignOptions& options = {});

}  // namespace stratawave
