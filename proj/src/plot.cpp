#include "stratawave/plot.hpp"

#include <cmath>
#include <cstdio>

namespace stratawave {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Frame {
  double P, W, H, pad;
  double px(double x) const { return pad + (W - 2 * pad) * x / P; }
  double py(double y) const { return pad + (H - 2 * pad) * (1.0 - y) / 2.0; }
};

// Split at jumps introduced by wrapping x into [0, P).
std::vector<Polyline> wrapped(const Polyline& line, double P) {
  std::vector<Polyline> out(1);
  for (const auto& p : line) {
    Point2 q{std::fmod(p.x, P), p.y};
    if (q.x < 0) q.x += P;
    if (!out.back().empty() && std::abs(q.x - out.back().back().x) > 0.5 * P) out.emplace_back();
    out.back().push_back(q);
  }
  return out;
}

std::string path(const Frame& f, const Polyline& line) {
  std::string d;
  for (std::size_t q = 0; q < line.size(); ++q) {
    d += q == 0 ? "M" : " L";
    d += num(f.px(line[q].x)) + ',' + num(f.py(line[q].y));
  }
  return d;
}

void polyline(std::string& svg, const Frame& f, const Polyline& line, const char* style) {
  if (line.size() < 2) return;
  svg += "<path d=\"" + path(f, line) + "\" " + style + "/>\n";
}

void arrow(std::string& svg, const Frame& f, const Polyline& line) {
  if (line.size() < 3) return;
  const std::size_t m = line.size() / 2;
  const double x0 = f.px(line[m - 1].x), y0 = f.py(line[m - 1].y);
  const double x1 = f.px(line[m + 1].x), y1 = f.py(line[m + 1].y);
  const double n = std::hypot(x1 - x0, y1 - y0);
  if (!(n > 0)) return;
  const double ux = (x1 - x0) / n, uy = (y1 - y0) / n;
  const double cx = f.px(line[m].x), cy = f.py(line[m].y), a = 6.0;
  svg += "<path d=\"M" + num(cx + a * ux) + ',' + num(cy + a * uy) + " L" + num(cx - a * ux - 0.6 * a * uy) + ',' +
         num(cy - a * uy + 0.6 * a * ux) + " L" + num(cx - a * ux + 0.6 * a * uy) + ',' +
         num(cy - a * uy - 0.6 * a * ux) + " Z\" fill=\"#555\"/>\n";
}

}  // namespace

std::string render_flow_svg(const WaveProfile& eta, const StagnationReport& report,
                            const std::vector<Streamline>& lower_lines, const std::vector<Streamline>& upper_lines,
                            const PlotOptions& opt) {
  require(opt.width >= 100 && opt.height >= 100, ErrorCode::invalid_argument, "render_flow_svg: canvas too small");
  const Frame f{eta.period(), double(opt.width), double(opt.height), 24.0};
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
                    "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) +
                    ' ' + std::to_string(opt.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  polyline(svg, f, {{0, -1}, {f.P, -1}}, "stroke=\"black\" stroke-width=\"2\" fill=\"none\"");
  polyline(svg, f, {{0, 1}, {f.P, 1}}, "stroke=\"black\" stroke-width=\"2\" fill=\"none\"");

  for (const auto* set : {&lower_lines, &upper_lines}) {
    for (const auto& s : *set) {
      for (const auto& piece : wrapped(s.points, f.P)) {
        polyline(svg, f, piece, "stroke=\"#777\" stroke-width=\"1\" fill=\"none\"");
        arrow(svg, f, piece);
      }
    }
  }

  Polyline surface;
  for (int q = 0; q <= 512; ++q) {
    const double x = f.P * q / 512;
    surface.push_back({x, eta(x)});
  }
  polyline(svg, f, surface, "stroke=\"#1f4e9c\" stroke-width=\"2\" fill=\"none\"");
  polyline(svg, f, report.separatrix, "stroke=\"black\" stroke-width=\"3.5\" fill=\"none\"");
  const char* dashed = "stroke=\"#b03030\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\" fill=\"none\"";
  polyline(svg, f, report.y_zeta_curve, dashed);
  polyline(svg, f, report.xi_curve, "stroke=\"#2f7f2f\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\" fill=\"none\"");
  polyline(svg, f, report.xi_bar_curve, "stroke=\"#7f2f7f\" stroke-width=\"1.5\" stroke-dasharray=\"2 3\" fill=\"none\"");
  for (const auto& p : report.points) {
    svg += "<circle cx=\"" + num(f.px(p.x)) + "\" cy=\"" + num(f.py(p.y)) + "\" r=\"4\" fill=\"" +
           (p.kind == StagnationKind::surface ? "#d08000" : "#c00000") + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace stratawave
