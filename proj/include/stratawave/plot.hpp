#pragma once

#include <string>
#include <vector>

#include "stratawave/flowfield.hpp"

namespace stratawave {

struct PlotOptions {
  int width = 960;
  int height = 480;
};

// One period of both layers: interface, separatrix (thick), critical curves (dashed),
// stagnation points and streamlines with an arrow in the flow direction.
std::string render_flow_svg(const WaveProfile& profile, const StagnationReport& report,
                            const std::vector<Streamline>& lower_lines, const std::vector<Streamline>& upper_lines,
                            const PlotOptions& options = {});

}  // namespace stratawave
