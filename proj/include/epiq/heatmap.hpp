#pragma once

#include <map>
#include <string>
#include <vector>

#include "epiq/geometry.hpp"

namespace epiq {

// SVG of the community layout with susceptible sites filled on a linear
// white-to-red ramp over infection probability [0, 1] and index patients
// drawn as dots. `infection` maps Site.id to probability; missing ids render
// as probability 0.
std::string heatmap_svg(const std::vector<Site>& sites,
                        const std::map<int, double>& infection,
                        const std::string& title);

void write_heatmap_svg(const std::string& path, const std::vector<Site>& sites,
                       const std::map<int, double>& infection,
                       const std::string& title);

} // namespace epiq
