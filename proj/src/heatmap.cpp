#include "epiq/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace epiq {

namespace {

std::string ramp_color(double p) {
    p = std::clamp(p, 0.0, 1.0);
    const int gb = static_cast<int>(std::lround(255.0 * (1.0 - p)));
    std::ostringstream os;
    os << "rgb(255," << gb << "," << gb << ")";
    return os.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

std::string heatmap_svg(const std::vector<Site>& sites,
                        const std::map<int, double>& infection,
                        const std::string& title) {
    if (sites.empty())
        throw std::invalid_argument("heatmap_svg: no sites");
    double x1 = 1e300, y1 = 1e300, x2 = -1e300, y2 = -1e300;
    for (const Site& s : sites) {
        if (s.has_rect) {
            x1 = std::min(x1, s.rect.x1);
            y1 = std::min(y1, s.rect.y1);
            x2 = std::max(x2, s.rect.x2);
            y2 = std::max(y2, s.rect.y2);
        } else {
            x1 = std::min(x1, s.position.x);
            y1 = std::min(y1, s.position.y);
            x2 = std::max(x2, s.position.x);
            y2 = std::max(y2, s.position.y);
        }
    }
    const double margin = std::max({40.0, 0.08 * (x2 - x1), 0.08 * (y2 - y1)});
    x1 -= margin;
    y1 -= margin;
    x2 += margin;
    y2 += margin;
    const double w = x2 - x1, h = y2 - y1;
    const double legend_w = 120.0;

    auto prob = [&](int id) {
        auto it = infection.find(id);
        return it == infection.end() ? 0.0 : it->second;
    };
    // SVG y grows downward; flip so the map reads with y upward.
    auto sx = [&](double x) { return x - x1; };
    auto sy = [&](double y) { return y2 - y; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
        << fmt(w + legend_w) << " " << fmt(h)
        << "\" font-family=\"sans-serif\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w + legend_w)
        << "\" height=\"" << fmt(h) << "\" fill=\"white\"/>\n";
    svg << "<text x=\"8\" y=\"18\" font-size=\"" << fmt(0.035 * h)
        << "\">" << title << "</text>\n";

    for (const Site& s : sites) {
        if (s.kind == SiteKind::index_patient) continue;
        const double p = prob(s.id);
        if (s.has_rect) {
            svg << "<rect x=\"" << fmt(sx(s.rect.x1)) << "\" y=\""
                << fmt(sy(s.rect.y2))
                << "\" width=\"" << fmt(s.rect.width()) << "\" height=\""
                << fmt(s.rect.height()) << "\" fill=\"" << ramp_color(p)
                << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        } else {
            svg << "<circle cx=\"" << fmt(sx(s.position.x)) << "\" cy=\""
                << fmt(sy(s.position.y)) << "\" r=\""
                << fmt(0.015 * std::max(w, h)) << "\" fill=\"" << ramp_color(p)
                << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        }
        std::ostringstream label;
        label.precision(3);
        label << (s.name.empty() ? "site " + std::to_string(s.id) : s.name)
              << " (" << p << ")";
        const double tx = sx(s.has_rect ? s.rect.x1 + 4.0 : s.position.x + 6.0);
        const double ty = s.has_rect ? sy(s.rect.y2) + 14.0 : sy(s.position.y) - 8.0;
        svg << "<text x=\"" << fmt(tx) << "\" y=\"" << fmt(ty)
            << "\" font-size=\"" << fmt(0.025 * h) << "\">" << label.str()
            << "</text>\n";
    }
    for (const Site& s : sites) {
        if (s.kind != SiteKind::index_patient) continue;
        svg << "<circle cx=\"" << fmt(sx(s.position.x)) << "\" cy=\""
            << fmt(sy(s.position.y)) << "\" r=\""
            << fmt(0.012 * std::max(w, h))
            << "\" fill=\"red\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }

    // Legend: vertical white-to-red gradient with 0/0.5/1 ticks.
    const double lx = w + 30.0, lw = 22.0, lh = 0.6 * h, ly0 = 0.2 * h;
    svg << "<defs><linearGradient id=\"ramp\" x1=\"0\" y1=\"1\" x2=\"0\" "
           "y2=\"0\">"
        << "<stop offset=\"0\" stop-color=\"rgb(255,255,255)\"/>"
        << "<stop offset=\"1\" stop-color=\"rgb(255,0,0)\"/>"
        << "</linearGradient></defs>\n";
    svg << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly0) << "\" width=\""
        << fmt(lw) << "\" height=\"" << fmt(lh)
        << "\" fill=\"url(#ramp)\" stroke=\"black\"/>\n";
    for (double tick : {0.0, 0.5, 1.0}) {
        const double ty = ly0 + lh * (1.0 - tick);
        svg << "<text x=\"" << fmt(lx + lw + 6.0) << "\" y=\"" << fmt(ty + 4.0)
            << "\" font-size=\"" << fmt(0.025 * h) << "\">" << tick
            << "</text>\n";
    }
    svg << "<text x=\"" << fmt(lx - 4.0) << "\" y=\"" << fmt(ly0 - 10.0)
        << "\" font-size=\"" << fmt(0.025 * h)
        << "\">P(infected)</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_heatmap_svg(const std::string& path, const std::vector<Site>& sites,
                       const std::map<int, double>& infection,
                       const std::string& title) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("heatmap: cannot write `" + path + "`");
    out << heatmap_svg(sites, infection, title);
}

} // namespace epiq
