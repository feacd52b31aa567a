#pragma once

#include <sstream>
#include <string>

#include "relcalc/relation.hpp"

namespace relcalc {

/// Renders the relation into a fixed 512-unit viewport, source coordinate
/// rightward and destination coordinate upward. Rendering is the one place
/// where coordinates leave exact arithmetic.
inline std::string render_svg(const Rel& r) {
    const double side = 512.0;
    double x0 = static_cast<double>(r.src().min());
    double x1 = static_cast<double>(r.src().max());
    double y0 = static_cast<double>(r.dst().min());
    double y1 = static_cast<double>(r.dst().max());
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto sx = [&](const Rat& v) { return (static_cast<double>(v) - x0) / (x1 - x0) * side; };
    auto sy = [&](const Rat& v) { return side - (static_cast<double>(v) - y0) / (y1 - y0) * side; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
       << "width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"512\" height=\"512\" fill=\"white\" stroke=\"black\"/>\n";
    for (const Cell& c : r.cells()) {
        switch (c.kind) {
            case Cell::Kind::Point:
                os << "<circle cx=\"" << sx(c.v[0].x) << "\" cy=\"" << sy(c.v[0].y)
                   << "\" r=\"3\" fill=\"black\"/>\n";
                break;
            case Cell::Kind::Segment:
                os << "<line x1=\"" << sx(c.v[0].x) << "\" y1=\"" << sy(c.v[0].y) << "\" x2=\""
                   << sx(c.v[1].x) << "\" y2=\"" << sy(c.v[1].y)
                   << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
                break;
            case Cell::Kind::Polygon: {
                os << "<polygon points=\"";
                for (std::size_t i = 0; i < c.v.size(); ++i) {
                    if (i) os << ' ';
                    os << sx(c.v[i].x) << ',' << sy(c.v[i].y);
                }
                os << "\" fill=\"gray\" fill-opacity=\"0.6\" stroke=\"black\"/>\n";
                break;
            }
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace relcalc
