#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcalc/dynamics.hpp"
#include "relcalc/errors.hpp"
#include "relcalc/fset.hpp"
#include "relcalc/function.hpp"
#include "relcalc/grid.hpp"
#include "relcalc/relation.hpp"
#include "relcalc/suitable.hpp"

namespace relcalc {

using json = nlohmann::json;

inline Rat rat_from_json(const json& j) {
    if (!j.is_string()) throw Error(Err::Parse, "rationals must be strings like \"p/q\"");
    try {
        return rat_parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw Error(Err::Parse, e.what());
    }
}

inline json space_to_json(const Space& s) {
    json arr = json::array();
    for (const SpaceComponent& c : s.components()) {
        if (c.is_point())
            arr.push_back({{"at", rat_str(c.lo)}});
        else
            arr.push_back({{"lo", rat_str(c.lo)}, {"hi", rat_str(c.hi)}});
    }
    return arr;
}

inline Space space_from_json(const json& j) {
    if (!j.is_array()) throw Error(Err::Parse, "space must be an array of components");
    std::vector<SpaceComponent> comps;
    for (const json& c : j) {
        if (c.contains("at")) {
            Rat p = rat_from_json(c.at("at"));
            comps.push_back({p, p});
        } else if (c.contains("lo") && c.contains("hi")) {
            comps.push_back({rat_from_json(c.at("lo")), rat_from_json(c.at("hi"))});
        } else {
            throw Error(Err::Parse, "space component needs at or lo/hi");
        }
    }
    return Space(std::move(comps));
}

inline json fset_to_json(const FSet& s) {
    json parts = json::array();
    for (const Part& p : s.parts()) {
        if (p.is_point())
            parts.push_back({{"at", rat_str(p.lo)}});
        else
            parts.push_back({{"lo", rat_str(p.lo)},
                             {"hi", rat_str(p.hi)},
                             {"lo_closed", p.lo_closed},
                             {"hi_closed", p.hi_closed}});
    }
    return {{"space", space_to_json(s.space())}, {"parts", parts}};
}

inline FSet fset_from_json(const json& j) {
    Space sp = space_from_json(j.at("space"));
    std::vector<Part> parts;
    for (const json& p : j.at("parts")) {
        if (p.contains("at")) {
            Rat x = rat_from_json(p.at("at"));
            parts.push_back({x, x, true, true});
        } else {
            parts.push_back({rat_from_json(p.at("lo")), rat_from_json(p.at("hi")),
                             p.value("lo_closed", true), p.value("hi_closed", true)});
        }
    }
    return FSet(std::move(sp), std::move(parts));
}

inline json rel_to_json(const Rel& r) {
    json cells = json::array();
    auto pt = [](const Pt& p) { return json::array({rat_str(p.x), rat_str(p.y)}); };
    for (const Cell& c : r.cells()) {
        switch (c.kind) {
            case Cell::Kind::Point:
                cells.push_back({{"type", "point"}, {"at", pt(c.v[0])}});
                break;
            case Cell::Kind::Segment:
                cells.push_back({{"type", "segment"}, {"a", pt(c.v[0])}, {"b", pt(c.v[1])}});
                break;
            case Cell::Kind::Polygon: {
                json vs = json::array();
                for (const Pt& p : c.v) vs.push_back(pt(p));
                cells.push_back({{"type", "polygon"}, {"vertices", vs}});
                break;
            }
        }
    }
    return {{"src", space_to_json(r.src())}, {"dst", space_to_json(r.dst())}, {"cells", cells}};
}

inline Rel rel_from_json(const json& j) {
    Space src = space_from_json(j.at("src"));
    Space dst = space_from_json(j.at("dst"));
    auto pt = [](const json& a) -> Pt {
        if (!a.is_array() || a.size() != 2) throw Error(Err::Parse, "point must be [x, y]");
        return {rat_from_json(a[0]), rat_from_json(a[1])};
    };
    std::vector<Cell> cells;
    for (const json& c : j.at("cells")) {
        std::string type = c.value("type", "");
        if (type == "point") {
            cells.push_back(Cell{Cell::Kind::Point, {pt(c.at("at"))}});
        } else if (type == "segment") {
            cells.push_back(Cell::from_points({pt(c.at("a")), pt(c.at("b"))}));
        } else if (type == "polygon") {
            std::vector<Pt> vs;
            for (const json& v : c.at("vertices")) vs.push_back(pt(v));
            Cell hull = Cell::from_points(vs);
            if (hull.kind == Cell::Kind::Polygon && hull.v.size() != vs.size())
                throw Error(Err::Parse, "polygon vertices must be strictly convex");
            cells.push_back(std::move(hull));
        } else {
            throw Error(Err::Parse, "cell type must be point, segment or polygon");
        }
    }
    return Rel(std::move(src), std::move(dst), std::move(cells));
}

inline json fun_to_json(const Fun& f) {
    json pieces = json::array();
    for (const FunPiece& p : f.pieces())
        pieces.push_back({{"interval",
                           {{"lo", rat_str(p.dom.lo)},
                            {"hi", rat_str(p.dom.hi)},
                            {"lo_closed", p.dom.lo_closed},
                            {"hi_closed", p.dom.hi_closed}}},
                          {"slope", rat_str(p.slope)},
                          {"intercept", rat_str(p.intercept)}});
    json iso = json::array();
    for (const FunPoint& p : f.isolated())
        iso.push_back({{"x", rat_str(p.x)}, {"y", rat_str(p.y)}});
    return {{"src", space_to_json(f.src())},
            {"dst", space_to_json(f.dst())},
            {"pieces", pieces},
            {"isolated", iso}};
}

inline Fun fun_from_json(const json& j) {
    Space src = space_from_json(j.at("src"));
    Space dst = space_from_json(j.at("dst"));
    std::vector<FunPiece> pieces;
    for (const json& p : j.value("pieces", json::array())) {
        const json& iv = p.at("interval");
        Part dom{rat_from_json(iv.at("lo")), rat_from_json(iv.at("hi")),
                 iv.value("lo_closed", true), iv.value("hi_closed", true)};
        pieces.push_back({dom, rat_from_json(p.at("slope")), rat_from_json(p.at("intercept"))});
    }
    std::vector<FunPoint> iso;
    for (const json& p : j.value("isolated", json::array()))
        iso.push_back({rat_from_json(p.at("x")), rat_from_json(p.at("y"))});
    return Fun(std::move(src), std::move(dst), std::move(pieces), std::move(iso));
}

inline json report_to_json(const Report& r) {
    json w = json::object();
    for (const auto& [name, set] : r.witnesses) w[name] = fset_to_json(set);
    return {{"full_domain", r.full_domain},
            {"one_dense", r.one_dense},
            {"pi1_irreducible", r.pi1_irreducible},
            {"pi2_almost_open", r.pi2_almost_open},
            {"suitable", r.suitable},
            {"surjective", r.surjective},
            {"iso", r.iso},
            {"witnesses", w}};
}

inline json orbit_to_json(const OrbitResult& o) {
    json pts = json::array();
    for (const Rat& p : o.points) pts.push_back(rat_str(p));
    json status;
    switch (o.status) {
        case OrbitResult::Status::Completed:
            status = {{"kind", "completed"}, {"steps", static_cast<long>(o.points.size()) - 1}};
            break;
        case OrbitResult::Status::Escaped:
            status = {{"kind", "escaped"}, {"step", o.escaped_step}};
            break;
        case OrbitResult::Status::Periodic:
            status = {{"kind", "periodic"}, {"preperiod", o.preperiod}, {"period", o.period}};
            break;
    }
    return {{"start", rat_str(o.start)}, {"points", pts}, {"status", status}};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Err::Parse, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(Err::Parse, std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Err::Parse, "cannot write " + path);
    out << body;
}

// --- grid export -----------------------------------------------------------

inline std::string grid_to_pbm(const Grid& g) {
    std::ostringstream os;
    os << "P1\n" << g.cols() << " " << g.rows() << "\n";
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            if (j) os << ' ';
            os << (g.get(i, j) ? '1' : '0');
        }
        os << '\n';
    }
    return os.str();
}

inline constexpr char kGridMagic[4] = {'R', 'G', 'R', '1'};

/// Raw row-major bit dump: 16-byte header (magic, k, rows, cols as
/// little-endian u32), then ceil(cols/8) bytes per row, LSB first.
inline std::string grid_to_bits(const Grid& g) {
    std::string out;
    auto push_u32 = [&](std::uint32_t v) {
        for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    };
    out.append(kGridMagic, 4);
    push_u32(static_cast<std::uint32_t>(g.k()));
    push_u32(static_cast<std::uint32_t>(g.rows()));
    push_u32(static_cast<std::uint32_t>(g.cols()));
    std::size_t bytes_per_row = (g.cols() + 7) / 8;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        std::string row(bytes_per_row, '\0');
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (g.get(i, j)) row[j / 8] |= static_cast<char>(1 << (j % 8));
        out += row;
    }
    return out;
}

/// Parses a bit dump back onto the box decomposition of the given spaces.
inline Grid grid_from_bits(const std::string& blob, const Space& src, const Space& dst,
                           std::size_t guard = kDefaultBoxGuard) {
    if (blob.size() < 16 || blob.compare(0, 4, kGridMagic, 4) != 0)
        throw Error(Err::Parse, "bad grid dump header");
    auto u32 = [&](std::size_t off) {
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(blob[off + b])) << (8 * b);
        return v;
    };
    int k = static_cast<int>(u32(4));
    std::size_t rows = u32(8), cols = u32(12);
    Grid g(k, src, dst, space_boxes(src, k, guard), space_boxes(dst, k, guard));
    if (g.rows() != rows || g.cols() != cols)
        throw Error(Err::DimensionMismatch, "grid dump does not match the spaces");
    std::size_t bytes_per_row = (cols + 7) / 8;
    if (blob.size() != 16 + rows * bytes_per_row)
        throw Error(Err::Parse, "grid dump payload truncated");
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (blob[16 + i * bytes_per_row + j / 8] & (1 << (j % 8))) g.set(i, j);
    return g;
}

}  // namespace relcalc
