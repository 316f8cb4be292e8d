#include "uf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "uf/error.hpp"
#include "uf/expr.hpp"

namespace uf::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing JSON field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad JSON field '") + key + "': " + e.what());
    }
}

Grid grid_fields(const Json& j) {
    const auto extent = field<std::vector<std::size_t>>(j, "extent");
    const double h = field<double>(j, "h");
    std::vector<double> origin(extent.size(), 0.0);
    if (j.contains("origin")) {
        const Json& o = j.at("origin");
        // a scalar origin is accepted for 1D grids
        origin = o.is_number() ? std::vector<double>{o.get<double>()} : field<std::vector<double>>(j, "origin");
    }
    const int dim = j.contains("dim") ? field<int>(j, "dim") : static_cast<int>(extent.size());
    return build_grid(dim, extent, origin, h);
}

}  // namespace

Json to_json(const Grid& g) {
    Json j;
    j["dim"] = g.dim();
    j["extent"] = g.extents();
    j["origin"] = g.origin();
    j["h"] = g.h();
    return j;
}

Grid grid_from_json(const Json& j) { return grid_fields(j); }

Json to_json(const Region& r) {
    const Grid& g = r.grid();
    Json j;
    j["extent"] = g.extents();
    j["h"] = g.h();
    j["origin"] = g.origin();
    Json cells = Json::array();
    for (std::size_t c : r.cells()) cells.push_back(g.unflatten(c));
    j["cells"] = cells;
    return j;
}

Region region_from_json(const Json& j) {
    const Grid g = j.contains("grid") ? grid_fields(j.at("grid")) : grid_fields(j);
    const auto cells = field<std::vector<CellIndex>>(j, "cells");
    return Region::from_cells(g, cells);
}

Json to_json(const Ultrafunction& u) {
    Json j;
    j["grid"] = to_json(u.grid());
    j["coeffs"] = std::vector<double>(u.coeffs().begin(), u.coeffs().end());
    return j;
}

Ultrafunction ultrafunction_from_json(const Json& j) {
    return Ultrafunction(grid_fields(field<Json>(j, "grid")), field<std::vector<double>>(j, "coeffs"));
}

Json to_json(const VectorUltrafunction& v) {
    Json j;
    j["grid"] = to_json(v.grid());
    Json comps = Json::array();
    for (const auto& c : v.components()) comps.push_back(std::vector<double>(c.coeffs().begin(), c.coeffs().end()));
    j["components"] = comps;
    return j;
}

VectorUltrafunction vector_from_json(const Json& j) {
    const Grid g = grid_fields(field<Json>(j, "grid"));
    std::vector<Ultrafunction> comps;
    for (auto& c : field<std::vector<std::vector<double>>>(j, "components")) comps.emplace_back(g, std::move(c));
    return VectorUltrafunction(std::move(comps));
}

RadonMeasureSpec measure_from_json(const Json& j, const Grid& grid) {
    if (!j.is_object()) throw InvalidArgument("measure JSON must be an object");
    RadonMeasureSpec mu;
    if (j.contains("density")) mu.density = to_point_function(Expression::parse(field<std::string>(j, "density")));
    if (j.contains("surface")) {
        for (const Json& s : j.at("surface")) {
            const int axis = field<int>(s, "axis");
            if (axis < 0 || axis >= grid.dim()) throw InvalidArgument("surface face axis out of range");
            const auto lattice = field<CellIndex>(s, "index");
            if (lattice.size() != static_cast<std::size_t>(grid.dim()))
                throw InvalidArgument("surface face index has the wrong dimension");
            for (int a = 0; a < grid.dim(); ++a) {
                const auto lim = static_cast<std::int64_t>(grid.extent(a)) + (a == axis ? 1 : 0);
                if (lattice[a] < 0 || lattice[a] >= lim) throw InvalidArgument("surface weight on a face that is not a grid face");
            }
            mu.surface.emplace_back(grid.face_id(axis, lattice), field<double>(s, "weight"));
        }
    }
    if (j.contains("atoms")) {
        for (const Json& a : j.at("atoms")) mu.atoms.push_back({field<std::vector<double>>(a, "point"), field<double>(a, "mass")});
    }
    return mu;
}

std::string to_csv(const Ultrafunction& u) {
    const Grid& g = u.grid();
    static const char* names[] = {"x", "y", "z"};
    std::string out;
    for (int a = 0; a < g.dim(); ++a) {
        out += a < 3 ? names[a] : "x" + std::to_string(a);
        out += ',';
    }
    out += "value\n";
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        for (int a = 0; a < g.dim(); ++a) {
            out += format_double(g.center(c, a));
            out += ',';
        }
        out += format_double(u[c]);
        out += '\n';
    }
    return out;
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Json to_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    j["inputs"] = m.inputs;
    j["params"] = m.params;
    j["output_dir"] = m.output_dir;
    j["version"] = kToolVersion;
    j["wall_seconds"] = m.wall_seconds;
    return j;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
    write_atomic(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

}  // namespace uf::io
