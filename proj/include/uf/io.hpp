#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "uf/calculus.hpp"
#include "uf/grid.hpp"
#include "uf/ultraspace.hpp"

namespace uf::io {

using Json = nlohmann::ordered_json;

// printf %.17g: 17 significant digits, reads back to the same double.
std::string format_double(double v);

Json to_json(const Grid& g);
Grid grid_from_json(const Json& j);

// {"extent","h","origin","cells":[[i,j,..],..]}
Json to_json(const Region& r);
Region region_from_json(const Json& j);

// {"grid":{..},"coeffs":[..]} in row-major cell order
Json to_json(const Ultrafunction& u);
Ultrafunction ultrafunction_from_json(const Json& j);

// {"grid":{..},"components":[[..],..]}
Json to_json(const VectorUltrafunction& v);
VectorUltrafunction vector_from_json(const Json& j);

// {"density":"expr", "surface":[{"axis":a,"index":[..],"weight":w}], "atoms":[{"point":[..],"mass":m}]}
// Face "index" is the face's lattice position (extent + 1 positions along its axis).
RadonMeasureSpec measure_from_json(const Json& j, const Grid& grid);

// Cell centre coordinates and value, one row per cell, 17 significant digits.
std::string to_csv(const Ultrafunction& u);

Json read_json(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::map<std::string, std::string> params;
    std::string output_dir;
    double wall_seconds = 0.0;
};

Json to_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

}  // namespace uf::io
