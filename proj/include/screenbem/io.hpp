#pragma once

// Mesh JSON: {dimension, vertices: [[x...]], panels: [[indices]], boundary_vertices: [indices]}.
// Coordinates are written with round-trip precision, so import(export(m))
// reproduces m exactly.

#include "screenbem/geometry.hpp"

#include <iosfwd>
#include <string>

namespace screenbem {

void write_mesh_json(std::ostream& os, const ScreenPanelMesh& m);
ScreenPanelMesh read_mesh_json(std::istream& is);
ScreenPanelMesh parse_mesh_json(const std::string& text);

}  // namespace screenbem
