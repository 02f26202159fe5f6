#include "screenbem/io.hpp"

#include "json.hpp"

#include <istream>
#include <iterator>
#include <ostream>

namespace screenbem {

void write_mesh_json(std::ostream& os, const ScreenPanelMesh& m)
{
    nlohmann::ordered_json j;
    j["dimension"] = m.dimension;
    auto verts = nlohmann::ordered_json::array();
    for (const auto& v : m.vertices) {
        auto a = nlohmann::ordered_json::array();
        for (int c = 0; c < m.dimension; ++c) a.push_back(v[c]);
        verts.push_back(a);
    }
    j["vertices"] = verts;
    auto panels = nlohmann::ordered_json::array();
    for (const auto& p : m.panels) {
        auto a = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < m.vertices_per_panel(); ++c) a.push_back(p[c]);
        panels.push_back(a);
    }
    j["panels"] = panels;
    auto boundary = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < m.boundary.size(); ++v)
        if (m.boundary[v]) boundary.push_back(v);
    j["boundary_vertices"] = boundary;
    os << j.dump() << '\n';
}

ScreenPanelMesh parse_mesh_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("mesh JSON: ") + e.what());
    }
    ScreenPanelMesh m;
    try {
        m.dimension = j.at("dimension").get<int>();
        require(m.dimension == 2 || m.dimension == 3, "mesh JSON: dimension must be 2 or 3");
        for (const auto& v : j.at("vertices")) {
            require(v.size() == static_cast<std::size_t>(m.dimension), "mesh JSON: vertex has wrong arity");
            Point p = Point::Zero();
            for (int c = 0; c < m.dimension; ++c) p[c] = v[c].get<double>();
            require(p[normal_axis(m.dimension)] == 0.0, "mesh JSON: vertex off the screen plane");
            m.vertices.push_back(p);
        }
        for (const auto& p : j.at("panels")) {
            require(p.size() == m.vertices_per_panel(), "mesh JSON: panel has wrong arity");
            std::array<std::size_t, 3> idx{0, 0, 0};
            for (std::size_t c = 0; c < m.vertices_per_panel(); ++c) {
                idx[c] = p[c].get<std::size_t>();
                require(idx[c] < m.vertices.size(), "mesh JSON: panel references a missing vertex");
            }
            m.panels.push_back(idx);
        }
        flag_boundary(m);
        std::vector<bool> declared(m.vertices.size(), false);
        for (const auto& b : j.at("boundary_vertices")) {
            const auto v = b.get<std::size_t>();
            require(v < m.vertices.size(), "mesh JSON: boundary vertex out of range");
            declared[v] = true;
        }
        require(declared == m.boundary, "mesh JSON: boundary_vertices inconsistent with panel adjacency");
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("mesh JSON: ") + e.what());
    }
    return m;
}

ScreenPanelMesh read_mesh_json(std::istream& is)
{
    const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_mesh_json(text);
}

}  // namespace screenbem
