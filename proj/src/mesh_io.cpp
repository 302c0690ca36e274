#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "tvem/mesh.hpp"

namespace tvem {

namespace {

enum class Section { None, Vertices, Elements, Boundary };

std::string location(int line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

PolygonalMesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  Section section = Section::None;
  std::map<long, int> vertex_index;
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> elements;
  std::map<std::pair<int, int>, BoundaryLabel> labels;
  std::optional<BoundaryLabel> default_label;

  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::string head;
    if (!(line >> head)) continue;

    if (head == "vertices" || head == "elements" || head == "boundary") {
      section = head == "vertices" ? Section::Vertices : head == "elements" ? Section::Elements : Section::Boundary;
      continue;  // the optional count after the keyword is informational
    }
    if (head == "default") {
      std::string tok;
      if (!(line >> tok)) throw MeshError(location(lineno) + "missing default label");
      default_label = parse_boundary_label(tok);
      continue;
    }

    switch (section) {
      case Section::None:
        throw MeshError(location(lineno) + "data outside of a section");
      case Section::Vertices: {
        long id = 0;
        double x = 0, y = 0;
        std::istringstream ids(head);
        if (!(ids >> id) || !(line >> x >> y)) throw MeshError(location(lineno) + "expected 'id x y'");
        if (!vertex_index.emplace(id, static_cast<int>(vertices.size())).second)
          throw MeshError(location(lineno) + "duplicate vertex id " + std::to_string(id));
        vertices.emplace_back(x, y);
        break;
      }
      case Section::Elements: {
        std::vector<int> el;
        long v = 0;
        while (line >> v) {
          auto it = vertex_index.find(v);
          if (it == vertex_index.end()) throw MeshError(location(lineno) + "unknown vertex id " + std::to_string(v));
          el.push_back(it->second);
        }
        if (!line.eof()) throw MeshError(location(lineno) + "malformed element");
        elements.push_back(std::move(el));
        break;
      }
      case Section::Boundary: {
        long b = 0;
        std::string tok;
        std::istringstream ids(head);
        long a = 0;
        if (!(ids >> a) || !(line >> b >> tok)) throw MeshError(location(lineno) + "expected 'a b label'");
        auto ia = vertex_index.find(a), ib = vertex_index.find(b);
        if (ia == vertex_index.end() || ib == vertex_index.end())
          throw MeshError(location(lineno) + "boundary edge references unknown vertex");
        const int u = std::min(ia->second, ib->second), w = std::max(ia->second, ib->second);
        labels[{u, w}] = parse_boundary_label(tok);
        break;
      }
    }
  }
  if (vertices.empty() || elements.empty()) throw MeshError("mesh file has no vertices or no elements");

  bool missing = false;
  PolygonalMesh mesh(std::move(vertices), std::move(elements), default_label.value_or(BoundaryLabel::Robin),
                     [&](const Edge& e) -> std::optional<BoundaryLabel> {
                       auto it = labels.find({e.vertices[0], e.vertices[1]});
                       if (it != labels.end()) return it->second;
                       if (!default_label) missing = true;
                       return std::nullopt;
                     });
  if (missing) throw MeshError("boundary edge without label and no default label");
  for (const auto& [key, label] : labels) {
    const int id = mesh.find_edge(key.first, key.second);
    if (id < 0 || !mesh.edges()[id].is_boundary())
      throw MeshError("labelled edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                      ") is not a boundary edge");
  }
  return mesh;
}

PolygonalMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mesh(buf.str());
}

std::string format_mesh(const PolygonalMesh& mesh) {
  std::string out;
  char buf[96];
  out += "vertices " + std::to_string(mesh.vertices().size()) + "\n";
  for (std::size_t i = 0; i < mesh.vertices().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i, mesh.vertices()[i].x(), mesh.vertices()[i].y());
    out += buf;
  }
  out += "elements " + std::to_string(mesh.num_elements()) + "\n";
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    out += std::to_string(k);
    for (int v : mesh.elements()[k].vertices) out += " " + std::to_string(v);
    out += "\n";
  }
  std::size_t nb = 0;
  for (const auto& e : mesh.edges()) nb += e.is_boundary();
  out += "boundary " + std::to_string(nb) + "\n";
  for (const auto& e : mesh.edges())
    if (e.is_boundary())
      out += std::to_string(e.vertices[0]) + " " + std::to_string(e.vertices[1]) + " " + to_string(e.label) + "\n";
  return out;
}

void save_mesh(const PolygonalMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file " + path);
  out << format_mesh(mesh);
}

}  // namespace tvem
