/**
 * @file mesh.hpp
 * @brief Unstructured triangular mesh, boundary classification and the
 *        ordered 1D interface grid used by the overland-flow solver.
 *
 * Coordinates are (x, z) in meters, z pointing upwards. The boundary of the
 * subsurface domain is split into the ground surface (interface), the lateral
 * walls and the bottom. The interface is traversed from left (point A) to
 * right (point B).
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cflow {

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point {
    double x = 0.0;
    double z = 0.0;
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.z - b.z}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.z + b.z}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.z}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.z * b.z; }
inline double norm(Point a) { return std::hypot(a.x, a.z); }

enum class FaceTag { interior, interface, wall, bottom };

/// Optional refinement of the bottom tag, used to prescribe fluxes on part of it.
enum class BottomPart { none, left, right };

struct Face {
    /// Endpoints, ordered counter-clockwise with respect to owners[0].
    std::array<int, 2> vertices{-1, -1};
    /// owners[0] is tau^-, owners[1] is tau^+ (or -1 on the boundary).
    std::array<int, 2> owners{-1, -1};
    /// Local edge index of this face in each owner.
    std::array<int, 2> local_edge{-1, -1};
    /// Unit normal pointing from owners[0] to owners[1]; outward on the boundary.
    Point normal;
    double length = 0.0;
    /// Largest diameter of the owning triangle(s).
    double diameter = 0.0;
    FaceTag tag = FaceTag::interior;
    BottomPart bottom_part = BottomPart::none;

    bool is_boundary() const { return owners[1] < 0; }
};

/// Conforming triangulation with face adjacency. Local edge k of a triangle
/// joins its local vertices k and (k+1) mod 3.
class TriMesh {
public:
    TriMesh() = default;

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<std::array<int, 3>>& triangle_faces() const { return triangle_faces_; }

    std::size_t num_triangles() const { return triangles_.size(); }
    std::size_t num_faces() const { return faces_.size(); }

    double area(std::size_t t) const { return areas_[t]; }
    double diameter(std::size_t t) const { return diameters_[t]; }
    double max_diameter() const {
        return diameters_.empty() ? 0.0 : *std::max_element(diameters_.begin(), diameters_.end());
    }
    Point vertex(std::size_t t, int local) const { return vertices_[triangles_[t][local]]; }

    std::size_t count_tag(FaceTag tag) const {
        return static_cast<std::size_t>(std::count_if(
            faces_.begin(), faces_.end(), [tag](const Face& f) { return f.tag == tag; }));
    }

    struct BoundaryRecord {
        int a = -1;
        int b = -1;
        FaceTag tag = FaceTag::wall;
        BottomPart part = BottomPart::none;
    };

    /// Builds adjacency, normals and diameters. Every edge owned by a single
    /// triangle must appear exactly once in `boundary`.
    static TriMesh build(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                         const std::vector<BoundaryRecord>& boundary);

    /// Returns a copy with boundary faces retagged.
    TriMesh with_tags(const std::vector<std::pair<FaceTag, BottomPart>>& face_tags) const;

private:
    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<Face> faces_;
    std::vector<std::array<int, 3>> triangle_faces_;
    std::vector<double> areas_;
    std::vector<double> diameters_;
};

inline TriMesh TriMesh::build(std::vector<Point> vertices,
                              std::vector<std::array<int, 3>> triangles,
                              const std::vector<BoundaryRecord>& boundary) {
    TriMesh mesh;
    const auto nv = static_cast<int>(vertices.size());
    mesh.areas_.resize(triangles.size());
    mesh.diameters_.resize(triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        for (int v : triangles[t]) {
            if (v < 0 || v >= nv) {
                throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                                std::to_string(v) + " out of range");
            }
        }
        const Point a = vertices[triangles[t][0]];
        const Point b = vertices[triangles[t][1]];
        const Point c = vertices[triangles[t][2]];
        const double twice_area = (b.x - a.x) * (c.z - a.z) - (c.x - a.x) * (b.z - a.z);
        const double scale = std::max({norm(b - a), norm(c - b), norm(a - c)});
        if (!(std::abs(twice_area) > 1e-14 * scale * scale)) {
            throw MeshError("degenerate (zero-area) triangle " + std::to_string(t));
        }
        if (twice_area < 0.0) {
            throw MeshError("triangle " + std::to_string(t) + " is not counter-clockwise");
        }
        mesh.areas_[t] = 0.5 * twice_area;
        mesh.diameters_[t] = scale;
    }

    // Edge key (min, max) -> face index.
    std::map<std::pair<int, int>, int> edge_index;
    mesh.triangle_faces_.assign(triangles.size(), {-1, -1, -1});
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int a = triangles[t][k];
            const int b = triangles[t][(k + 1) % 3];
            const auto key = std::minmax(a, b);
            auto [it, inserted] = edge_index.try_emplace({key.first, key.second},
                                                         static_cast<int>(mesh.faces_.size()));
            if (inserted) {
                Face f;
                f.vertices = {a, b};
                f.owners = {static_cast<int>(t), -1};
                f.local_edge = {k, -1};
                mesh.faces_.push_back(f);
            } else {
                Face& f = mesh.faces_[it->second];
                if (f.owners[1] >= 0) {
                    throw MeshError("non-conforming connectivity: edge (" + std::to_string(a) +
                                    ", " + std::to_string(b) + ") shared by more than two triangles");
                }
                if (f.vertices[0] != b || f.vertices[1] != a) {
                    throw MeshError("inconsistent orientation across edge (" + std::to_string(a) +
                                    ", " + std::to_string(b) + ")");
                }
                f.owners[1] = static_cast<int>(t);
                f.local_edge[1] = k;
            }
            mesh.triangle_faces_[t][k] = it->second;
        }
    }

    for (Face& f : mesh.faces_) {
        const Point a = vertices[f.vertices[0]];
        const Point b = vertices[f.vertices[1]];
        const Point tangent = b - a;
        f.length = norm(tangent);
        f.normal = {tangent.z / f.length, -tangent.x / f.length};
        f.diameter = mesh.diameters_[f.owners[0]];
        if (f.owners[1] >= 0) {
            f.diameter = std::max(f.diameter, mesh.diameters_[f.owners[1]]);
        }
        f.tag = FaceTag::interior;
    }

    std::vector<bool> seen(mesh.faces_.size(), false);
    for (const auto& rec : boundary) {
        const auto key = std::minmax(rec.a, rec.b);
        auto it = edge_index.find({key.first, key.second});
        if (it == edge_index.end()) {
            throw MeshError("boundary record (" + std::to_string(rec.a) + ", " +
                            std::to_string(rec.b) + ") matches no triangle edge");
        }
        Face& f = mesh.faces_[it->second];
        if (!f.is_boundary()) {
            throw MeshError("boundary record (" + std::to_string(rec.a) + ", " +
                            std::to_string(rec.b) + ") names an interior edge");
        }
        if (seen[it->second]) {
            throw MeshError("duplicate boundary record (" + std::to_string(rec.a) + ", " +
                            std::to_string(rec.b) + ")");
        }
        if (rec.tag == FaceTag::interior) {
            throw MeshError("boundary record tagged interior");
        }
        seen[it->second] = true;
        f.tag = rec.tag;
        f.bottom_part = rec.part;
    }
    for (std::size_t i = 0; i < mesh.faces_.size(); ++i) {
        const Face& f = mesh.faces_[i];
        if (f.is_boundary() && !seen[i]) {
            // An untagged single-owner edge is either a missing record or a hanging node.
            throw MeshError("non-conforming connectivity: edge (" + std::to_string(f.vertices[0]) +
                            ", " + std::to_string(f.vertices[1]) +
                            ") has one owner but no boundary record");
        }
    }

    mesh.vertices_ = std::move(vertices);
    mesh.triangles_ = std::move(triangles);
    return mesh;
}

inline TriMesh TriMesh::with_tags(
    const std::vector<std::pair<FaceTag, BottomPart>>& face_tags) const {
    if (face_tags.size() != faces_.size()) {
        throw MeshError("tag vector size does not match face count");
    }
    TriMesh copy = *this;
    for (std::size_t i = 0; i < faces_.size(); ++i) {
        if (copy.faces_[i].is_boundary()) {
            if (face_tags[i].first == FaceTag::interior) {
                throw MeshError("boundary face " + std::to_string(i) + " tagged interior");
            }
            copy.faces_[i].tag = face_tags[i].first;
            copy.faces_[i].bottom_part = face_tags[i].second;
        }
    }
    return copy;
}

// ---------------------------------------------------------------------------
// ASCII mesh format
// ---------------------------------------------------------------------------

namespace detail {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Next non-empty, non-comment line; false at end of stream.
    bool next(std::istringstream& out) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            out.clear();
            out.str(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw MeshError("mesh parse error at line " + std::to_string(line_no_) + ": " + what);
    }

    int line() const { return line_no_; }

private:
    std::istream& in_;
    int line_no_ = 0;
};

inline std::size_t read_header(LineReader& reader, const std::string& keyword) {
    std::istringstream ls;
    if (!reader.next(ls)) reader.fail("expected '" + keyword + " <count>', got end of file");
    std::string word;
    long long count = -1;
    if (!(ls >> word >> count) || word != keyword || count < 0) {
        reader.fail("expected '" + keyword + " <count>'");
    }
    std::string extra;
    if (ls >> extra) reader.fail("trailing token '" + extra + "'");
    return static_cast<std::size_t>(count);
}

inline std::pair<FaceTag, BottomPart> parse_tag(const std::string& s, LineReader& reader) {
    if (s == "INTERFACE") return {FaceTag::interface, BottomPart::none};
    if (s == "WALL") return {FaceTag::wall, BottomPart::none};
    if (s == "BOTTOM") return {FaceTag::bottom, BottomPart::none};
    if (s == "BOTTOM_L") return {FaceTag::bottom, BottomPart::left};
    if (s == "BOTTOM_R") return {FaceTag::bottom, BottomPart::right};
    reader.fail("unknown boundary tag '" + s + "'");
}

}  // namespace detail

inline const char* tag_name(FaceTag tag, BottomPart part = BottomPart::none) {
    switch (tag) {
        case FaceTag::interface: return "INTERFACE";
        case FaceTag::wall: return "WALL";
        case FaceTag::bottom:
            return part == BottomPart::left ? "BOTTOM_L"
                   : part == BottomPart::right ? "BOTTOM_R"
                                               : "BOTTOM";
        case FaceTag::interior: return "INTERIOR";
    }
    return "?";
}

inline TriMesh load_mesh(std::istream& in) {
    detail::LineReader reader(in);
    std::istringstream ls;

    const std::size_t nv = detail::read_header(reader, "vertices");
    std::vector<Point> vertices(nv);
    for (auto& p : vertices) {
        if (!reader.next(ls) || !(ls >> p.x >> p.z)) reader.fail("expected 'x z'");
        std::string extra;
        if (ls >> extra) reader.fail("trailing token '" + extra + "'");
        if (!std::isfinite(p.x) || !std::isfinite(p.z)) reader.fail("non-finite coordinate");
    }

    const std::size_t nt = detail::read_header(reader, "triangles");
    std::vector<std::array<int, 3>> triangles(nt);
    for (auto& tri : triangles) {
        long long i = 0, j = 0, k = 0;
        if (!reader.next(ls) || !(ls >> i >> j >> k)) reader.fail("expected 'i j k'");
        std::string extra;
        if (ls >> extra) reader.fail("trailing token '" + extra + "'");
        for (long long v : {i, j, k}) {
            if (v < 0 || v >= static_cast<long long>(nv)) reader.fail("vertex index out of range");
        }
        tri = {static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)};
    }

    const std::size_t nb = detail::read_header(reader, "boundary");
    std::vector<TriMesh::BoundaryRecord> records(nb);
    for (auto& rec : records) {
        long long i = 0, j = 0;
        std::string tag;
        if (!reader.next(ls) || !(ls >> i >> j >> tag)) reader.fail("expected 'i j TAG'");
        std::string extra;
        if (ls >> extra) reader.fail("trailing token '" + extra + "'");
        if (i < 0 || j < 0 || i >= static_cast<long long>(nv) || j >= static_cast<long long>(nv)) {
            reader.fail("vertex index out of range");
        }
        const auto [t, part] = detail::parse_tag(tag, reader);
        rec = {static_cast<int>(i), static_cast<int>(j), t, part};
    }
    if (reader.next(ls)) reader.fail("unexpected content after boundary section");

    return TriMesh::build(std::move(vertices), std::move(triangles), records);
}

inline void write_mesh(std::ostream& out, const TriMesh& mesh) {
    out.precision(17);
    out << "vertices " << mesh.vertices().size() << '\n';
    for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.z << '\n';
    out << "triangles " << mesh.num_triangles() << '\n';
    for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    std::size_t nb = 0;
    for (const auto& f : mesh.faces()) nb += f.is_boundary() ? 1 : 0;
    out << "boundary " << nb << '\n';
    for (const auto& f : mesh.faces()) {
        if (!f.is_boundary()) continue;
        out << f.vertices[0] << ' ' << f.vertices[1] << ' ' << tag_name(f.tag, f.bottom_part) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Boundary classification
// ---------------------------------------------------------------------------

/// Rectangle-like domain: bottom at z = bottom_z, walls at the ends of the
/// top polyline, ground surface along the polyline.
struct DomainGeometry {
    std::vector<Point> top;  ///< left-to-right breakpoints of the ground surface
    double bottom_z = 0.0;
    std::optional<double> bottom_split;  ///< x separating BOTTOM_L from BOTTOM_R
    double tolerance = 1e-9;

    double x_min() const { return top.front().x; }
    double x_max() const { return top.back().x; }

    /// Elevation of the ground surface at x (linear between breakpoints).
    double top_z(double x) const {
        if (x <= top.front().x) return top.front().z;
        for (std::size_t k = 0; k + 1 < top.size(); ++k) {
            if (x <= top[k + 1].x) {
                const double s = (x - top[k].x) / (top[k + 1].x - top[k].x);
                return top[k].z + s * (top[k + 1].z - top[k].z);
            }
        }
        return top.back().z;
    }
};

inline TriMesh classify_boundary(const TriMesh& mesh, const DomainGeometry& geometry) {
    if (geometry.top.size() < 2) throw MeshError("geometry: top polyline needs two points");
    const double tol = geometry.tolerance * std::max(1.0, geometry.x_max() - geometry.x_min());
    const auto on_top = [&](Point p) {
        return p.x >= geometry.x_min() - tol && p.x <= geometry.x_max() + tol &&
               std::abs(p.z - geometry.top_z(p.x)) <= tol;
    };
    const auto on_wall = [&](Point p) {
        return std::abs(p.x - geometry.x_min()) <= tol || std::abs(p.x - geometry.x_max()) <= tol;
    };
    const auto on_bottom = [&](Point p) { return std::abs(p.z - geometry.bottom_z) <= tol; };

    std::vector<std::pair<FaceTag, BottomPart>> tags(mesh.num_faces(),
                                                     {FaceTag::interior, BottomPart::none});
    for (std::size_t i = 0; i < mesh.num_faces(); ++i) {
        const Face& f = mesh.faces()[i];
        if (!f.is_boundary()) continue;
        const Point a = mesh.vertices()[f.vertices[0]];
        const Point b = mesh.vertices()[f.vertices[1]];
        const Point mid = 0.5 * (a + b);
        if (on_top(a) && on_top(b) && on_top(mid) && std::abs(b.x - a.x) > tol) {
            tags[i] = {FaceTag::interface, BottomPart::none};
        } else if (on_bottom(a) && on_bottom(b)) {
            BottomPart part = BottomPart::none;
            if (geometry.bottom_split) {
                part = mid.x < *geometry.bottom_split ? BottomPart::left : BottomPart::right;
            }
            tags[i] = {FaceTag::bottom, part};
        } else if (on_wall(a) && on_wall(b) && std::abs(a.x - b.x) <= tol) {
            tags[i] = {FaceTag::wall, BottomPart::none};
        } else {
            throw MeshError("boundary face " + std::to_string(i) +
                            " matches no geometry segment within tolerance");
        }
    }
    return mesh.with_tags(tags);
}

// ---------------------------------------------------------------------------
// Interface grid
// ---------------------------------------------------------------------------

struct InterfaceCell {
    double x_left = 0.0;
    double x_right = 0.0;
    Point center;
    double length = 0.0;
    double slope = 0.0;
    int face = -1;
    int triangle = -1;
    int vertex_left = -1;
    int vertex_right = -1;
};

/// Cells of the ground surface ordered from A (left) to B (right).
class InterfaceGrid {
public:
    InterfaceGrid() = default;
    explicit InterfaceGrid(std::vector<InterfaceCell> cells) : cells_(std::move(cells)) {}

    std::size_t size() const { return cells_.size(); }
    const InterfaceCell& operator[](std::size_t i) const { return cells_[i]; }
    const std::vector<InterfaceCell>& cells() const { return cells_; }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

    double total_length() const {
        double s = 0.0;
        for (const auto& c : cells_) s += c.length;
        return s;
    }

    /// Overrides slopes for cells whose center lies in [x0, x1].
    InterfaceGrid with_slope_override(double x0, double x1, double slope) const {
        if (!(slope > 0.0)) throw MeshError("slope override must be positive");
        InterfaceGrid copy = *this;
        for (auto& c : copy.cells_) {
            if (c.center.x >= x0 && c.center.x <= x1) c.slope = slope;
        }
        return copy;
    }

private:
    std::vector<InterfaceCell> cells_;
};

inline InterfaceGrid extract_interface_grid(const TriMesh& mesh) {
    std::vector<InterfaceCell> cells;
    for (std::size_t i = 0; i < mesh.num_faces(); ++i) {
        const Face& f = mesh.faces()[i];
        if (f.tag != FaceTag::interface) continue;
        int va = f.vertices[0];
        int vb = f.vertices[1];
        Point a = mesh.vertices()[va];
        Point b = mesh.vertices()[vb];
        if (a.x > b.x) {
            std::swap(a, b);
            std::swap(va, vb);
        }
        InterfaceCell c;
        c.x_left = a.x;
        c.x_right = b.x;
        c.center = 0.5 * (a + b);
        c.length = f.length;
        c.face = static_cast<int>(i);
        c.triangle = f.owners[0];
        c.vertex_left = va;
        c.vertex_right = vb;
        const double dx = b.x - a.x;
        if (!(dx > 0.0)) {
            throw MeshError("interface face " + std::to_string(i) + " is vertical");
        }
        c.slope = (a.z - b.z) / dx;
        if (!(c.slope > 0.0)) {
            throw MeshError("interface face " + std::to_string(i) +
                            " has non-positive slope; kinematic wave flux undefined");
        }
        cells.push_back(c);
    }
    if (cells.empty()) throw MeshError("mesh has no interface faces");
    std::sort(cells.begin(), cells.end(),
              [](const InterfaceCell& l, const InterfaceCell& r) { return l.x_left < r.x_left; });
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        if (cells[i].vertex_right != cells[i + 1].vertex_left) {
            throw MeshError("interface chain disconnected between cells " + std::to_string(i) +
                            " and " + std::to_string(i + 1));
        }
    }
    return InterfaceGrid(std::move(cells));
}

}  // namespace cflow
