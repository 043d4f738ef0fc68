/**
 * @file mesh_generator.hpp
 * @brief Structured triangulations of rectangle-like domains with a
 *        piecewise linear ground surface.
 */
#pragma once

#include "mesh.hpp"

#include <cmath>
#include <vector>

namespace cflow {

struct StructuredMeshSpec {
    DomainGeometry geometry;
    double h = 0.1;  ///< target cell size (m)
    /// Thickness of a band below the ground surface meshed at h/2 (0 disables).
    double surface_band = 0.0;
};

namespace detail {
inline int cells_for(double extent, double size) {
    return std::max(1, static_cast<int>(std::ceil(extent / size - 1e-9)));
}
}  // namespace detail

/// Splits a structured quad grid into triangles. Columns follow the top
/// polyline breakpoints so every interface face carries exactly one slope.
inline TriMesh generate_structured_mesh(const StructuredMeshSpec& spec) {
    const DomainGeometry& geo = spec.geometry;
    if (geo.top.size() < 2) throw MeshError("mesh generator: top polyline needs two points");
    if (!(spec.h > 0.0)) throw MeshError("mesh generator: h must be positive");

    std::vector<double> xs{geo.top.front().x};
    double max_height = 0.0;
    double min_height = geo.top.front().z - geo.bottom_z;
    for (std::size_t k = 0; k + 1 < geo.top.size(); ++k) {
        const double x0 = geo.top[k].x;
        const double x1 = geo.top[k + 1].x;
        if (!(x1 > x0)) throw MeshError("mesh generator: top polyline must increase in x");
        const int n = detail::cells_for(x1 - x0, spec.h);
        for (int i = 1; i <= n; ++i) xs.push_back(i == n ? x1 : x0 + (x1 - x0) * i / n);
    }
    for (const auto& p : geo.top) {
        max_height = std::max(max_height, p.z - geo.bottom_z);
        min_height = std::min(min_height, p.z - geo.bottom_z);
    }
    if (!(min_height > spec.surface_band) || !(spec.surface_band >= 0.0)) {
        throw MeshError("mesh generator: degenerate geometry (height vs surface band)");
    }

    const int n_lower = detail::cells_for(max_height - spec.surface_band, spec.h);
    const int n_band = spec.surface_band > 0.0 ? detail::cells_for(spec.surface_band, 0.5 * spec.h) : 0;
    const int nx = static_cast<int>(xs.size()) - 1;
    const int nz = n_lower + n_band;

    std::vector<Point> vertices;
    vertices.reserve(static_cast<std::size_t>((nx + 1) * (nz + 1)));
    for (int j = 0; j <= nz; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const double x = xs[i];
            const double top = geo.top_z(x);
            const double band_base = top - spec.surface_band;
            double z = 0.0;
            if (j <= n_lower) {
                z = j == n_lower ? band_base
                                 : geo.bottom_z + (band_base - geo.bottom_z) * j / n_lower;
            } else {
                const int jb = j - n_lower;
                z = jb == n_band ? top : band_base + spec.surface_band * jb / n_band;
            }
            vertices.push_back({x, z});
        }
    }
    const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(static_cast<std::size_t>(2 * nx * nz));
    for (int j = 0; j < nz; ++j) {
        for (int i = 0; i < nx; ++i) {
            triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }

    std::vector<TriMesh::BoundaryRecord> records;
    for (int i = 0; i < nx; ++i) {
        BottomPart part = BottomPart::none;
        if (geo.bottom_split) {
            part = 0.5 * (xs[i] + xs[i + 1]) < *geo.bottom_split ? BottomPart::left : BottomPart::right;
        }
        records.push_back({id(i, 0), id(i + 1, 0), FaceTag::bottom, part});
        records.push_back({id(i + 1, nz), id(i, nz), FaceTag::interface, BottomPart::none});
    }
    for (int j = 0; j < nz; ++j) {
        records.push_back({id(nx, j), id(nx, j + 1), FaceTag::wall, BottomPart::none});
        records.push_back({id(0, j + 1), id(0, j), FaceTag::wall, BottomPart::none});
    }
    return TriMesh::build(std::move(vertices), std::move(triangles), records);
}

}  // namespace cflow
