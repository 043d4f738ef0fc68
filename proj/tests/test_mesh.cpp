#include "support.hpp"

#include <coupledflow/mesh.hpp>
#include <coupledflow/mesh_generator.hpp>
#include <coupledflow/scenario.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace cflow;

TEST(Mesh, TwoTriangleSquareAdjacency) {
    const TriMesh m = fixtures::unit_square_pair();
    EXPECT_EQ(m.num_triangles(), 2u);
    EXPECT_EQ(m.num_faces(), 5u);
    EXPECT_EQ(m.count_tag(FaceTag::interior), 1u);
    EXPECT_EQ(m.count_tag(FaceTag::interface), 1u);
    EXPECT_EQ(m.count_tag(FaceTag::wall), 2u);
    EXPECT_EQ(m.count_tag(FaceTag::bottom), 1u);
    for (const Face& f : m.faces()) {
        EXPECT_NEAR(norm(f.normal), 1.0, 1e-14);
        if (f.tag == FaceTag::interface) {
            EXPECT_NEAR(f.normal.z, 1.0, 1e-14);
        }
        if (f.tag == FaceTag::bottom) {
            EXPECT_NEAR(f.normal.z, -1.0, 1e-14);
        }
        if (f.tag == FaceTag::interior) {
            EXPECT_NEAR(f.length, std::sqrt(2.0), 1e-14);
            // Normal points from owner 0 to owner 1.
            const Point c0 = (1.0 / 3.0) * (m.vertex(f.owners[0], 0) + m.vertex(f.owners[0], 1) +
                                            m.vertex(f.owners[0], 2));
            const Point c1 = (1.0 / 3.0) * (m.vertex(f.owners[1], 0) + m.vertex(f.owners[1], 1) +
                                            m.vertex(f.owners[1], 2));
            EXPECT_GT(dot(c1 - c0, f.normal), 0.0);
        }
    }
    EXPECT_NEAR(m.area(0) + m.area(1), 1.0, 1e-15);
}

TEST(Mesh, RejectsInvertedTriangle) {
    std::istringstream in("vertices 3\n0 0\n0 1\n1 0\ntriangles 1\n0 1 2\nboundary 3\n0 1 WALL\n1 2 WALL\n2 0 WALL\n");
    EXPECT_THROW(load_mesh(in), MeshError);
}

TEST(Mesh, RejectsMissingBoundaryTag) {
    std::istringstream in("vertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 2\nboundary 2\n0 1 WALL\n1 2 WALL\n");
    EXPECT_THROW(load_mesh(in), MeshError);
}

TEST(Mesh, RejectsUnknownTag) {
    std::istringstream in("vertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 2\nboundary 3\n0 1 WALL\n1 2 ROOF\n2 0 WALL\n");
    EXPECT_THROW(load_mesh(in), MeshError);
}

TEST(Mesh, WriteLoadRoundTrip) {
    const TriMesh a = generate_structured_mesh({preset_tc3().geometry, 0.1, 0.05});
    std::stringstream s;
    write_mesh(s, a);
    const TriMesh b = load_mesh(s);
    ASSERT_EQ(a.num_triangles(), b.num_triangles());
    ASSERT_EQ(a.num_faces(), b.num_faces());
    EXPECT_EQ(a.count_tag(FaceTag::interface), b.count_tag(FaceTag::interface));
    std::size_t left_a = 0, left_b = 0;
    for (const auto& f : a.faces()) left_a += f.bottom_part == BottomPart::left;
    for (const auto& f : b.faces()) left_b += f.bottom_part == BottomPart::left;
    EXPECT_EQ(left_a, left_b);
    EXPECT_GT(left_a, 0u);
}

TEST(MeshGenerator, UnitSquareHalfSpacing) {
    DomainGeometry g = fixtures::box(1.0, 1.0);
    const TriMesh m = generate_structured_mesh({g, 0.5, 0.0});
    EXPECT_EQ(m.num_triangles(), 8u);
}

TEST(MeshGenerator, RefinementQuadruplesTriangles) {
    const DomainGeometry g = fixtures::box(2.0, 1.0);
    const auto coarse = generate_structured_mesh({g, 0.25, 0.0}).num_triangles();
    const auto fine = generate_structured_mesh({g, 0.125, 0.0}).num_triangles();
    EXPECT_EQ(fine, 4 * coarse);
}

TEST(MeshGenerator, Tc2PresetCountNearReference) {
    const ScenarioConfig c = preset_tc2();
    const auto n = generate_structured_mesh({c.geometry, c.mesh_h, c.surface_band}).num_triangles();
    EXPECT_GE(n, 1600u);
    EXPECT_LE(n, 2600u);
}

TEST(MeshGenerator, AreaSumsToDomain) {
    const ScenarioConfig c = preset_tc1();
    const TriMesh m = generate_structured_mesh({c.geometry, 0.1, 0.05});
    double area = 0.0;
    for (std::size_t t = 0; t < m.num_triangles(); ++t) area += m.area(t);
    // Trapezoid rule is exact for the piecewise linear top.
    double exact = 0.0;
    const auto& top = c.geometry.top;
    for (std::size_t k = 0; k + 1 < top.size(); ++k) {
        exact += (top[k + 1].x - top[k].x) * 0.5 * (top[k].z + top[k + 1].z - 2.0 * c.geometry.bottom_z);
    }
    EXPECT_NEAR(area, exact, 1e-12 * exact);
}

TEST(Boundary, Tc3BottomSplit) {
    const ScenarioConfig c = preset_tc3();
    const TriMesh m = generate_structured_mesh({c.geometry, 0.1, 0.05});
    for (const Face& f : m.faces()) {
        if (f.tag != FaceTag::bottom) continue;
        const double xm = 0.5 * (m.vertices()[f.vertices[0]].x + m.vertices()[f.vertices[1]].x);
        EXPECT_EQ(f.bottom_part, xm < 1.0 ? BottomPart::left : BottomPart::right);
    }
}

TEST(Boundary, ClassifyRetagsByGeometry) {
    DomainGeometry g = fixtures::box(6.0, 1.0, 0.03);
    const TriMesh m = generate_structured_mesh({g, 0.5, 0.0});
    // Strip tags, then classify again.
    std::vector<std::pair<FaceTag, BottomPart>> tags(m.num_faces(), {FaceTag::wall, BottomPart::none});
    for (std::size_t i = 0; i < m.num_faces(); ++i) {
        if (!m.faces()[i].is_boundary()) tags[i] = {FaceTag::interior, BottomPart::none};
    }
    const TriMesh reset = m.with_tags(tags);
    const TriMesh c = classify_boundary(reset, g);
    for (std::size_t i = 0; i < m.num_faces(); ++i) EXPECT_EQ(c.faces()[i].tag, m.faces()[i].tag);
}

TEST(InterfaceGrid, SingleSlopedFace) {
    std::istringstream in("vertices 3\n0 0.001\n1 0\n0 -1\ntriangles 1\n2 1 0\nboundary 3\n2 1 WALL\n1 0 INTERFACE\n0 2 WALL\n");
    const InterfaceGrid g = extract_interface_grid(load_mesh(in));
    ASSERT_EQ(g.size(), 1u);
    EXPECT_NEAR(g[0].length, std::sqrt(1.0 + 1e-6), 1e-15);
    EXPECT_NEAR(g[0].length, 1.0000005, 1e-9);
    EXPECT_NEAR(g[0].slope, 0.001, 1e-15);
}

TEST(InterfaceGrid, HorizontalFaceRejected) {
    EXPECT_THROW(extract_interface_grid(fixtures::unit_square_pair()), MeshError);
}

TEST(InterfaceGrid, Tc1SlopeGroups) {
    const ScenarioConfig c = preset_tc1();
    const InterfaceGrid g = extract_interface_grid(generate_structured_mesh({c.geometry, c.mesh_h, c.surface_band}));
    for (const auto& cell : g) {
        const double x = cell.center.x;
        const double expected = x > 1.4 && x < 1.6 ? 0.003 : 0.001;
        EXPECT_NEAR(cell.slope, expected, 1e-9) << "x = " << x;
    }
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_EQ(g[i - 1].vertex_right, g[i].vertex_left);
    EXPECT_NEAR(g.cells().front().x_left, 0.0, 1e-14);
    EXPECT_NEAR(g.cells().back().x_right, 3.0, 1e-14);
}
