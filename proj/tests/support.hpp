// Small meshes shared by the unit tests.
#pragma once

#include <coupledflow/mesh.hpp>
#include <coupledflow/mesh_generator.hpp>

#include <sstream>

namespace cflow::fixtures {

/// Unit square cut along the (0,0)-(1,1) diagonal; top is the interface.
inline TriMesh unit_square_pair() {
    std::istringstream in(R"(vertices 4
0 0
1 0
1 1
0 1
triangles 2
0 1 2
0 2 3
boundary 4
0 1 BOTTOM
1 2 WALL
2 3 INTERFACE
3 0 WALL
)");
    return load_mesh(in);
}

inline TriMesh single_triangle() {
    std::istringstream in(R"(vertices 3
0 0
1 0
0 1
triangles 1
0 1 2
boundary 3
0 1 BOTTOM
1 2 INTERFACE
2 0 WALL
)");
    return load_mesh(in);
}

inline DomainGeometry box(double width, double height, double drop = 0.0) {
    DomainGeometry g;
    g.top = {{0.0, height + drop}, {width, height}};
    g.bottom_z = 0.0;
    return g;
}

}  // namespace cflow::fixtures
