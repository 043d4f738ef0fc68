/**
 * @file richards_dg.hpp
 * @brief Symmetric interior penalty DG discretization of Richards' equation
 *        with piecewise affine, elementwise supported Lagrange bases.
 *
 * Unknowns are the hydraulic head values at the three vertices of every
 * triangle (DOF 3t + k). For a linearization point zeta the spatial operator
 * splits into a bilinear part A(zeta) (stiffness, consistency and penalty
 * terms with K frozen at zeta) and a load b(zeta) (gravity and boundary data):
 *
 *   S(psi) = A(psi) psi - b(psi).
 *
 * Gravity is written in flux form, -int K grad z . grad phi plus face terms,
 * with the face average {K} on interior faces. On Neumann faces the gravity
 * face term cancels the K grad z . n part of the boundary datum, so that only
 * the prescribed normal velocity remains. Taking phi = 1 on every element
 * then telescopes all interior contributions, and the discrete volume balance
 * closes exactly with the reconstructed interface velocity.
 */
#pragma once

#include "constitutive.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cflow {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
/// Values of a face function at the two Gauss points of the face.
using FaceValues = std::array<double, 2>;

class AssemblyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BoundaryKind { none, dirichlet, neumann };

struct FaceCondition {
    BoundaryKind kind = BoundaryKind::none;
    /// Dirichlet head (m) or prescribed normal velocity v . n (m/s).
    FaceValues value{0.0, 0.0};
};

/// Boundary conditions for one Richards solve, indexed by mesh face.
struct BoundaryData {
    std::vector<FaceCondition> faces;
    double eta = 10.0;

    /// Zero-flux Neumann condition on every boundary face.
    static BoundaryData no_flux(const TriMesh& mesh, double eta = 10.0) {
        BoundaryData bc;
        bc.eta = eta;
        bc.faces.resize(mesh.num_faces());
        for (std::size_t i = 0; i < mesh.num_faces(); ++i) {
            if (mesh.faces()[i].is_boundary()) bc.faces[i].kind = BoundaryKind::neumann;
        }
        return bc;
    }

    void set_dirichlet(int face, FaceValues head) { faces[face] = {BoundaryKind::dirichlet, head}; }
    void set_neumann(int face, FaceValues flux) { faces[face] = {BoundaryKind::neumann, flux}; }
};

// ---------------------------------------------------------------------------

/// Broken P1 space on a triangulation. Holds a reference to the mesh.
class DgSpace {
public:
    static constexpr int degree = 1;
    static constexpr int dofs_per_element = 3;

    explicit DgSpace(const TriMesh& mesh) : mesh_(&mesh) {
        gradients_.resize(mesh.num_triangles());
        for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
            const Point p0 = mesh.vertex(t, 0);
            const Point p1 = mesh.vertex(t, 1);
            const Point p2 = mesh.vertex(t, 2);
            const double inv = 1.0 / (2.0 * mesh.area(t));
            gradients_[t] = {Point{(p1.z - p2.z) * inv, (p2.x - p1.x) * inv},
                             Point{(p2.z - p0.z) * inv, (p0.x - p2.x) * inv},
                             Point{(p0.z - p1.z) * inv, (p1.x - p0.x) * inv}};
        }
    }

    const TriMesh& mesh() const { return *mesh_; }
    std::size_t num_dofs() const { return 3 * mesh_->num_triangles(); }
    static int dof(std::size_t t, int k) { return static_cast<int>(3 * t) + k; }

    const std::array<Point, 3>& basis_gradients(std::size_t t) const { return gradients_[t]; }

    Point gradient(const Vector& psi, std::size_t t) const {
        const auto& g = gradients_[t];
        Point out{0.0, 0.0};
        for (int k = 0; k < 3; ++k) out = out + psi[dof(t, k)] * g[k];
        return out;
    }

    double value(const Vector& psi, std::size_t t, const std::array<double, 3>& bary) const {
        return bary[0] * psi[dof(t, 0)] + bary[1] * psi[dof(t, 1)] + bary[2] * psi[dof(t, 2)];
    }

    Point point(std::size_t t, const std::array<double, 3>& bary) const {
        return bary[0] * mesh_->vertex(t, 0) + bary[1] * mesh_->vertex(t, 1) +
               bary[2] * mesh_->vertex(t, 2);
    }

    /// Barycentric coordinates, in owner `side`, of Gauss point g of a face.
    std::array<double, 3> face_barycentric(int face, int side, int g) const {
        const Face& f = mesh_->faces()[face];
        const double s = quadrature::Gauss2::points[g];
        const int k = f.local_edge[side];
        std::array<double, 3> bary{0.0, 0.0, 0.0};
        // Side 0 traverses the edge a -> b, side 1 traverses it b -> a.
        bary[k] = side == 0 ? 1.0 - s : s;
        bary[(k + 1) % 3] = side == 0 ? s : 1.0 - s;
        return bary;
    }

    Point face_point(int face, int g) const {
        const Face& f = mesh_->faces()[face];
        const double s = quadrature::Gauss2::points[g];
        const Point a = mesh_->vertices()[f.vertices[0]];
        const Point b = mesh_->vertices()[f.vertices[1]];
        return a + s * (b - a);
    }

    double trace(const Vector& psi, int face, int side, int g) const {
        const Face& f = mesh_->faces()[face];
        return value(psi, f.owners[side], face_barycentric(face, side, g));
    }

    /// Mean value over a face of the trace from owners[0].
    double face_mean(const Vector& psi, int face) const {
        return 0.5 * (trace(psi, face, 0, 0) + trace(psi, face, 0, 1));
    }

    /// Nodal interpolant of a function of (x, z).
    Vector interpolate(const std::function<double(Point)>& fn) const {
        Vector out(num_dofs());
        for (std::size_t t = 0; t < mesh_->num_triangles(); ++t) {
            for (int k = 0; k < 3; ++k) out[dof(t, k)] = fn(mesh_->vertex(t, k));
        }
        return out;
    }

private:
    const TriMesh* mesh_;
    std::vector<std::array<Point, 3>> gradients_;
};

// ---------------------------------------------------------------------------

namespace detail {

inline double penalty(const HaverkampSoil& soil, const Face& f, double eta) {
    return eta * soil.K_s / f.diameter;
}

inline void check_boundary(const TriMesh& mesh, const BoundaryData& bc) {
    if (bc.faces.size() != mesh.num_faces()) {
        throw AssemblyError("boundary data size does not match face count");
    }
    for (std::size_t i = 0; i < mesh.num_faces(); ++i) {
        if (mesh.faces()[i].is_boundary() && bc.faces[i].kind == BoundaryKind::none) {
            throw AssemblyError("unclassified boundary face " + std::to_string(i));
        }
    }
}

/// Single pass over elements and faces computing, at linearization point
/// zeta, the spatial residual S(zeta) = A(zeta) zeta - b(zeta), the water
/// accumulation int theta(zeta) phi and, optionally, the triplets of
/// time_coeff * D(zeta) + op_weight * A(zeta).
class Assembler {
public:
    Assembler(const DgSpace& space, const HaverkampSoil& soil, const BoundaryData& bc)
        : space_(space), soil_(soil), bc_(bc) {
        check_boundary(space.mesh(), bc);
    }

    struct Output {
        Vector spatial;       ///< S(zeta)
        Vector accumulation;  ///< int theta(zeta) phi
        std::vector<Eigen::Triplet<double>> triplets;
    };

    Output run(const Vector& zeta, bool with_matrix, double time_coeff, double op_weight) const {
        const TriMesh& mesh = space_.mesh();
        Output out;
        out.spatial = Vector::Zero(space_.num_dofs());
        out.accumulation = Vector::Zero(space_.num_dofs());
        if (with_matrix) {
            out.triplets.reserve(9 * mesh.num_triangles() + 36 * mesh.num_faces());
        }

        for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
            const auto& grad = space_.basis_gradients(t);
            const double area = mesh.area(t);
            double stiff[3][3] = {};
            double mass[3][3] = {};
            double load[3] = {};
            for (int q = 0; q < quadrature::Triangle3::size; ++q) {
                const auto& bary = quadrature::Triangle3::points[q];
                const double w = quadrature::Triangle3::weights[q] * area;
                const double z = space_.value(zeta, t, bary);
                const double k = conductivity(soil_, z);
                const double c = moisture_capacity(soil_, z);
                const double th = water_content(soil_, z);
                for (int i = 0; i < 3; ++i) {
                    out.accumulation[DgSpace::dof(t, i)] += w * th * bary[i];
                    load[i] -= w * k * grad[i].z;
                    for (int j = 0; j < 3; ++j) {
                        stiff[i][j] += w * k * dot(grad[i], grad[j]);
                        mass[i][j] += w * c * bary[i] * bary[j];
                    }
                }
            }
            for (int i = 0; i < 3; ++i) {
                double s = -load[i];
                for (int j = 0; j < 3; ++j) s += stiff[i][j] * zeta[DgSpace::dof(t, j)];
                out.spatial[DgSpace::dof(t, i)] += s;
                if (with_matrix) {
                    for (int j = 0; j < 3; ++j) {
                        out.triplets.emplace_back(DgSpace::dof(t, i), DgSpace::dof(t, j),
                                                  time_coeff * mass[i][j] + op_weight * stiff[i][j]);
                    }
                }
            }
        }

        for (std::size_t fi = 0; fi < mesh.num_faces(); ++fi) {
            const Face& f = mesh.faces()[fi];
            const int face = static_cast<int>(fi);
            if (!f.is_boundary()) {
                interior_face(face, zeta, with_matrix, op_weight, out);
            } else {
                boundary_face(face, zeta, with_matrix, op_weight, out);
            }
        }
        for (int i = 0; i < out.spatial.size(); ++i) {
            if (!std::isfinite(out.spatial[i])) {
                throw AssemblyError("non-finite residual at element " + std::to_string(i / 3));
            }
        }
        return out;
    }

private:
    void interior_face(int face, const Vector& zeta, bool with_matrix, double op_weight,
                       Output& out) const {
        const Face& f = space_.mesh().faces()[face];
        const double sigma = penalty(soil_, f, bc_.eta);
        std::array<int, 6> dofs{};
        for (int side = 0; side < 2; ++side) {
            for (int k = 0; k < 3; ++k) dofs[3 * side + k] = DgSpace::dof(f.owners[side], k);
        }
        double local[6][6] = {};
        double load[6] = {};
        for (int g = 0; g < quadrature::Gauss2::size; ++g) {
            const double w = quadrature::Gauss2::weights[g] * f.length;
            std::array<double, 6> jump{};  // coefficient of phi_d in [phi]
            std::array<double, 6> flux{};  // coefficient of phi_d in {K grad phi} . n_F
            double k_side[2];
            for (int side = 0; side < 2; ++side) {
                const int t = f.owners[side];
                const auto bary = space_.face_barycentric(face, side, g);
                k_side[side] = conductivity(soil_, space_.value(zeta, t, bary));
                const auto& grad = space_.basis_gradients(t);
                const double sign = side == 0 ? 1.0 : -1.0;
                for (int k = 0; k < 3; ++k) {
                    jump[3 * side + k] = sign * bary[k];
                    flux[3 * side + k] = 0.5 * k_side[side] * dot(grad[k], f.normal);
                }
            }
            const double k_avg = 0.5 * (k_side[0] + k_side[1]);
            for (int d = 0; d < 6; ++d) {
                load[d] += w * k_avg * f.normal.z * jump[d];
                for (int e = 0; e < 6; ++e) {
                    local[d][e] += w * (-flux[e] * jump[d] - flux[d] * jump[e] + sigma * jump[d] * jump[e]);
                }
            }
        }
        scatter(dofs, local, load, zeta, with_matrix, op_weight, out);
    }

    void boundary_face(int face, const Vector& zeta, bool with_matrix, double op_weight,
                       Output& out) const {
        const Face& f = space_.mesh().faces()[face];
        const FaceCondition& cond = bc_.faces[face];
        const int t = f.owners[0];
        std::array<int, 3> dofs{DgSpace::dof(t, 0), DgSpace::dof(t, 1), DgSpace::dof(t, 2)};
        double local[3][3] = {};
        double load[3] = {};
        const auto& grad = space_.basis_gradients(t);
        const double sigma = penalty(soil_, f, bc_.eta);
        for (int g = 0; g < quadrature::Gauss2::size; ++g) {
            const double w = quadrature::Gauss2::weights[g] * f.length;
            const auto bary = space_.face_barycentric(face, 0, g);
            if (cond.kind == BoundaryKind::neumann) {
                for (int d = 0; d < 3; ++d) load[d] -= w * cond.value[g] * bary[d];
                continue;
            }
            const double k = conductivity(soil_, space_.value(zeta, t, bary));
            const double omega = cond.value[g];
            std::array<double, 3> flux{};
            for (int d = 0; d < 3; ++d) flux[d] = k * dot(grad[d], f.normal);
            for (int d = 0; d < 3; ++d) {
                load[d] += w * (-flux[d] * omega + sigma * bary[d] * omega + k * f.normal.z * bary[d]);
                for (int e = 0; e < 3; ++e) {
                    local[d][e] += w * (-flux[e] * bary[d] - flux[d] * bary[e] + sigma * bary[d] * bary[e]);
                }
            }
        }
        scatter(dofs, local, load, zeta, with_matrix, op_weight, out);
    }

    template <std::size_t N>
    static void scatter(const std::array<int, N>& dofs, const double (&local)[N][N],
                        const double (&load)[N], const Vector& zeta, bool with_matrix,
                        double op_weight, Output& out) {
        for (std::size_t d = 0; d < N; ++d) {
            double s = -load[d];
            for (std::size_t e = 0; e < N; ++e) s += local[d][e] * zeta[dofs[e]];
            out.spatial[dofs[d]] += s;
            if (with_matrix) {
                for (std::size_t e = 0; e < N; ++e) {
                    out.triplets.emplace_back(dofs[d], dofs[e], op_weight * local[d][e]);
                }
            }
        }
    }

    const DgSpace& space_;
    const HaverkampSoil& soil_;
    const BoundaryData& bc_;
};

}  // namespace detail

// ---------------------------------------------------------------------------

struct LinearizedSystem {
    SparseMatrix matrix;
    Vector rhs;
};

/// Spatial residual S(psi) = a_h(psi, psi, .) - b(psi, .) for every basis function.
inline Vector spatial_residual(const DgSpace& space, const HaverkampSoil& soil, const Vector& psi,
                               const BoundaryData& bc) {
    return detail::Assembler(space, soil, bc).run(psi, false, 0.0, 1.0).spatial;
}

/// int_tau theta(psi) phi for every basis function.
inline Vector water_accumulation(const DgSpace& space, const HaverkampSoil& soil,
                                 const Vector& psi) {
    const TriMesh& mesh = space.mesh();
    Vector out = Vector::Zero(space.num_dofs());
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        for (int q = 0; q < quadrature::Triangle3::size; ++q) {
            const auto& bary = quadrature::Triangle3::points[q];
            const double w = quadrature::Triangle3::weights[q] * mesh.area(t);
            const double th = water_content(soil, space.value(psi, t, bary));
            for (int i = 0; i < 3; ++i) out[DgSpace::dof(t, i)] += w * th * bary[i];
        }
    }
    return out;
}

/// int_Omega theta(psi), with the assembly quadrature.
inline double integrate_water_content(const DgSpace& space, const HaverkampSoil& soil,
                                      const Vector& psi) {
    const TriMesh& mesh = space.mesh();
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        double local = 0.0;
        for (int q = 0; q < quadrature::Triangle3::size; ++q) {
            local += quadrature::Triangle3::weights[q] *
                     water_content(soil, space.value(psi, t, quadrature::Triangle3::points[q]));
        }
        total += local * mesh.area(t);
    }
    return total;
}

/// int f phi for a volumetric source f(x, z).
inline Vector source_vector(const DgSpace& space, const std::function<double(Point)>& f) {
    const TriMesh& mesh = space.mesh();
    Vector out = Vector::Zero(space.num_dofs());
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        for (int q = 0; q < quadrature::Triangle3::size; ++q) {
            const auto& bary = quadrature::Triangle3::points[q];
            const double w = quadrature::Triangle3::weights[q] * mesh.area(t);
            const double v = f(space.point(t, bary));
            for (int i = 0; i < 3; ++i) out[DgSpace::dof(t, i)] += w * v * bary[i];
        }
    }
    return out;
}

/// Quasi-Newton system at linearization point zeta:
///
///   (time_coeff D(zeta) + op_weight A(zeta)) dpsi
///       = -(time_coeff Theta(zeta) + op_weight S(zeta) + offset)
///
/// `offset` collects everything independent of the current unknown (BDF
/// history, explicit half of a trapezoidal step, sources with a minus sign).
inline LinearizedSystem assemble_linearized_system(const DgSpace& space, const HaverkampSoil& soil,
                                                   const Vector& zeta, const BoundaryData& bc,
                                                   double time_coeff, double op_weight,
                                                   const Vector& offset) {
    const auto out = detail::Assembler(space, soil, bc).run(zeta, true, time_coeff, op_weight);
    LinearizedSystem sys;
    const auto n = static_cast<Eigen::Index>(space.num_dofs());
    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(out.triplets.begin(), out.triplets.end());
    sys.rhs = -(time_coeff * out.accumulation + op_weight * out.spatial + offset);
    for (Eigen::Index i = 0; i < sys.rhs.size(); ++i) {
        if (!std::isfinite(sys.rhs[i])) {
            throw AssemblyError("non-finite assembly at element " + std::to_string(i / 3));
        }
    }
    return sys;
}

/// A(zeta) alone: the SIPG bilinear form with conductivity frozen at zeta.
inline SparseMatrix assemble_bilinear_form(const DgSpace& space, const HaverkampSoil& soil,
                                           const Vector& zeta, const BoundaryData& bc) {
    const auto out = detail::Assembler(space, soil, bc).run(zeta, true, 0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(space.num_dofs());
    SparseMatrix a(n, n);
    a.setFromTriplets(out.triplets.begin(), out.triplets.end());
    return a;
}

// ---------------------------------------------------------------------------

/// Numerical fluxes on one face at its two Gauss points.
struct NumericalFlux {
    FaceValues psi_hat{0.0, 0.0};
    std::array<Point, 2> u_hat{};
};

/// psi_hat and u_hat for u = -K grad psi. On Dirichlet faces psi_hat is zero
/// and the datum enters through the load; on Neumann faces u_hat is zero.
inline NumericalFlux sipg_interface_fluxes(const DgSpace& space, const HaverkampSoil& soil,
                                           const Vector& zeta, const Vector& psi,
                                           const BoundaryData& bc, int face) {
    const Face& f = space.mesh().faces()[face];
    NumericalFlux out;
    const double sigma = detail::penalty(soil, f, bc.eta);
    if (!f.is_boundary()) {
        const Point g0 = space.gradient(psi, f.owners[0]);
        const Point g1 = space.gradient(psi, f.owners[1]);
        for (int g = 0; g < 2; ++g) {
            const auto b0 = space.face_barycentric(face, 0, g);
            const auto b1 = space.face_barycentric(face, 1, g);
            const double p0 = space.value(psi, f.owners[0], b0);
            const double p1 = space.value(psi, f.owners[1], b1);
            const double k0 = conductivity(soil, space.value(zeta, f.owners[0], b0));
            const double k1 = conductivity(soil, space.value(zeta, f.owners[1], b1));
            out.psi_hat[g] = 0.5 * (p0 + p1);
            out.u_hat[g] = -0.5 * (k0 * g0 + k1 * g1) + (sigma * (p0 - p1)) * f.normal;
        }
        return out;
    }
    const auto kind = bc.faces.at(face).kind;
    if (kind == BoundaryKind::none) throw AssemblyError("unclassified face " + std::to_string(face));
    const Point grad = space.gradient(psi, f.owners[0]);
    for (int g = 0; g < 2; ++g) {
        const auto bary = space.face_barycentric(face, 0, g);
        const double p = space.value(psi, f.owners[0], bary);
        if (kind == BoundaryKind::dirichlet) {
            const double k = conductivity(soil, space.value(zeta, f.owners[0], bary));
            out.psi_hat[g] = 0.0;
            out.u_hat[g] = -k * grad + (sigma * p) * f.normal;
        } else {
            out.psi_hat[g] = p;
            out.u_hat[g] = Point{0.0, 0.0};
        }
    }
    return out;
}

/// Normal velocity on a boundary face: the prescribed value on Neumann faces,
/// v(psi) . n + sigma (psi - omega_psi) on Dirichlet faces.
inline FaceValues face_normal_velocity(const DgSpace& space, const HaverkampSoil& soil,
                                       const Vector& psi, const BoundaryData& bc, int face) {
    const FaceCondition& cond = bc.faces.at(face);
    if (cond.kind == BoundaryKind::neumann) return cond.value;
    if (cond.kind != BoundaryKind::dirichlet) {
        throw AssemblyError("normal velocity requested on unclassified face " + std::to_string(face));
    }
    const Face& f = space.mesh().faces()[face];
    const int t = f.owners[0];
    const Point grad = space.gradient(psi, t);
    const double sigma = detail::penalty(soil, f, bc.eta);
    FaceValues out{};
    for (int g = 0; g < 2; ++g) {
        const auto bary = space.face_barycentric(face, 0, g);
        const double p = space.value(psi, t, bary);
        const double k = conductivity(soil, p);
        const double darcy = -k * (grad.x * f.normal.x + (grad.z + 1.0) * f.normal.z);
        out[g] = darcy + sigma * (p - cond.value[g]);
    }
    return out;
}

/// Interface normal velocity on the listed faces (typically the interface grid).
inline std::vector<FaceValues> reconstruct_interface_velocity(const DgSpace& space,
                                                              const HaverkampSoil& soil,
                                                              const Vector& psi,
                                                              const BoundaryData& bc,
                                                              const std::vector<int>& faces) {
    std::vector<FaceValues> out;
    out.reserve(faces.size());
    for (int face : faces) out.push_back(face_normal_velocity(space, soil, psi, bc, face));
    return out;
}

/// Integral over a face of a function known at its Gauss points.
inline double integrate_face(const FaceValues& v, double length) {
    return length * (quadrature::Gauss2::weights[0] * v[0] + quadrature::Gauss2::weights[1] * v[1]);
}

// ---------------------------------------------------------------------------

/// Energy norm squared used in the coercivity statement, with K = K(phi).
inline double sipg_energy(const DgSpace& space, const HaverkampSoil& soil, const Vector& phi,
                          const BoundaryData& bc) {
    const TriMesh& mesh = space.mesh();
    double e = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Point g = space.gradient(phi, t);
        double kq = 0.0;
        for (int q = 0; q < quadrature::Triangle3::size; ++q) {
            kq += quadrature::Triangle3::weights[q] *
                  conductivity(soil, space.value(phi, t, quadrature::Triangle3::points[q]));
        }
        e += kq * mesh.area(t) * dot(g, g);
    }
    for (std::size_t fi = 0; fi < mesh.num_faces(); ++fi) {
        const Face& f = mesh.faces()[fi];
        const int face = static_cast<int>(fi);
        const bool wet = f.is_boundary() && bc.faces[fi].kind == BoundaryKind::dirichlet;
        if (f.is_boundary() && !wet) continue;
        double s = 0.0;
        for (int g = 0; g < 2; ++g) {
            double v = space.trace(phi, face, 0, g);
            if (!f.is_boundary()) v -= space.trace(phi, face, 1, g);
            s += quadrature::Gauss2::weights[g] * v * v;
        }
        e += soil.K_s / f.diameter * f.length * s;
    }
    return e;
}

/// Smallest observed ratio a_h(phi, phi, phi) / energy(phi) over the samples.
/// A diagnostic for the penalty parameter, not a proof of coercivity.
inline double coercivity_probe(const DgSpace& space, const BoundaryData& bc,
                               const HaverkampSoil& soil, const std::vector<Vector>& samples,
                               double eta) {
    BoundaryData probe = bc;
    probe.eta = eta;
    double ratio = std::numeric_limits<double>::infinity();
    for (const Vector& phi : samples) {
        const SparseMatrix a = assemble_bilinear_form(space, soil, phi, probe);
        const double energy = sipg_energy(space, soil, phi, probe);
        if (energy > 0.0) ratio = std::min(ratio, phi.dot(a * phi) / energy);
    }
    return ratio;
}

/// Random DOF vectors with entries uniform in [lo, hi].
inline std::vector<Vector> random_samples(const DgSpace& space, std::size_t count, unsigned seed,
                                          double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<Vector> out(count, Vector(space.num_dofs()));
    for (auto& v : out) {
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
    }
    return out;
}

// ---------------------------------------------------------------------------

/// Per-element dump: "tri_id psi_0 psi_1 psi_2 theta_mean".
inline void write_field_snapshot(std::ostream& out, const DgSpace& space, const HaverkampSoil& soil,
                                 const Vector& psi) {
    const TriMesh& mesh = space.mesh();
    out.precision(12);
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        double th = 0.0;
        for (int q = 0; q < quadrature::Triangle3::size; ++q) {
            th += quadrature::Triangle3::weights[q] *
                  water_content(soil, space.value(psi, t, quadrature::Triangle3::points[q]));
        }
        out << t << ' ' << psi[DgSpace::dof(t, 0)] << ' ' << psi[DgSpace::dof(t, 1)] << ' '
            << psi[DgSpace::dof(t, 2)] << ' ' << th << '\n';
    }
}

}  // namespace cflow
