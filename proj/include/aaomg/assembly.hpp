#ifndef AAOMG_ASSEMBLY_HPP
#define AAOMG_ASSEMBLY_HPP

#include "aaomg/mesh.hpp"
#include "aaomg/sparse.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace aaomg {

enum class Problem { PoissonControl, StokesControl };

char const *to_string(Problem p);

struct Field
{
  std::string name;
  Index offset = 0;
  Index size = 0;
  ElementKind kind = ElementKind::P1;
};

/// Ordered block layout of the all-at-once unknown vector.
struct FieldLayout
{
  std::vector<Field> fields;
  Index size = 0;

  void add(std::string name, Index size, ElementKind kind);
  Field const &field(std::string const &name) const;
};

/// One grid level of an optimal control problem in all-at-once form.
///
/// `matrix` is the symmetric indefinite system, `norm_diag` the diagonal
/// norm matrix L used by the smoothers and the stopping criterion. The scalar
/// operators are kept so the dense analysis code can rebuild the block norm
/// matrix Q. For Stokes `mass` and `stiffness` act on one velocity component
/// and `divergence` maps both components to pressures.
struct BlockSystem
{
  Problem problem = Problem::PoissonControl;
  int level = 0;
  double alpha = 1.0;
  FieldLayout layout;
  SparseMatrix matrix;
  Vector norm_diag;

  SparseMatrix mass;
  SparseMatrix stiffness;
  SparseMatrix divergence;
  /// Integrals of the pressure basis functions (Stokes only).
  Vector pressure_weights;

  Index size() const { return layout.size; }
  /// Fields whose constants span the kernel of `matrix`.
  std::vector<std::string> nullspace_fields() const;
};

struct P1Matrices
{
  SparseMatrix mass;
  /// Discretization of -Laplace + I with natural boundary conditions.
  SparseMatrix stiffness;
};

struct TaylorHoodMatrices
{
  DofMap velocity_dofs;
  DofMap pressure_dofs;
  /// Scalar P2 mass on free velocity dofs.
  SparseMatrix mass;
  /// Scalar P2 Laplace stiffness on free velocity dofs.
  SparseMatrix stiffness;
  /// D_{q,j} = -int q div(phi_j), pressures x (2 * free velocity dofs),
  /// x-component columns first.
  SparseMatrix divergence;
  /// int phi_q for each P1 pressure basis function.
  Vector pressure_weights;
};

/// Poisson: [y, lambda] on P1. Stokes: [v (both components), p, lambda, mu]
/// with Dirichlet velocity dofs eliminated.
FieldLayout make_layout(Problem problem, MeshLevel const &mesh);

using LocalMatrix3 = std::array<std::array<double, 3>, 3>;

LocalMatrix3 p1_local_mass(std::array<Point, 3> const &tri);
LocalMatrix3 p1_local_laplace(std::array<Point, 3> const &tri);

P1Matrices assemble_p1(MeshLevel const &mesh);
TaylorHoodMatrices assemble_taylor_hood(MeshLevel const &mesh);

BlockSystem build_poisson_system(MeshLevel const &mesh, double alpha);
/// Requires mesh level >= 1 (level 0 has no interior velocity dofs).
BlockSystem build_stokes_system(MeshLevel const &mesh, double alpha);
BlockSystem build_system(Problem problem, MeshLevel const &mesh, double alpha);

/// Control from the multiplier: u = lambda / alpha.
Vector recover_control(BlockSystem const &system, std::span<const double> x);

/// Values of the six P2 shape functions (three vertex, then three edge
/// functions with edge e opposite vertex e) at barycentric coordinates.
std::array<double, 6> p2_shape_values(std::array<double, 3> const &bary);

} // namespace aaomg

#endif
