#ifndef AAOMG_MESH_HPP
#define AAOMG_MESH_HPP

#include "aaomg/sparse.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace aaomg {

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

/// Uniform triangulation of the unit square with 2^level cells per side.
///
/// Vertices are numbered lexicographically (x fastest). Every cell is split
/// by its lower-left to upper-right diagonal into the triangles
/// (v00, v10, v11) and (v00, v11, v01), both counterclockwise.
class MeshLevel
{
public:
  explicit MeshLevel(int level);

  int level() const { return level_; }
  int cells_per_side() const { return n_; }
  double h() const { return 1.0 / n_; }

  Index vertex_count() const { return static_cast<Index>(vertices_.size()); }
  Index edge_count() const { return static_cast<Index>(edges_.size()); }
  Index triangle_count() const { return static_cast<Index>(triangles_.size()); }

  std::vector<Point> const &vertices() const { return vertices_; }
  std::vector<std::array<Index, 3>> const &triangles() const
  {
    return triangles_;
  }
  /// Vertex pairs, smaller index first.
  std::vector<std::array<Index, 2>> const &edges() const { return edges_; }
  /// Edge opposite to local vertex 0, 1, 2 of each triangle.
  std::vector<std::array<Index, 3>> const &triangle_edges() const
  {
    return triangle_edges_;
  }
  std::vector<bool> const &boundary_vertices() const { return boundary_vertex_; }
  std::vector<bool> const &boundary_edges() const { return boundary_edge_; }

  Index vertex_at(int i, int j) const { return j * (n_ + 1) + i; }
  /// Edge index for an unordered vertex pair; -1 when not an edge.
  Index edge_index(Index a, Index b) const;
  /// Edges incident to each vertex, in increasing edge order.
  std::vector<std::vector<Index>> vertex_edges() const;

  Point midpoint(Index edge) const;
  double signed_area(Index triangle) const;

private:
  int level_;
  int n_;
  std::vector<Point> vertices_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<Index, 3>> triangle_edges_;
  std::vector<bool> boundary_vertex_;
  std::vector<bool> boundary_edge_;
};

/// Where a fine vertex comes from on the next coarser level.
struct VertexParent
{
  enum class Kind { Vertex, EdgeMidpoint };
  Kind kind;
  Index index;
};

class MeshHierarchy
{
public:
  int k_min() const { return k_min_; }
  int k_max() const { return k_min_ + static_cast<int>(levels_.size()) - 1; }
  MeshLevel const &level(int k) const;
  /// Parents of the vertices of level k (k > k_min) on level k - 1.
  std::vector<VertexParent> const &parents(int k) const;

  friend MeshHierarchy build_hierarchy(int k_min, int k_max);

private:
  int k_min_ = 0;
  std::vector<MeshLevel> levels_;
  std::vector<std::vector<VertexParent>> parents_;
};

/// Largest level accepted by build_hierarchy.
inline constexpr int max_mesh_level = 9;

/// Nested hierarchy obtained by uniform red refinement; 0 <= k_min <= k_max <= 9.
MeshHierarchy build_hierarchy(int k_min, int k_max);

/// Classify the vertices of `fine` against `coarse`; throws if the meshes
/// are not parent and child.
std::vector<VertexParent> vertex_parents(MeshLevel const &coarse,
                                         MeshLevel const &fine);

enum class ElementKind { P1, P2 };

/// Scalar degree-of-freedom numbering. P2 dofs are vertices first, then
/// edge midpoints (vertex_count + edge index).
struct DofMap
{
  ElementKind kind = ElementKind::P1;
  Index count = 0;
  std::vector<Index> dirichlet;
  /// Position among the non-Dirichlet dofs, -1 for Dirichlet dofs.
  std::vector<Index> free_index;
  std::vector<Index> free_dofs;

  Index free_count() const { return static_cast<Index>(free_dofs.size()); }
};

/// P1 map without essential boundary conditions.
DofMap p1_dofs(MeshLevel const &mesh);
/// P2 map with all boundary vertices and boundary edge midpoints Dirichlet.
DofMap p2_dofs(MeshLevel const &mesh);

Point dof_location(MeshLevel const &mesh, ElementKind kind, Index dof);

/// Plain-text dump: vertex list followed by triangle list.
void write_mesh(std::ostream &os, MeshLevel const &mesh);

} // namespace aaomg

#endif
