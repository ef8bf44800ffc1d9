#include "aaomg/mesh.hpp"

#include "aaomg/error.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace aaomg {

namespace {

bool on_boundary(int i, int j, int n)
{
  return i == 0 || j == 0 || i == n || j == n;
}

} // namespace

MeshLevel::MeshLevel(int level) : level_(level)
{
  if (level < 0 || level > max_mesh_level)
    throw InvalidArgument("mesh level " + std::to_string(level) +
                          " outside [0, " + std::to_string(max_mesh_level) +
                          "]");
  n_ = 1 << level;
  auto const n = n_;
  double const h = 1.0 / n;

  vertices_.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  boundary_vertex_.reserve(vertices_.capacity());
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      vertices_.push_back({i * h, j * h});
      boundary_vertex_.push_back(on_boundary(i, j, n));
    }

  // Edges owned by their smaller endpoint: horizontal, vertical, diagonal.
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      auto const v = vertex_at(i, j);
      if (i < n) {
        edges_.push_back({v, vertex_at(i + 1, j)});
        boundary_edge_.push_back(j == 0 || j == n);
      }
      if (j < n) {
        edges_.push_back({v, vertex_at(i, j + 1)});
        boundary_edge_.push_back(i == 0 || i == n);
      }
      if (i < n && j < n) {
        edges_.push_back({v, vertex_at(i + 1, j + 1)});
        boundary_edge_.push_back(false);
      }
    }

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      auto const v00 = vertex_at(i, j);
      auto const v10 = vertex_at(i + 1, j);
      auto const v01 = vertex_at(i, j + 1);
      auto const v11 = vertex_at(i + 1, j + 1);
      triangles_.push_back({v00, v10, v11});
      triangles_.push_back({v00, v11, v01});
    }

  triangle_edges_.reserve(triangles_.size());
  for (auto const &t : triangles_)
    triangle_edges_.push_back(
        {edge_index(t[1], t[2]), edge_index(t[2], t[0]), edge_index(t[0], t[1])});
}

Index MeshLevel::edge_index(Index a, Index b) const
{
  if (a > b)
    std::swap(a, b);
  auto const n = n_;
  auto const i = a % (n + 1);
  auto const j = a / (n + 1);
  // Edges owned by vertices before (i, j): every vertex owns one edge per
  // existing direction.
  Index const full_rows = j;
  Index offset = full_rows * (n + (n + 1) + n);
  if (j == n)
    offset = n * (3 * n + 1);
  offset += (j < n) ? i * 3 : i;
  Index k = offset;
  if (i < n) {
    if (b == vertex_at(i + 1, j))
      return k;
    ++k;
  }
  if (j < n) {
    if (b == vertex_at(i, j + 1))
      return k;
    ++k;
  }
  if (i < n && j < n && b == vertex_at(i + 1, j + 1))
    return k;
  return -1;
}

std::vector<std::vector<Index>> MeshLevel::vertex_edges() const
{
  std::vector<std::vector<Index>> incident(vertices_.size());
  for (Index e = 0; e < edge_count(); ++e) {
    incident[edges_[e][0]].push_back(e);
    incident[edges_[e][1]].push_back(e);
  }
  return incident;
}

Point MeshLevel::midpoint(Index edge) const
{
  auto const &a = vertices_[edges_[edge][0]];
  auto const &b = vertices_[edges_[edge][1]];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

double MeshLevel::signed_area(Index triangle) const
{
  auto const &t = triangles_[triangle];
  auto const &a = vertices_[t[0]];
  auto const &b = vertices_[t[1]];
  auto const &c = vertices_[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

MeshLevel const &MeshHierarchy::level(int k) const
{
  if (k < k_min() || k > k_max())
    throw InvalidArgument("level " + std::to_string(k) + " not in hierarchy");
  return levels_[static_cast<std::size_t>(k - k_min_)];
}

std::vector<VertexParent> const &MeshHierarchy::parents(int k) const
{
  if (k <= k_min() || k > k_max())
    throw InvalidArgument("no parent map for level " + std::to_string(k));
  return parents_[static_cast<std::size_t>(k - k_min_ - 1)];
}

std::vector<VertexParent> vertex_parents(MeshLevel const &coarse,
                                         MeshLevel const &fine)
{
  if (fine.level() != coarse.level() + 1)
    throw InvalidArgument("meshes are not parent and child");
  auto const nf = fine.cells_per_side();
  std::vector<VertexParent> parents;
  parents.reserve(static_cast<std::size_t>(fine.vertex_count()));
  for (int j = 0; j <= nf; ++j)
    for (int i = 0; i <= nf; ++i) {
      if (i % 2 == 0 && j % 2 == 0) {
        parents.push_back({VertexParent::Kind::Vertex,
                           coarse.vertex_at(i / 2, j / 2)});
        continue;
      }
      auto const a = coarse.vertex_at(i / 2, j / 2);
      auto const b = coarse.vertex_at((i + 1) / 2, (j + 1) / 2);
      auto const e = coarse.edge_index(a, b);
      if (e < 0)
        throw InvalidArgument("fine vertex is neither coarse vertex nor "
                              "coarse edge midpoint");
      parents.push_back({VertexParent::Kind::EdgeMidpoint, e});
    }
  return parents;
}

MeshHierarchy build_hierarchy(int k_min, int k_max)
{
  if (k_min < 0 || k_min > k_max)
    throw InvalidArgument("need 0 <= k_min <= k_max");
  if (k_max > max_mesh_level)
    throw InvalidArgument("k_max " + std::to_string(k_max) +
                          " exceeds the memory budget (max " +
                          std::to_string(max_mesh_level) + ")");
  MeshHierarchy h;
  h.k_min_ = k_min;
  for (int k = k_min; k <= k_max; ++k) {
    h.levels_.emplace_back(k);
    if (k > k_min)
      h.parents_.push_back(
          vertex_parents(h.levels_[h.levels_.size() - 2], h.levels_.back()));
  }
  return h;
}

namespace {

DofMap finish_dofs(DofMap map)
{
  map.free_index.assign(static_cast<std::size_t>(map.count), 0);
  for (auto d : map.dirichlet)
    map.free_index[d] = -1;
  for (Index d = 0; d < map.count; ++d)
    if (map.free_index[d] == 0) {
      map.free_index[d] = static_cast<Index>(map.free_dofs.size());
      map.free_dofs.push_back(d);
    }
  return map;
}

} // namespace

DofMap p1_dofs(MeshLevel const &mesh)
{
  DofMap map;
  map.kind = ElementKind::P1;
  map.count = mesh.vertex_count();
  return finish_dofs(std::move(map));
}

DofMap p2_dofs(MeshLevel const &mesh)
{
  DofMap map;
  map.kind = ElementKind::P2;
  map.count = mesh.vertex_count() + mesh.edge_count();
  for (Index v = 0; v < mesh.vertex_count(); ++v)
    if (mesh.boundary_vertices()[v])
      map.dirichlet.push_back(v);
  for (Index e = 0; e < mesh.edge_count(); ++e)
    if (mesh.boundary_edges()[e])
      map.dirichlet.push_back(mesh.vertex_count() + e);
  return finish_dofs(std::move(map));
}

Point dof_location(MeshLevel const &mesh, ElementKind kind, Index dof)
{
  if (dof < mesh.vertex_count())
    return mesh.vertices()[dof];
  if (kind == ElementKind::P1 || dof >= mesh.vertex_count() + mesh.edge_count())
    throw InvalidArgument("dof index out of range");
  return mesh.midpoint(dof - mesh.vertex_count());
}

void write_mesh(std::ostream &os, MeshLevel const &mesh)
{
  os << "# level " << mesh.level() << "\n";
  os << "vertices " << mesh.vertex_count() << "\n" << std::setprecision(17);
  for (auto const &p : mesh.vertices())
    os << p.x << ' ' << p.y << '\n';
  os << "triangles " << mesh.triangle_count() << "\n";
  for (auto const &t : mesh.triangles())
    os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

} // namespace aaomg
