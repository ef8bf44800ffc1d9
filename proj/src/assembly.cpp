#include "aaomg/assembly.hpp"

#include "aaomg/error.hpp"

#include <cmath>

namespace aaomg {

char const *to_string(Problem p)
{
  return p == Problem::PoissonControl ? "poisson" : "stokes";
}

void FieldLayout::add(std::string name, Index field_size, ElementKind kind)
{
  fields.push_back({std::move(name), size, field_size, kind});
  size += field_size;
}

Field const &FieldLayout::field(std::string const &name) const
{
  for (auto const &f : fields)
    if (f.name == name)
      return f;
  throw InvalidArgument("no field named '" + name + "'");
}

std::vector<std::string> BlockSystem::nullspace_fields() const
{
  if (problem == Problem::StokesControl)
    return {"p", "mu"};
  return {};
}

FieldLayout make_layout(Problem problem, MeshLevel const &mesh)
{
  FieldLayout layout;
  if (problem == Problem::PoissonControl) {
    layout.add("y", mesh.vertex_count(), ElementKind::P1);
    layout.add("lambda", mesh.vertex_count(), ElementKind::P1);
    return layout;
  }
  auto const nv = p2_dofs(mesh).free_count();
  auto const np = mesh.vertex_count();
  layout.add("v", 2 * nv, ElementKind::P2);
  layout.add("p", np, ElementKind::P1);
  layout.add("lambda", 2 * nv, ElementKind::P2);
  layout.add("mu", np, ElementKind::P1);
  return layout;
}

namespace {

struct Gradient
{
  double x;
  double y;
};

double twice_area(std::array<Point, 3> const &t)
{
  return (t[1].x - t[0].x) * (t[2].y - t[0].y) -
         (t[2].x - t[0].x) * (t[1].y - t[0].y);
}

std::array<Gradient, 3> barycentric_gradients(std::array<Point, 3> const &t)
{
  double const a2 = twice_area(t);
  std::array<Gradient, 3> g;
  for (int i = 0; i < 3; ++i) {
    auto const &pj = t[(i + 1) % 3];
    auto const &pk = t[(i + 2) % 3];
    g[i] = {(pj.y - pk.y) / a2, (pk.x - pj.x) / a2};
  }
  return g;
}

std::array<Point, 3> corners(MeshLevel const &mesh, Index tri)
{
  auto const &t = mesh.triangles()[tri];
  return {mesh.vertices()[t[0]], mesh.vertices()[t[1]], mesh.vertices()[t[2]]};
}

// Symmetric 6-point rule, exact for polynomials of degree 4.
struct QuadraturePoint
{
  std::array<double, 3> bary;
  double weight; // relative to the triangle area
};

std::array<QuadraturePoint, 6> const &degree4_rule()
{
  static std::array<QuadraturePoint, 6> const rule = [] {
    double const a1 = 0.445948490915964886318329253883;
    double const b1 = 1.0 - 2.0 * a1;
    double const w1 = 0.223381589678011465944736264341;
    double const a2 = 0.091576213509770743459571463402;
    double const b2 = 1.0 - 2.0 * a2;
    double const w2 = 0.109951743655321867385263735659;
    return std::array<QuadraturePoint, 6>{{{{b1, a1, a1}, w1},
                                           {{a1, b1, a1}, w1},
                                           {{a1, a1, b1}, w1},
                                           {{b2, a2, a2}, w2},
                                           {{a2, b2, a2}, w2},
                                           {{a2, a2, b2}, w2}}};
  }();
  return rule;
}

std::array<Gradient, 6> p2_gradients(std::array<double, 3> const &l,
                                     std::array<Gradient, 3> const &g)
{
  std::array<Gradient, 6> out;
  for (int i = 0; i < 3; ++i)
    out[i] = {(4.0 * l[i] - 1.0) * g[i].x, (4.0 * l[i] - 1.0) * g[i].y};
  for (int e = 0; e < 3; ++e) {
    int const j = (e + 1) % 3;
    int const k = (e + 2) % 3;
    out[3 + e] = {4.0 * (l[j] * g[k].x + l[k] * g[j].x),
                  4.0 * (l[j] * g[k].y + l[k] * g[j].y)};
  }
  return out;
}

} // namespace

std::array<double, 6> p2_shape_values(std::array<double, 3> const &l)
{
  std::array<double, 6> v;
  for (int i = 0; i < 3; ++i)
    v[i] = l[i] * (2.0 * l[i] - 1.0);
  for (int e = 0; e < 3; ++e)
    v[3 + e] = 4.0 * l[(e + 1) % 3] * l[(e + 2) % 3];
  return v;
}

LocalMatrix3 p1_local_mass(std::array<Point, 3> const &tri)
{
  double const area = 0.5 * std::abs(twice_area(tri));
  LocalMatrix3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m[i][j] = area * (i == j ? 2.0 : 1.0) / 12.0;
  return m;
}

LocalMatrix3 p1_local_laplace(std::array<Point, 3> const &tri)
{
  double const area = 0.5 * std::abs(twice_area(tri));
  auto const g = barycentric_gradients(tri);
  LocalMatrix3 k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      k[i][j] = area * (g[i].x * g[j].x + g[i].y * g[j].y);
  return k;
}

P1Matrices assemble_p1(MeshLevel const &mesh)
{
  std::vector<Triplet> mass, stiff;
  mass.reserve(9 * static_cast<std::size_t>(mesh.triangle_count()));
  stiff.reserve(mass.capacity() * 2);
  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    auto const tri = corners(mesh, t);
    auto const &idx = mesh.triangles()[t];
    auto const m = p1_local_mass(tri);
    auto const k = p1_local_laplace(tri);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        mass.push_back({idx[i], idx[j], m[i][j]});
        stiff.push_back({idx[i], idx[j], k[i][j]});
        stiff.push_back({idx[i], idx[j], m[i][j]});
      }
  }
  auto const n = mesh.vertex_count();
  return {SparseMatrix::from_triplets(n, n, std::move(mass)).pruned(1e-13),
          SparseMatrix::from_triplets(n, n, std::move(stiff)).pruned(1e-13)};
}

TaylorHoodMatrices assemble_taylor_hood(MeshLevel const &mesh)
{
  TaylorHoodMatrices th;
  th.velocity_dofs = p2_dofs(mesh);
  th.pressure_dofs = p1_dofs(mesh);
  auto const nv = th.velocity_dofs.free_count();
  auto const np = th.pressure_dofs.count;
  auto const nvert = mesh.vertex_count();

  std::vector<Triplet> mass, stiff, div;
  th.pressure_weights.assign(static_cast<std::size_t>(np), 0.0);

  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    auto const tri = corners(mesh, t);
    double const area = 0.5 * std::abs(twice_area(tri));
    auto const g = barycentric_gradients(tri);
    auto const &verts = mesh.triangles()[t];
    auto const &edges = mesh.triangle_edges()[t];

    std::array<Index, 6> local; // free velocity index or -1
    for (int i = 0; i < 3; ++i) {
      local[i] = th.velocity_dofs.free_index[verts[i]];
      local[3 + i] = th.velocity_dofs.free_index[nvert + edges[i]];
    }

    double m[6][6] = {};
    double k[6][6] = {};
    double dx[3][6] = {};
    double dy[3][6] = {};
    for (auto const &qp : degree4_rule()) {
      double const w = qp.weight * area;
      auto const phi = p2_shape_values(qp.bary);
      auto const grad = p2_gradients(qp.bary, g);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
          m[i][j] += w * phi[i] * phi[j];
          k[i][j] += w * (grad[i].x * grad[j].x + grad[i].y * grad[j].y);
        }
      for (int q = 0; q < 3; ++q)
        for (int j = 0; j < 6; ++j) {
          dx[q][j] -= w * qp.bary[q] * grad[j].x;
          dy[q][j] -= w * qp.bary[q] * grad[j].y;
        }
    }

    for (int i = 0; i < 6; ++i) {
      if (local[i] < 0)
        continue;
      for (int j = 0; j < 6; ++j) {
        if (local[j] < 0)
          continue;
        mass.push_back({local[i], local[j], m[i][j]});
        stiff.push_back({local[i], local[j], k[i][j]});
      }
    }
    for (int q = 0; q < 3; ++q) {
      th.pressure_weights[verts[q]] += area / 3.0;
      for (int j = 0; j < 6; ++j) {
        if (local[j] < 0)
          continue;
        div.push_back({verts[q], local[j], dx[q][j]});
        div.push_back({verts[q], nv + local[j], dy[q][j]});
      }
    }
  }

  // Quadrature leaves roundoff where the exact integral vanishes.
  th.mass = SparseMatrix::from_triplets(nv, nv, std::move(mass)).pruned(1e-13);
  th.stiffness =
      SparseMatrix::from_triplets(nv, nv, std::move(stiff)).pruned(1e-13);
  th.divergence =
      SparseMatrix::from_triplets(np, 2 * nv, std::move(div)).pruned(1e-13);
  return th;
}

BlockSystem build_poisson_system(MeshLevel const &mesh, double alpha)
{
  if (!(alpha > 0.0))
    throw InvalidArgument("alpha must be positive");
  auto p1 = assemble_p1(mesh);
  auto const n = mesh.vertex_count();

  BlockSystem s;
  s.problem = Problem::PoissonControl;
  s.level = mesh.level();
  s.alpha = alpha;
  s.layout = make_layout(Problem::PoissonControl, mesh);

  std::vector<Triplet> entries;
  entries.reserve(4 * p1.stiffness.nnz());
  append_block(entries, p1.mass, 0, 0);
  append_block(entries, p1.stiffness, 0, n);
  append_block(entries, p1.stiffness, n, 0);
  append_block(entries, p1.mass, n, n, -1.0 / alpha);
  s.matrix = SparseMatrix::from_triplets(2 * n, 2 * n, std::move(entries));

  auto const md = p1.mass.diagonal();
  auto const kd = p1.stiffness.diagonal();
  double const sa = std::sqrt(alpha);
  s.norm_diag.resize(2 * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < md.size(); ++i) {
    s.norm_diag[i] = md[i] + sa * kd[i];
    s.norm_diag[i + md.size()] = md[i] / alpha + kd[i] / sa;
  }
  s.mass = std::move(p1.mass);
  s.stiffness = std::move(p1.stiffness);
  return s;
}

BlockSystem build_stokes_system(MeshLevel const &mesh, double alpha)
{
  if (!(alpha > 0.0))
    throw InvalidArgument("alpha must be positive");
  if (mesh.level() < 1)
    throw InvalidArgument("Stokes system needs mesh level >= 1");
  auto th = assemble_taylor_hood(mesh);
  auto const nv = th.velocity_dofs.free_count();

  BlockSystem s;
  s.problem = Problem::StokesControl;
  s.level = mesh.level();
  s.alpha = alpha;
  s.layout = make_layout(Problem::StokesControl, mesh);
  auto const ov = s.layout.field("v").offset;
  auto const op = s.layout.field("p").offset;
  auto const ol = s.layout.field("lambda").offset;
  auto const om = s.layout.field("mu").offset;

  auto const dt = th.divergence.transpose();
  std::vector<Triplet> entries;
  for (int c = 0; c < 2; ++c) {
    append_block(entries, th.mass, ov + c * nv, ov + c * nv);
    append_block(entries, th.stiffness, ov + c * nv, ol + c * nv);
    append_block(entries, th.stiffness, ol + c * nv, ov + c * nv);
    append_block(entries, th.mass, ol + c * nv, ol + c * nv, -1.0 / alpha);
  }
  append_block(entries, dt, ov, om);
  append_block(entries, th.divergence, op, ol);
  append_block(entries, dt, ol, op);
  append_block(entries, th.divergence, om, ov);
  s.matrix = SparseMatrix::from_triplets(s.layout.size, s.layout.size,
                                         std::move(entries));

  auto const md = th.mass.diagonal();
  auto const kd = th.stiffness.diagonal();
  double const sa = std::sqrt(alpha);
  Vector w_hat(2 * static_cast<std::size_t>(nv));
  for (std::size_t i = 0; i < md.size(); ++i)
    w_hat[i] = w_hat[i + md.size()] = md[i] + sa * kd[i];
  Vector w_inv(w_hat.size());
  for (std::size_t i = 0; i < w_hat.size(); ++i)
    w_inv[i] = 1.0 / w_hat[i];
  auto p_hat = sparse_triple_diag(th.divergence, w_inv);
  for (auto &v : p_hat)
    v *= alpha;

  s.norm_diag.resize(static_cast<std::size_t>(s.layout.size));
  for (std::size_t i = 0; i < w_hat.size(); ++i) {
    s.norm_diag[ov + i] = w_hat[i];
    s.norm_diag[ol + i] = w_hat[i] / alpha;
  }
  for (std::size_t i = 0; i < p_hat.size(); ++i) {
    s.norm_diag[op + i] = p_hat[i];
    s.norm_diag[om + i] = p_hat[i] / alpha;
  }

  s.mass = std::move(th.mass);
  s.stiffness = std::move(th.stiffness);
  s.divergence = std::move(th.divergence);
  s.pressure_weights = std::move(th.pressure_weights);
  return s;
}

BlockSystem build_system(Problem problem, MeshLevel const &mesh, double alpha)
{
  return problem == Problem::PoissonControl ? build_poisson_system(mesh, alpha)
                                            : build_stokes_system(mesh, alpha);
}

Vector recover_control(BlockSystem const &system, std::span<const double> x)
{
  if (x.size() != static_cast<std::size_t>(system.size()))
    throw DimensionMismatch("recover_control: iterate has wrong length");
  auto const &f = system.layout.field("lambda");
  Vector u(static_cast<std::size_t>(f.size));
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = x[static_cast<std::size_t>(f.offset) + i] / system.alpha;
  return u;
}

} // namespace aaomg
