#include "aaomg/transfer.hpp"

#include "aaomg/error.hpp"

#include <algorithm>
#include <array>

namespace aaomg {

SparseMatrix p1_prolongation(MeshLevel const &coarse, MeshLevel const &fine)
{
  auto const parents = vertex_parents(coarse, fine);
  std::vector<Triplet> entries;
  entries.reserve(2 * parents.size());
  for (Index v = 0; v < fine.vertex_count(); ++v) {
    auto const &p = parents[v];
    if (p.kind == VertexParent::Kind::Vertex) {
      entries.push_back({v, p.index, 1.0});
    } else {
      auto const &e = coarse.edges()[p.index];
      entries.push_back({v, e[0], 0.5});
      entries.push_back({v, e[1], 0.5});
    }
  }
  return SparseMatrix::from_triplets(fine.vertex_count(), coarse.vertex_count(),
                                     std::move(entries));
}

namespace {

// Integer coordinates of a fine P2 node on the lattice of spacing h_fine / 2.
std::array<int, 2> lattice_position(MeshLevel const &fine, Index dof)
{
  auto const stride = fine.cells_per_side() + 1;
  auto vertex = [&](Index v) {
    return std::array<int, 2>{2 * (v % stride), 2 * (v / stride)};
  };
  if (dof < fine.vertex_count())
    return vertex(dof);
  auto const &e = fine.edges()[dof - fine.vertex_count()];
  auto const a = vertex(e[0]);
  auto const b = vertex(e[1]);
  return {(a[0] + b[0]) / 2, (a[1] + b[1]) / 2};
}

} // namespace

SparseMatrix p2_prolongation(MeshLevel const &coarse, MeshLevel const &fine,
                             BoundaryDofs boundary)
{
  if (fine.level() != coarse.level() + 1)
    throw InvalidArgument("meshes are not parent and child");
  auto const fine_dofs = p2_dofs(fine);
  auto const coarse_dofs = p2_dofs(coarse);
  bool const eliminate = boundary == BoundaryDofs::Eliminate;
  auto const nc = coarse.cells_per_side();
  auto const nvert = coarse.vertex_count();

  std::vector<Triplet> entries;
  for (Index dof = 0; dof < fine_dofs.count; ++dof) {
    auto const row = eliminate ? fine_dofs.free_index[dof] : dof;
    if (row < 0)
      continue;
    // One coarse cell spans four lattice units.
    auto const pos = lattice_position(fine, dof);
    int const cx = std::min(pos[0] / 4, nc - 1);
    int const cy = std::min(pos[1] / 4, nc - 1);
    double const s = (pos[0] - 4 * cx) / 4.0;
    double const t = (pos[1] - 4 * cy) / 4.0;

    std::array<Index, 3> tri;
    std::array<double, 3> bary;
    auto const v00 = coarse.vertex_at(cx, cy);
    auto const v11 = coarse.vertex_at(cx + 1, cy + 1);
    if (s >= t) {
      tri = {v00, coarse.vertex_at(cx + 1, cy), v11};
      bary = {1.0 - s, s - t, t};
    } else {
      tri = {v00, v11, coarse.vertex_at(cx, cy + 1)};
      bary = {1.0 - t, s, t - s};
    }
    auto const phi = p2_shape_values(bary);
    std::array<Index, 6> cols;
    for (int i = 0; i < 3; ++i) {
      cols[i] = tri[i];
      cols[3 + i] =
          nvert + coarse.edge_index(tri[(i + 1) % 3], tri[(i + 2) % 3]);
    }
    for (int i = 0; i < 6; ++i) {
      auto const col = eliminate ? coarse_dofs.free_index[cols[i]] : cols[i];
      if (col < 0 || phi[i] == 0.0)
        continue;
      entries.push_back({row, col, phi[i]});
    }
  }
  auto const nrows = eliminate ? fine_dofs.free_count() : fine_dofs.count;
  auto const ncols = eliminate ? coarse_dofs.free_count() : coarse_dofs.count;
  return SparseMatrix::from_triplets(nrows, ncols, std::move(entries));
}

TransferPair block_transfer(FieldLayout const &fine, FieldLayout const &coarse,
                            std::vector<SparseMatrix const *> const &per_field)
{
  if (fine.fields.size() != coarse.fields.size() ||
      per_field.size() != fine.fields.size())
    throw DimensionMismatch("block_transfer: field counts differ");
  std::vector<Triplet> entries;
  for (std::size_t f = 0; f < per_field.size(); ++f) {
    auto const &p = *per_field[f];
    if (p.rows() != fine.fields[f].size || p.cols() != coarse.fields[f].size)
      throw DimensionMismatch("block_transfer: transfer for field '" +
                              fine.fields[f].name +
                              "' does not match the field sizes");
    append_block(entries, p, fine.fields[f].offset, coarse.fields[f].offset);
  }
  auto prolongation =
      SparseMatrix::from_triplets(fine.size, coarse.size, std::move(entries));
  auto restriction = prolongation.transpose();
  return {std::move(prolongation), std::move(restriction)};
}

TransferPair problem_transfer(Problem problem, MeshLevel const &coarse,
                              MeshLevel const &fine)
{
  auto const fine_layout = make_layout(problem, fine);
  auto const coarse_layout = make_layout(problem, coarse);
  if (problem == Problem::PoissonControl) {
    auto const p1 = p1_prolongation(coarse, fine);
    return block_transfer(fine_layout, coarse_layout, {&p1, &p1});
  }
  auto const p1 = p1_prolongation(coarse, fine);
  auto const p2 = p2_prolongation(coarse, fine);
  std::vector<Triplet> entries;
  append_block(entries, p2, 0, 0);
  append_block(entries, p2, p2.rows(), p2.cols());
  auto const vector_p2 = SparseMatrix::from_triplets(
      2 * p2.rows(), 2 * p2.cols(), std::move(entries));
  return block_transfer(fine_layout, coarse_layout,
                        {&vector_p2, &p1, &vector_p2, &p1});
}

} // namespace aaomg
