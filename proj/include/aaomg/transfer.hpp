#ifndef AAOMG_TRANSFER_HPP
#define AAOMG_TRANSFER_HPP

#include "aaomg/assembly.hpp"
#include "aaomg/mesh.hpp"
#include "aaomg/sparse.hpp"

#include <vector>

namespace aaomg {

/// Prolongation (fine x coarse) and restriction = its transpose.
struct TransferPair
{
  SparseMatrix prolongation;
  SparseMatrix restriction;
};

/// Canonical embedding of coarse P1 functions into the fine P1 space.
SparseMatrix p1_prolongation(MeshLevel const &coarse, MeshLevel const &fine);

enum class BoundaryDofs { Keep, Eliminate };

/// Canonical embedding of coarse P2 functions: each fine row holds the coarse
/// basis function values at the fine node. With BoundaryDofs::Eliminate the
/// rows and columns are indexed by the free (non-Dirichlet) dofs.
SparseMatrix p2_prolongation(MeshLevel const &coarse, MeshLevel const &fine,
                             BoundaryDofs boundary = BoundaryDofs::Eliminate);

/// Block-diagonal transfer in layout order; `per_field[i]` maps the coarse
/// field i to the fine field i.
TransferPair block_transfer(FieldLayout const &fine, FieldLayout const &coarse,
                            std::vector<SparseMatrix const *> const &per_field);

/// Transfer between the all-at-once systems of two consecutive levels.
TransferPair problem_transfer(Problem problem, MeshLevel const &coarse,
                              MeshLevel const &fine);

} // namespace aaomg

#endif
