#ifndef AAOMG_ANALYSIS_HPP
#define AAOMG_ANALYSIS_HPP

#include "aaomg/assembly.hpp"
#include "aaomg/dense.hpp"
#include "aaomg/mesh.hpp"
#include "aaomg/smoothers.hpp"

#include <iosfwd>
#include <vector>

// Dense checks of the theory on small levels. Everything here is O(n^3) and
// refuses systems above the size caps below.
namespace aaomg {

inline constexpr Index stability_max_dimension = 3000;
inline constexpr Index smoothing_max_dimension = 1500;

/// The block norm matrix Q as a dense matrix. For Stokes the pressure blocks
/// use the exact W^-1, so Q is only semidefinite (constant pressures).
DenseMatrix norm_matrix(BlockSystem const &system);

struct StabilityConstants
{
  /// Smallest and largest singular value of Q^-1/2 A Q^-1/2, taken on the
  /// complement of the kernel for Stokes.
  double lower = 0.0;
  double upper = 0.0;
};

StabilityConstants stability_constants(BlockSystem const &system);

/// Largest eigenvalue of L^-1/2 Q L^-1/2. The inverse inequality used by the
/// smoothing analysis asks for a value <= 1.
double inverse_inequality_constant(BlockSystem const &system);

/// ||L^-1/2 A L^-1/2||.
double scaled_operator_norm(BlockSystem const &system);

/// Error propagation matrix of one smoother step, obtained by sweeping every
/// unit vector with zero right-hand side.
DenseMatrix sweep_operator(Smoother &smoother);

/// Error propagation from the closed forms: I - tau L^-1 A^T L^-1 A,
/// I - trig(N)^-1 N and I - Nhat^-1 N. Only for the three normal equation
/// based smoothers.
DenseMatrix compact_operator(SmootherKind kind, BlockSystem const &system);

struct SmoothingCurve
{
  SmootherKind kind;
  double c_bar = 0.0; // ||L^-1/2 A L^-1/2||, the nu = 0 value
  Index nnz = 0;      // max nonzeros per row of A
  std::vector<int> nu;
  std::vector<double> eta_measured;
  /// 2^-1/2 c_bar nnz^5/2 / sqrt(nu); the proven bound for sLSGS.
  std::vector<double> eta_bound;
};

double smoothing_bound(double c_bar, Index nnz, int nu);

/// eta(nu) = ||L^-1/2 A S^nu L^-1/2|| for nu = 1..nu_max. The mesh is only
/// used to build Vanka patches.
SmoothingCurve smoothing_norm(BlockSystem const &system, MeshLevel const &mesh,
                              SmootherKind kind, int nu_max);

struct Lemma1Report
{
  bool passed = false;
  double c_bar = 0.0;
  Index nnz = 0;
  /// Largest eigenvalue of L^-1/2 Q L^-1/2 minus one (positive when the
  /// inverse inequality only holds up to a constant).
  double inverse_inequality_delta = 0.0;
  std::vector<double> eta;
  std::vector<double> bound;
  std::vector<double> margin; // bound / eta
  int first_violation = 0;    // 0 when passed
};

Lemma1Report lemma1_check(BlockSystem const &system, MeshLevel const &mesh,
                          int nu_max);

/// tau * rho(L^-1 A^T L^-1 A) from the top Ritz value of a Lanczos run of at
/// most max_steps steps (memory n * max_steps).
double normal_equation_radius(BlockSystem const &system, double tau,
                              int max_steps = 300);

/// CSV rows: problem,level,alpha,smoother,nu,eta_measured,eta_bound.
void write_smoothing_csv(std::ostream &os, BlockSystem const &system,
                         SmoothingCurve const &curve, bool header);

} // namespace aaomg

#endif
