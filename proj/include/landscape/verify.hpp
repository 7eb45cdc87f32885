#pragma once

#include <optional>
#include <string>
#include <vector>

#include "landscape/exactcalc.hpp"
#include "landscape/model.hpp"

namespace landscape {

enum class FdSide { Right, Central };

inline std::string to_string(FdSide side) {
  return side == FdSide::Right ? "right" : "central";
}

// Spectrum report for the loss Hessian restricted to the probe coordinates of
// a kink saddle: determinant, minimum eigenvalue, and the scalar invariants
// (gamma_factor, mu, lambdas) of the underlying negativity argument.
// gamma_factor is NaN for the probe variants that have no such scalar.
struct HessianProbeResult {
  std::vector<std::string> coordinates;
  double determinant = 0.0;
  double min_eigenvalue = 0.0;
  double gamma_factor = 0.0;
  double mu = 0.0;
  std::vector<double> lambdas;
  std::vector<double> eigenvalues;  // ascending; determinant equals their product
};

// A strictly loss-decreasing perturbation: new point = old point +
// step * direction, with direction of unit max-norm laid out as
// (w_1..w_N, b_1..b_N, v_1..v_N, c).
struct EscapeResult {
  std::vector<double> direction;
  double step = 0.0;
  double loss_drop = 0.0;
  std::string method;  // which curve or search produced it
};

// Checks of the structural identities every segment-mean-zero piecewise
// affine approximant satisfies: the slope-deviation recurrence across
// segments, and (when the whole-interval first moment also vanishes) the
// alternating sum of squared segment lengths.
struct RecurrenceReport {
  bool segment_means_ok = false;
  bool recurrence_ok = false;
  bool x_moment_zero = false;
  bool alternating_sum_applicable = false;
  bool alternating_sum_ok = false;
  bool forces_identity = false;  // single segment with both moments zero
  std::vector<std::string> notes;
};

// Composite fixed-order Gauss-Legendre approximation of the loss integral,
// with the interval pre-split at every activation kink so each panel
// integrates a polynomial.
double quadrature_oracle(const Network<double>& net, const AffineTarget<double>& target,
                         int subdivisions);

// One-sided or central finite-difference approximation of the loss gradient.
Gradient<double> fd_gradient(const Network<double>& net, const AffineTarget<double>& target,
                             double step, FdSide side);

// Builds the negativity-certificate coordinate selection at a kink saddle,
// computes the restricted Hessian there, and reports its spectrum together
// with the scalar invariants. Requires at least one type-2-active neuron.
HessianProbeResult saddle_probe(const Network<double>& net,
                                const AffineTarget<double>& target,
                                const Tolerances& tol = {});

// Searches for a strictly loss-decreasing point within the max-norm ball of
// the given radius: explicit escape curves for every known saddle shape
// first, then the restricted-Hessian descent direction, then seeded random
// sampling. Returns nothing if no lower point is found.
std::optional<EscapeResult> descent_direction_search(const Network<double>& net,
                                                     const AffineTarget<double>& target,
                                                     double radius, int trials,
                                                     unsigned long long seed = 0,
                                                     const Tolerances& tol = {});

// Radius of a max-norm ball around a constructed non-global local minimum
// inside which the loss provably does not drop: every neuron keeps its
// taxonomy class and outer-weight sign within this distance.
double local_min_margin_radius(const Network<double>& net,
                               const AffineTarget<double>& target,
                               const Tolerances& tol = {});

// Verifies the segment-mean precondition and the recurrence identities for a
// piecewise affine form against the target; identities are skipped when the
// precondition fails.
RecurrenceReport lemma_recurrence_check(const PiecewiseForm<double>& form,
                                        const AffineTarget<double>& target,
                                        const Tolerances& tol = {});

}  // namespace landscape
