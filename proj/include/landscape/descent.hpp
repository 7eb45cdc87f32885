#pragma once

#include <string>
#include <vector>

#include "landscape/classifier.hpp"
#include "landscape/model.hpp"

namespace landscape {

struct SimConfig {
  double step_size = 1e-2;
  long long max_iters = 100000;
  double stop_grad_norm = 1e-8;
  unsigned long long seed = 0;
  long long record_every = 1;

  void validate() const;
};

// One fixed-step descent run. Snapshots are taken every record_every steps
// and always include the final iterate; iterates, steps, losses, and
// grad_norms run in parallel.
struct TrajectoryRecord {
  std::vector<Network<double>> iterates;
  std::vector<long long> steps;
  std::vector<double> losses;
  std::vector<double> grad_norms;
  ClassificationResult<double> terminal_classification;
  long long iterations = 0;
  bool converged = false;  // gradient max-norm reached the stop threshold
  bool diverged = false;   // loss exceeded the blow-up bound or went non-finite
};

// Fixed-step descent along the right-hand generalized gradient.
TrajectoryRecord run_gd(const Network<double>& start, const AffineTarget<double>& target,
                        const SimConfig& config);

struct SweepEntry {
  int index = 0;
  double terminal_loss = 0.0;
  double terminal_grad_norm = 0.0;
  std::string terminal_verdict;
  long long iterations = 0;
  bool converged = false;
  bool diverged = false;
};

struct LadderBin {
  std::string label;   // "zero" or "n=<k>"
  double value = 0.0;  // loss level of the bin
  int count = 0;
};

// Aggregate of many runs: per-run terminals plus a histogram over the
// discrete loss levels reachable at critical points, assigning each
// converged run to the nearest level.
struct SweepSummary {
  std::vector<SweepEntry> entries;
  std::vector<LadderBin> histogram;
  int unconverged = 0;
};

// The discrete critical-loss levels for the histogram: zero, the flat level
// alpha^2 (t1-t0)^3 / 12, and for hard-kink networks the interior-knot
// levels down to width-many knots.
std::vector<LadderBin> loss_ladder(ActivationKind kind, int width,
                                   const AffineTarget<double>& target);

// Runs one trajectory per starting point in parallel and merges results by
// index.
SweepSummary sweep(const std::vector<Network<double>>& inits,
                   const AffineTarget<double>& target, const SimConfig& config);

struct RandomInitSpec {
  int width = 2;
  ActivationKind activation = ActivationKind::Relu;
  double leak = 0.01;  // used by the leaky activation only
  int count = 100;
  double scale = 0.5;  // standard deviation of the parameter draw
};

// Draws count networks with independent normal parameters (run i seeded from
// config.seed and i, so the sweep is reproducible) and descends each.
SweepSummary sweep(const RandomInitSpec& spec, const AffineTarget<double>& target,
                   const SimConfig& config);

}  // namespace landscape
