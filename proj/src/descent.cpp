#include "landscape/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "landscape/exactcalc.hpp"

namespace landscape {

namespace {

constexpr double kBlowUp = 1e12;

// Terminal iterates sit near, not on, the structures the classifier tests
// for, so the structural bands are widened and the gradient band tracks the
// stop threshold.
Tolerances relaxed_for(const SimConfig& config) {
  Tolerances tol;
  tol.knot_rel = 1e-6;
  tol.eq_rel = 1e-5;
  tol.struct_rel = 1e-4;
  tol.grad_abs = std::max(1e-6, 10.0 * config.stop_grad_norm);
  return tol;
}

}  // namespace

void SimConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size))
    throw std::invalid_argument("step_size must be positive and finite");
  if (stop_grad_norm < 0.0)
    throw std::invalid_argument("stop_grad_norm must be nonnegative");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
  if (record_every < 1) throw std::invalid_argument("record_every must be at least 1");
}

TrajectoryRecord run_gd(const Network<double>& start, const AffineTarget<double>& target,
                        const SimConfig& config) {
  start.validate();
  target.validate();
  config.validate();

  TrajectoryRecord rec;
  Network<double> net = start;
  const int n = net.size();

  auto record = [&](long long k, double cur_loss, double gnorm) {
    rec.iterates.push_back(net);
    rec.steps.push_back(k);
    rec.losses.push_back(cur_loss);
    rec.grad_norms.push_back(gnorm);
  };

  long long k = 0;
  while (true) {
    const double cur_loss = loss(net, target);
    const Gradient<double> g = generalized_gradient(net, target);
    const double gnorm = gradient_inf_norm(g);

    const bool blown = !std::isfinite(cur_loss) || cur_loss > kBlowUp || !std::isfinite(gnorm);
    const bool stopped = !blown && gnorm <= config.stop_grad_norm;
    const bool done = blown || stopped || k >= config.max_iters;
    if (done || k % config.record_every == 0) record(k, cur_loss, gnorm);
    if (done) {
      rec.diverged = blown;
      rec.converged = stopped;
      rec.iterations = k;
      break;
    }

    for (int j = 0; j < n; ++j) {
      net.w[j] -= config.step_size * g.dw[j];
      net.b[j] -= config.step_size * g.db[j];
      net.v[j] -= config.step_size * g.dv[j];
    }
    net.c -= config.step_size * g.dc;
    ++k;
  }

  rec.terminal_classification = classify(net, target, relaxed_for(config));
  return rec;
}

std::vector<LadderBin> loss_ladder(ActivationKind kind, int width,
                                   const AffineTarget<double>& target) {
  const double len = target.length();
  const double unit = target.alpha * target.alpha * len * len * len;
  std::vector<LadderBin> bins;
  bins.push_back({"zero", 0.0, 0});
  bins.push_back({"n=0", unit / 12.0, 0});
  if (kind == ActivationKind::Relu) {
    for (int n = 2; n <= width; n += 2) {
      const double steps = static_cast<double>(n + 1);
      bins.push_back({"n=" + std::to_string(n), unit / (12.0 * steps * steps * steps * steps), 0});
    }
  }
  return bins;
}

SweepSummary sweep(const std::vector<Network<double>>& inits,
                   const AffineTarget<double>& target, const SimConfig& config) {
  target.validate();
  config.validate();

  SweepSummary summary;
  if (inits.empty()) return summary;
  for (const auto& net : inits) net.validate();

  const int count = static_cast<int>(inits.size());
  std::vector<SweepEntry> entries(count);

  auto worker = [&](int first, int stride) {
    for (int i = first; i < count; i += stride) {
      const TrajectoryRecord rec = run_gd(inits[i], target, config);
      SweepEntry& e = entries[i];
      e.index = i;
      e.terminal_loss = rec.losses.back();
      e.terminal_grad_norm = rec.grad_norms.back();
      e.terminal_verdict = to_string(rec.terminal_classification.verdict);
      e.iterations = rec.iterations;
      e.converged = rec.converged;
      e.diverged = rec.diverged;
    }
  };

  const int threads = std::max(
      1, std::min({count, static_cast<int>(std::thread::hardware_concurrency()), 8}));
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }

  summary.entries = std::move(entries);
  summary.histogram =
      loss_ladder(inits.front().activation.kind, inits.front().size(), target);
  for (const auto& e : summary.entries) {
    if (!e.converged) {
      ++summary.unconverged;
      continue;
    }
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < summary.histogram.size(); ++b) {
      const double gap = std::fabs(e.terminal_loss - summary.histogram[b].value);
      if (gap < best_gap) {
        best_gap = gap;
        best = static_cast<int>(b);
      }
    }
    ++summary.histogram[best].count;
  }
  return summary;
}

SweepSummary sweep(const RandomInitSpec& spec, const AffineTarget<double>& target,
                   const SimConfig& config) {
  if (spec.width < 1) throw std::invalid_argument("width must be at least 1");
  if (spec.count < 0) throw std::invalid_argument("count must be nonnegative");
  if (!(spec.scale > 0.0)) throw std::invalid_argument("scale must be positive");

  std::vector<Network<double>> inits;
  inits.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    std::seed_seq seq{static_cast<unsigned long long>(config.seed),
                      static_cast<unsigned long long>(i)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, spec.scale);
    Network<double> net;
    net.activation.kind = spec.activation;
    if (spec.activation == ActivationKind::LeakyRelu) net.activation.leak = spec.leak;
    net.w.resize(spec.width);
    net.b.resize(spec.width);
    net.v.resize(spec.width);
    for (int j = 0; j < spec.width; ++j) {
      net.w[j] = gauss(rng);
      net.b[j] = gauss(rng);
      net.v[j] = gauss(rng);
    }
    net.c = gauss(rng);
    net.validate();
    inits.push_back(std::move(net));
  }
  return sweep(inits, target, config);
}

}  // namespace landscape
