#include "landscape/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "landscape/construct.hpp"
#include "landscape/descent.hpp"
#include "landscape/json_io.hpp"
#include "landscape/verify.hpp"

namespace landscape {

namespace {

enum class Mode { Float, Rational };

Mode parse_mode(const std::string& text) {
  if (text == "float") return Mode::Float;
  if (text == "rational") return Mode::Rational;
  throw std::invalid_argument("mode: expected 'float' or 'rational', got '" + text + "'");
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("input file '" + path + "' cannot be opened");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("input file '" + path + "' is not valid JSON: " +
                                std::string(e.what()));
  }
  return j;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::invalid_argument("output file '" + out_path + "' cannot be opened");
  f << text << "\n";
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_cell(double v) { return format_double(v); }
std::string csv_cell(const ExactScalar& v) { return v.to_string(); }

// Parses a scalar given on the command line itself rather than in a file.
template <class S>
S parse_scalar_text(const std::string& text, const std::string& field);

template <>
double parse_scalar_text<double>(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double plain = std::stod(text, &used);
    if (used == text.size()) return plain;
  } catch (const std::exception&) {
  }
  try {
    return parse_exact_literal(text).to_double();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(field + ": " + e.what());
  }
}

template <>
ExactScalar parse_scalar_text<ExactScalar>(const std::string& text,
                                           const std::string& field) {
  try {
    return parse_exact_literal(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(field + ": " + e.what());
  }
}

template <class S>
AffineTarget<S> load_target(const std::string& path) {
  if (path.empty()) {
    // Unit slope on the unit interval.
    AffineTarget<S> t;
    t.alpha = ScalarTraits<S>::from_int(1);
    t.beta = ScalarTraits<S>::from_int(0);
    t.t0 = ScalarTraits<S>::from_int(0);
    t.t1 = ScalarTraits<S>::from_int(1);
    return t;
  }
  return target_from_json<S>(load_json(path));
}

LocalMinNeuronKind parse_locmin_kind(const std::string& text) {
  if (text == "inactive") return LocalMinNeuronKind::Inactive;
  if (text == "semi-inactive-left") return LocalMinNeuronKind::SemiInactiveLeft;
  if (text == "semi-inactive-right") return LocalMinNeuronKind::SemiInactiveRight;
  throw std::invalid_argument("kinds: unknown local-minimum neuron kind '" + text + "'");
}

TrivialSaddleKind parse_trivial_kind(const std::string& text) {
  if (text == "flat-semi-active") return TrivialSaddleKind::FlatSemiActive;
  if (text == "semi-inactive-left-wrong-sign")
    return TrivialSaddleKind::SemiInactiveLeftWrongSign;
  if (text == "semi-inactive-right-wrong-sign")
    return TrivialSaddleKind::SemiInactiveRightWrongSign;
  if (text == "flat-degenerate") return TrivialSaddleKind::FlatDegenerate;
  throw std::invalid_argument("kind: unknown trivial-saddle kind '" + text + "'");
}

QuadraticSaddleKind parse_quad_kind(const std::string& text) {
  if (text == "flat-shifted-bias") return QuadraticSaddleKind::FlatShiftedBias;
  if (text == "zero-preactivation") return QuadraticSaddleKind::ZeroPreactivation;
  if (text == "midpoint-root") return QuadraticSaddleKind::MidpointRoot;
  if (text == "flat-degenerate") return QuadraticSaddleKind::FlatDegenerate;
  throw std::invalid_argument("kinds: unknown quadratic-saddle kind '" + text + "'");
}

struct ConstructArgs {
  std::string family;
  int width = 0;  // 0 means the smallest width the family allows
  int n = 0;      // 0 means the family default
  int sigma = 1;
  std::string gamma = "1/100";
  std::string kind = "flat-semi-active";
  std::vector<std::string> kinds;
  std::vector<int> split;
  std::string target_path;
};

template <class S>
Network<S> build_family(const ConstructArgs& a) {
  const AffineTarget<S> target = load_target<S>(a.target_path);
  if (a.family == "locmin") {
    std::vector<LocalMinNeuronKind> menu;
    for (const auto& k : a.kinds) menu.push_back(parse_locmin_kind(k));
    const int width = a.width > 0 ? a.width : std::max<int>(1, menu.size());
    return make_relu_local_min(width, target, menu);
  }
  if (a.family == "saddle") {
    const int n = a.n > 0 ? a.n : 2;
    const int width = a.width > 0 ? a.width : n;
    return make_relu_saddle(width, target, n, a.split);
  }
  if (a.family == "trivial-saddle") {
    const int width = a.width > 0 ? a.width : 1;
    return make_relu_trivial_saddle(width, target, parse_trivial_kind(a.kind));
  }
  if (a.family == "leaky-saddle") {
    const S gamma = parse_scalar_text<S>(a.gamma, "gamma");
    const int n = a.n > 0 ? a.n : 1;
    const int width = a.width > 0 ? a.width : n;
    return make_leaky_saddle(width, target, gamma, n, a.sigma, a.split).network;
  }
  if (a.family == "quad-saddle") {
    std::vector<QuadraticSaddleKind> menu;
    for (const auto& k : a.kinds) menu.push_back(parse_quad_kind(k));
    const int width = a.width > 0 ? a.width : std::max<int>(1, menu.size());
    return make_quadratic_saddle(width, target, menu);
  }
  if (a.family == "quad-global") {
    const int width = a.width > 0 ? a.width : 2;
    return make_quadratic_global_min(width, target);
  }
  throw std::invalid_argument("family: unknown value '" + a.family + "'");
}

template <class S>
std::string run_realize(const nlohmann::json& net_j, const nlohmann::json& target_j,
                        int grid, const Tolerances& tol) {
  const Network<S> net = network_from_json<S>(net_j);
  const AffineTarget<S> target = target_from_json<S>(target_j);
  if (grid < 2) throw std::invalid_argument("grid: needs at least 2 points");
  // The piecewise form and the direct evaluator agree; realize from the form
  // so the CSV reflects the closed-form representation.
  const PiecewiseForm<S> form = realize(net, target, tol);
  std::ostringstream os;
  os << "x,f,target\n";
  const S len = target.length();
  for (int i = 0; i < grid; ++i) {
    const S x = target.t0 + len * ScalarTraits<S>::from_int(i) /
                                ScalarTraits<S>::from_int(grid - 1);
    os << csv_cell(x) << "," << csv_cell(form.evaluate(x)) << ","
       << csv_cell(target(x)) << "\n";
  }
  return os.str();
}

double relative_gap(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

double gradient_gap(const Gradient<double>& a, const Gradient<double>& b) {
  double m = std::fabs(a.dc - b.dc);
  for (std::size_t i = 0; i < a.dw.size(); ++i) {
    m = std::max(m, std::fabs(a.dw[i] - b.dw[i]));
    m = std::max(m, std::fabs(a.db[i] - b.db[i]));
    m = std::max(m, std::fabs(a.dv[i] - b.dv[i]));
  }
  return m;
}

struct VerifyArgs {
  std::string suite = "all";
  int subdivisions = 512;
  double fd_step = 1e-6;
  double radius = 0.25;
  int trials = 20000;
  unsigned long long seed = 0;
};

nlohmann::json run_verify(const Network<double>& net, const AffineTarget<double>& target,
                          const VerifyArgs& va, const Tolerances& tol) {
  nlohmann::json checks = nlohmann::json::array();
  auto add = [&](const std::string& name, bool pass, nlohmann::json detail) {
    detail["name"] = name;
    detail["pass"] = pass;
    checks.push_back(std::move(detail));
  };
  const bool all = va.suite == "all";
  const double base = loss(net, target);

  if (all || va.suite == "gradient") {
    const double quad = quadrature_oracle(net, target, va.subdivisions);
    add("quadrature_matches_closed_form", relative_gap(quad, base) <= 1e-9,
        {{"closed_form", base}, {"quadrature", quad}});

    const Gradient<double> g = generalized_gradient(net, target, tol);
    const double scale = std::max(1.0, gradient_inf_norm(g));
    // A raw one-sided difference carries a truncation term of half the step
    // times the curvature; extrapolating two step sizes cancels it, so the
    // comparison stays sharp even at points of large curvature.
    const Gradient<double> right = fd_gradient(net, target, va.fd_step, FdSide::Right);
    const Gradient<double> right2 =
        fd_gradient(net, target, 2.0 * va.fd_step, FdSide::Right);
    Gradient<double> extrapolated = right;
    extrapolated.dc = 2.0 * right.dc - right2.dc;
    for (std::size_t i = 0; i < extrapolated.dw.size(); ++i) {
      extrapolated.dw[i] = 2.0 * right.dw[i] - right2.dw[i];
      extrapolated.db[i] = 2.0 * right.db[i] - right2.db[i];
      extrapolated.dv[i] = 2.0 * right.dv[i] - right2.dv[i];
    }
    add("right_difference_matches_gradient",
        gradient_gap(extrapolated, g) / scale <= 1e-5,
        {{"gap", gradient_gap(extrapolated, g)}, {"step", va.fd_step}});

    // Central differences straddle the kink at coordinates where only the
    // right-hand derivative exists, so compare them only when every
    // coordinate is at least continuously differentiable.
    const auto smooth = differentiability_report(net, target);
    auto central_ok = [](SmoothnessClass s) {
      return s != SmoothnessClass::RightHandOnly &&
             s != SmoothnessClass::DifferentiableOnly;
    };
    bool comparable = central_ok(smooth.c);
    for (int j = 0; j < net.size() && comparable; ++j)
      comparable = central_ok(smooth.w[j]) && central_ok(smooth.b[j]) &&
                   central_ok(smooth.v[j]);
    if (comparable) {
      const Gradient<double> central =
          fd_gradient(net, target, va.fd_step, FdSide::Central);
      add("central_difference_matches_gradient",
          gradient_gap(central, g) / scale <= 1e-5,
          {{"gap", gradient_gap(central, g)}, {"step", va.fd_step}});
    }
  }

  if (all || va.suite == "hessian") {
    bool has_kink = false;
    for (const auto& rep : classify_neurons(net, target, tol))
      if (rep.kind == NeuronKind::Type2Active) has_kink = true;
    if (has_kink && target.alpha != 0.0) {
      const HessianProbeResult probe = saddle_probe(net, target, tol);
      add("negative_curvature_direction", probe.min_eigenvalue < -1e-10,
          {{"min_eigenvalue", probe.min_eigenvalue},
           {"coordinates", probe.coordinates}});
      double product = 1.0;
      for (double ev : probe.eigenvalues) product *= ev;
      add("determinant_matches_spectrum",
          std::fabs(probe.determinant - product) <=
              1e-8 * std::max(1.0, std::fabs(probe.determinant)),
          {{"determinant", probe.determinant}, {"eigenvalue_product", product}});
    } else if (!all) {
      // An explicit hessian request on a kink-free network is a usage error.
      saddle_probe(net, target, tol);
    }
  }

  if (all || va.suite == "escape") {
    const auto cls = classify(net, target, tol);
    if (cls.verdict == Verdict::NonGlobalLocalMinimum) {
      const double margin = local_min_margin_radius(net, target, tol);
      const auto esc =
          descent_direction_search(net, target, margin, va.trials, va.seed, tol);
      add("no_lower_point_within_margin", !esc.has_value(),
          {{"margin_radius", margin}, {"trials", va.trials}});
    } else if (cls.verdict == Verdict::GlobalMinimum) {
      const auto esc =
          descent_direction_search(net, target, va.radius, va.trials, va.seed, tol);
      add("no_lower_point_found", !esc.has_value(),
          {{"radius", va.radius}, {"trials", va.trials}});
    } else {
      const auto esc =
          descent_direction_search(net, target, va.radius, va.trials, va.seed, tol);
      nlohmann::json detail{{"radius", va.radius}};
      if (esc) {
        detail["method"] = esc->method;
        detail["loss_drop"] = esc->loss_drop;
      }
      add("lower_point_found", esc.has_value(), std::move(detail));
    }
  }

  if (all || va.suite == "identities") {
    if (target.alpha != 0.0) {
      const Network<double> p = to_unit_slope(net, target);
      AffineTarget<double> unit_slope = target;
      unit_slope.alpha = 1.0;
      unit_slope.beta = 0.0;
      const double via_p = target.alpha * target.alpha * loss(p, unit_slope);
      add("unit_slope_rescaling", relative_gap(via_p, base) <= 1e-12,
          {{"direct", base}, {"rescaled", via_p}});
    }
    {
      const Network<double> q = to_unit_interval(net, target);
      const AffineTarget<double> unit_interval{
          target.alpha * target.length(), target.alpha * target.t0 + target.beta,
          0.0, 1.0};
      const double via_q = target.length() * loss(q, unit_interval);
      add("unit_interval_rescaling", relative_gap(via_q, base) <= 1e-12,
          {{"direct", base}, {"rescaled", via_q}});
    }
    if (net.activation.kind == ActivationKind::LeakyRelu) {
      Network<double> dup = make_leaky_duplication(net);
      const double via_dup = loss(dup, target);
      add("kink_duplication", relative_gap(via_dup, base) <= 1e-12,
          {{"direct", base}, {"duplicated", via_dup}});
    }
    if (net.activation.kind != ActivationKind::Quadratic && target.alpha != 0.0) {
      const RecurrenceReport rep =
          lemma_recurrence_check(realize(net, target, tol), target, tol);
      add("segment_mean_recurrence", !rep.segment_means_ok || rep.recurrence_ok,
          {{"segment_means_ok", rep.segment_means_ok},
           {"recurrence_ok", rep.recurrence_ok}});
      add("alternating_length_identity",
          !rep.alternating_sum_applicable || rep.alternating_sum_ok,
          {{"applicable", rep.alternating_sum_applicable},
           {"x_moment_zero", rep.x_moment_zero}});
    }
  }

  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c["pass"].get<bool>();
  return nlohmann::json{
      {"suite", va.suite}, {"checks", std::move(checks)}, {"all_pass", all_pass}};
}

std::string trajectory_csv(const TrajectoryRecord& rec, bool with_params) {
  std::ostringstream os;
  os << "iter,loss,grad_norm";
  if (with_params && !rec.iterates.empty()) {
    const int n = rec.iterates.front().size();
    for (int j = 1; j <= n; ++j) os << ",w" << j;
    for (int j = 1; j <= n; ++j) os << ",b" << j;
    for (int j = 1; j <= n; ++j) os << ",v" << j;
    os << ",c";
  }
  os << "\n";
  for (std::size_t i = 0; i < rec.iterates.size(); ++i) {
    os << rec.steps[i] << "," << format_double(rec.losses[i]) << ","
       << format_double(rec.grad_norms[i]);
    if (with_params) {
      const Network<double>& net = rec.iterates[i];
      for (int j = 0; j < net.size(); ++j) os << "," << format_double(net.w[j]);
      for (int j = 0; j < net.size(); ++j) os << "," << format_double(net.b[j]);
      for (int j = 0; j < net.size(); ++j) os << "," << format_double(net.v[j]);
      os << "," << format_double(net.c);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Loss-landscape toolkit for one-hidden-layer networks on an interval"};
  app.require_subcommand(1);

  const char* env_mode = std::getenv("LANDSCAPE_MODE");
  std::string mode_text = env_mode ? env_mode : "float";
  double tol_struct = -1.0;
  double tol_grad = -1.0;
  std::string out_path;
  unsigned long long seed = 0;
  app.add_option("--mode", mode_text, "arithmetic mode: float or rational");
  app.add_option("--tol-struct", tol_struct, "override the structural tolerance");
  app.add_option("--tol-grad", tol_grad, "override the gradient-zero tolerance");
  app.add_option("--out", out_path, "write output to this file instead of stdout");
  app.add_option("--seed", seed, "seed for randomized searches and sweeps");

  std::string net_path, target_path;

  auto* eval_cmd = app.add_subcommand("eval", "closed-form loss of a network");
  eval_cmd->add_option("network", net_path, "network JSON file")->required();
  eval_cmd->add_option("target", target_path, "target JSON file")->required();
  eval_cmd->fallthrough();

  auto* grad_cmd = app.add_subcommand("grad", "right-hand generalized gradient");
  grad_cmd->add_option("network", net_path, "network JSON file")->required();
  grad_cmd->add_option("target", target_path, "target JSON file")->required();
  grad_cmd->fallthrough();

  auto* classify_cmd =
      app.add_subcommand("classify", "critical-point classification");
  classify_cmd->add_option("network", net_path, "network JSON file")->required();
  classify_cmd->add_option("target", target_path, "target JSON file")->required();
  classify_cmd->fallthrough();

  ConstructArgs ca;
  auto* construct_cmd =
      app.add_subcommand("construct", "build a critical point of a chosen family");
  construct_cmd
      ->add_option("--family", ca.family,
                   "locmin, saddle, trivial-saddle, leaky-saddle, quad-saddle, or "
                   "quad-global")
      ->required();
  construct_cmd->add_option("--width", ca.width, "number of neurons");
  construct_cmd->add_option("--n", ca.n, "interior breakpoint count");
  construct_cmd->add_option("--sigma", ca.sigma, "leading weight sign, +1 or -1");
  construct_cmd->add_option("--gamma", ca.gamma, "leaky negative-side slope");
  construct_cmd->add_option("--kind", ca.kind, "trivial-saddle witness kind");
  construct_cmd->add_option("--kinds", ca.kinds, "per-neuron kind list")
      ->delimiter(',');
  construct_cmd->add_option("--split", ca.split, "neurons per breakpoint cluster")
      ->delimiter(',');
  construct_cmd->add_option("--target", ca.target_path,
                            "target JSON file (unit line by default)");
  construct_cmd->fallthrough();

  VerifyArgs va;
  auto* verify_cmd =
      app.add_subcommand("verify", "numerical cross-checks of the closed forms");
  verify_cmd->add_option("network", net_path, "network JSON file")->required();
  verify_cmd->add_option("target", target_path, "target JSON file")->required();
  verify_cmd
      ->add_option("--suite", va.suite,
                   "gradient, hessian, escape, identities, or all")
      ->check(CLI::IsMember({"gradient", "hessian", "escape", "identities", "all"}));
  verify_cmd->add_option("--subdivisions", va.subdivisions, "quadrature panels");
  verify_cmd->add_option("--fd-step", va.fd_step, "finite-difference step");
  verify_cmd->add_option("--radius", va.radius, "escape search radius");
  verify_cmd->add_option("--trials", va.trials, "escape search samples");
  verify_cmd->fallthrough();

  SimConfig sim;
  bool with_params = false;
  auto* descend_cmd = app.add_subcommand("descend", "follow the generalized gradient");
  descend_cmd->add_option("network", net_path, "starting network JSON file")->required();
  descend_cmd->add_option("target", target_path, "target JSON file")->required();
  descend_cmd->add_option("--step", sim.step_size, "step size");
  descend_cmd->add_option("--iters", sim.max_iters, "iteration cap");
  descend_cmd->add_option("--stop", sim.stop_grad_norm, "gradient stop threshold");
  descend_cmd->add_option("--record-every", sim.record_every, "snapshot stride");
  descend_cmd->add_flag("--params", with_params, "append parameters to the CSV");
  descend_cmd->fallthrough();

  RandomInitSpec rs;
  std::string sweep_activation = "relu";
  std::string inits_path;
  std::string sweep_target_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "many descents, aggregated");
  sweep_cmd->add_option("--count", rs.count, "number of random starts");
  sweep_cmd->add_option("--width", rs.width, "neurons per random start");
  sweep_cmd->add_option("--activation", sweep_activation, "relu, leaky, or quadratic")
      ->check(CLI::IsMember({"relu", "leaky", "quadratic"}));
  sweep_cmd->add_option("--gamma", rs.leak, "leaky negative-side slope");
  sweep_cmd->add_option("--scale", rs.scale, "standard deviation of the draw");
  sweep_cmd->add_option("--inits", inits_path,
                        "JSON array of starting networks (overrides the random spec)");
  sweep_cmd->add_option("--target", sweep_target_path,
                        "target JSON file (unit line by default)");
  sweep_cmd->add_option("--step", sim.step_size, "step size");
  sweep_cmd->add_option("--iters", sim.max_iters, "iteration cap");
  sweep_cmd->add_option("--stop", sim.stop_grad_norm, "gradient stop threshold");
  sweep_cmd->add_option("--record-every", sim.record_every, "snapshot stride");
  sweep_cmd->fallthrough();

  int grid = 100;
  auto* realize_cmd =
      app.add_subcommand("realize", "sample the realization as CSV");
  realize_cmd->add_option("network", net_path, "network JSON file")->required();
  realize_cmd->add_option("target", target_path, "target JSON file")->required();
  realize_cmd->add_option("--grid", grid, "number of sample points");
  realize_cmd->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const Mode mode = parse_mode(mode_text);
    Tolerances tol;
    if (tol_struct >= 0.0) tol.struct_rel = tol_struct;
    if (tol_grad >= 0.0) tol.grad_abs = tol_grad;
    va.seed = seed;
    sim.seed = seed;

    auto require_float = [&](const char* what) {
      if (mode == Mode::Rational)
        throw std::invalid_argument(
            std::string("mode: ") + what +
            " uses floating-point search and is unavailable in rational mode");
    };

    if (app.got_subcommand(eval_cmd)) {
      const nlohmann::json net_j = load_json(net_path);
      const nlohmann::json target_j = load_json(target_path);
      nlohmann::json result;
      if (mode == Mode::Rational) {
        const auto net = network_from_json<ExactScalar>(net_j);
        const auto target = target_from_json<ExactScalar>(target_j);
        result = nlohmann::json{{"loss", scalar_to_json(loss(net, target, tol))}};
      } else {
        const auto net = network_from_json<double>(net_j);
        const auto target = target_from_json<double>(target_j);
        result = nlohmann::json{{"loss", scalar_to_json(loss(net, target, tol))}};
      }
      emit(result.dump(2), out_path, out);
    } else if (app.got_subcommand(grad_cmd)) {
      const nlohmann::json net_j = load_json(net_path);
      const nlohmann::json target_j = load_json(target_path);
      nlohmann::json result;
      if (mode == Mode::Rational) {
        const auto net = network_from_json<ExactScalar>(net_j);
        const auto target = target_from_json<ExactScalar>(target_j);
        result = gradient_to_json(generalized_gradient(net, target, tol));
      } else {
        const auto net = network_from_json<double>(net_j);
        const auto target = target_from_json<double>(target_j);
        result = gradient_to_json(generalized_gradient(net, target, tol));
      }
      emit(result.dump(2), out_path, out);
    } else if (app.got_subcommand(classify_cmd)) {
      const nlohmann::json net_j = load_json(net_path);
      const nlohmann::json target_j = load_json(target_path);
      nlohmann::json result;
      if (mode == Mode::Rational) {
        const auto net = network_from_json<ExactScalar>(net_j);
        const auto target = target_from_json<ExactScalar>(target_j);
        result = classification_to_json(classify(net, target, tol));
      } else {
        const auto net = network_from_json<double>(net_j);
        const auto target = target_from_json<double>(target_j);
        result = classification_to_json(classify(net, target, tol));
      }
      emit(result.dump(2), out_path, out);
    } else if (app.got_subcommand(construct_cmd)) {
      const nlohmann::json result = mode == Mode::Rational
                                        ? network_to_json(build_family<ExactScalar>(ca))
                                        : network_to_json(build_family<double>(ca));
      emit(result.dump(2), out_path, out);
    } else if (app.got_subcommand(verify_cmd)) {
      require_float("verify");
      const auto net = network_from_json<double>(load_json(net_path));
      const auto target = target_from_json<double>(load_json(target_path));
      emit(run_verify(net, target, va, tol).dump(2), out_path, out);
    } else if (app.got_subcommand(descend_cmd)) {
      require_float("descend");
      const auto net = network_from_json<double>(load_json(net_path));
      const auto target = target_from_json<double>(load_json(target_path));
      const TrajectoryRecord rec = run_gd(net, target, sim);
      emit(trajectory_csv(rec, with_params), out_path, out);
    } else if (app.got_subcommand(sweep_cmd)) {
      require_float("sweep");
      const AffineTarget<double> target = load_target<double>(sweep_target_path);
      SweepSummary summary;
      if (!inits_path.empty()) {
        const nlohmann::json list = load_json(inits_path);
        if (!list.is_array())
          throw std::invalid_argument("inits: expected a JSON array of networks");
        std::vector<Network<double>> inits;
        for (const auto& item : list) inits.push_back(network_from_json<double>(item));
        summary = sweep(inits, target, sim);
      } else {
        if (sweep_activation == "relu") {
          rs.activation = ActivationKind::Relu;
        } else if (sweep_activation == "leaky") {
          rs.activation = ActivationKind::LeakyRelu;
        } else {
          rs.activation = ActivationKind::Quadratic;
        }
        summary = sweep(rs, target, sim);
      }
      emit(sweep_to_json(summary).dump(2), out_path, out);
    } else if (app.got_subcommand(realize_cmd)) {
      const nlohmann::json net_j = load_json(net_path);
      const nlohmann::json target_j = load_json(target_path);
      const std::string csv = mode == Mode::Rational
                                  ? run_realize<ExactScalar>(net_j, target_j, grid, tol)
                                  : run_realize<double>(net_j, target_j, grid, tol);
      if (out_path.empty()) {
        out << csv;
      } else {
        std::ofstream f(out_path);
        if (!f)
          throw std::invalid_argument("output file '" + out_path +
                                      "' cannot be opened");
        f << csv;
      }
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace landscape
