#include "landscape/json_io.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace landscape {

namespace {

bool integer_text(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Rational parse_rational_text(const std::string& text) {
  const auto slash = text.find('/');
  std::string num_text = slash == std::string::npos ? text : text.substr(0, slash);
  if (!num_text.empty() && num_text[0] == '+') num_text.erase(0, 1);
  if (!integer_text(num_text))
    throw std::invalid_argument("malformed numeric literal '" + text + "'");
  const BigInt num(num_text);
  if (slash == std::string::npos) return Rational(num);
  const std::string den_text = text.substr(slash + 1);
  if (!integer_text(den_text) || den_text[0] == '+' || den_text[0] == '-')
    throw std::invalid_argument("malformed denominator in '" + text + "'");
  const BigInt den(den_text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return Rational(num, den);
}

}  // namespace

ExactScalar parse_exact_literal(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty numeric literal");

  const auto star = s.find("*sqrt(");
  if (star == std::string::npos) {
    if (s.find("sqrt") != std::string::npos)
      throw std::invalid_argument("radical literal needs the form a+b*sqrt(d), got '" +
                                  text + "'");
    return ExactScalar(parse_rational_text(s));
  }
  if (s.back() != ')')
    throw std::invalid_argument("unterminated sqrt in '" + text + "'");
  const std::string rad_text = s.substr(star + 6, s.size() - star - 7);
  if (!integer_text(rad_text) || rad_text[0] == '+' || rad_text[0] == '-')
    throw std::invalid_argument("radicand must be a positive integer in '" + text + "'");
  const BigInt radicand(rad_text);
  if (radicand <= 0)
    throw std::invalid_argument("radicand must be a positive integer in '" + text + "'");

  // The radical coefficient reaches back to the last sign that follows a
  // digit; with no such sign the literal has no separate base term.
  std::size_t split = std::string::npos;
  for (std::size_t i = star; i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') &&
        std::isdigit(static_cast<unsigned char>(s[i - 1]))) {
      split = i;
      break;
    }
  }
  Rational base(0);
  Rational coeff;
  if (split == std::string::npos) {
    coeff = parse_rational_text(s.substr(0, star));
  } else {
    base = parse_rational_text(s.substr(0, split));
    coeff = parse_rational_text(s.substr(split, star - split));
  }
  return ExactScalar(base, coeff, radicand);
}

template <>
double scalar_from_json<double>(const nlohmann::json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_exact_literal(j.get<std::string>()).to_double();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(field + ": " + e.what());
    }
  }
  throw std::invalid_argument(field + ": expected a number or a numeric string");
}

template <>
ExactScalar scalar_from_json<ExactScalar>(const nlohmann::json& j,
                                          const std::string& field) {
  if (j.is_number_integer()) return ExactScalar(j.get<long long>());
  if (j.is_number())
    throw std::invalid_argument(
        field + ": exact arithmetic needs integers or fraction strings, got a "
                "non-integer number");
  if (j.is_string()) {
    try {
      return parse_exact_literal(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(field + ": " + e.what());
    }
  }
  throw std::invalid_argument(field + ": expected an integer or a numeric string");
}

nlohmann::json probe_to_json(const HessianProbeResult& probe) {
  nlohmann::json out;
  out["coordinates"] = probe.coordinates;
  out["determinant"] = probe.determinant;
  out["min_eigenvalue"] = probe.min_eigenvalue;
  out["gamma_factor"] =
      std::isnan(probe.gamma_factor) ? nlohmann::json() : nlohmann::json(probe.gamma_factor);
  out["mu"] = probe.mu;
  out["lambdas"] = probe.lambdas;
  out["eigenvalues"] = probe.eigenvalues;
  return out;
}

nlohmann::json escape_to_json(const EscapeResult& esc) {
  return nlohmann::json{{"direction", esc.direction},
                        {"step", esc.step},
                        {"loss_drop", esc.loss_drop},
                        {"method", esc.method}};
}

nlohmann::json recurrence_to_json(const RecurrenceReport& rep) {
  return nlohmann::json{{"segment_means_ok", rep.segment_means_ok},
                        {"recurrence_ok", rep.recurrence_ok},
                        {"x_moment_zero", rep.x_moment_zero},
                        {"alternating_sum_applicable", rep.alternating_sum_applicable},
                        {"alternating_sum_ok", rep.alternating_sum_ok},
                        {"forces_identity", rep.forces_identity},
                        {"notes", rep.notes}};
}

nlohmann::json sweep_to_json(const SweepSummary& summary) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : summary.entries) {
    entries.push_back(nlohmann::json{{"index", e.index},
                                     {"terminal_loss", e.terminal_loss},
                                     {"terminal_grad_norm", e.terminal_grad_norm},
                                     {"terminal_verdict", e.terminal_verdict},
                                     {"iterations", e.iterations},
                                     {"converged", e.converged},
                                     {"diverged", e.diverged}});
  }
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& bin : summary.histogram) {
    bins.push_back(nlohmann::json{
        {"label", bin.label}, {"value", bin.value}, {"count", bin.count}});
  }
  return nlohmann::json{{"entries", std::move(entries)},
                        {"histogram", std::move(bins)},
                        {"unconverged", summary.unconverged}};
}

}  // namespace landscape
