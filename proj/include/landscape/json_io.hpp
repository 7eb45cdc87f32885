#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "landscape/classifier.hpp"
#include "landscape/descent.hpp"
#include "landscape/exactcalc.hpp"
#include "landscape/model.hpp"
#include "landscape/verify.hpp"

namespace landscape {

// Parses a numeric literal: "p/q" fractions and "a/b+c/d*sqrt(n)" radical
// strings (the exact scalar's own print format). Throws std::invalid_argument
// on anything else.
ExactScalar parse_exact_literal(const std::string& text);

// Reads one scalar from a JSON value; the field name prefixes any diagnostic.
// The double form accepts numbers and numeric strings; the exact form accepts
// integers and numeric strings and rejects non-integer numbers.
template <class S>
S scalar_from_json(const nlohmann::json& j, const std::string& field);

template <>
double scalar_from_json<double>(const nlohmann::json& j, const std::string& field);
template <>
ExactScalar scalar_from_json<ExactScalar>(const nlohmann::json& j,
                                          const std::string& field);

inline nlohmann::json scalar_to_json(double v) { return nlohmann::json(v); }
inline nlohmann::json scalar_to_json(const ExactScalar& v) {
  return nlohmann::json(v.to_string());
}

template <class S>
Network<S> network_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("network: expected a JSON object");
  Network<S> net;

  if (!j.contains("activation") || !j["activation"].is_object())
    throw std::invalid_argument("network.activation: expected an object");
  const auto& act = j["activation"];
  if (!act.contains("kind") || !act["kind"].is_string())
    throw std::invalid_argument("network.activation.kind: expected a string");
  const std::string kind = act["kind"].get<std::string>();
  if (kind == "relu") {
    net.activation.kind = ActivationKind::Relu;
  } else if (kind == "leaky") {
    net.activation.kind = ActivationKind::LeakyRelu;
  } else if (kind == "quadratic") {
    net.activation.kind = ActivationKind::Quadratic;
  } else {
    throw std::invalid_argument("network.activation.kind: unknown value '" + kind + "'");
  }
  if (net.activation.kind == ActivationKind::LeakyRelu) {
    if (!act.contains("gamma"))
      throw std::invalid_argument(
          "network.activation.gamma: required for the leaky activation");
    net.activation.leak = scalar_from_json<S>(act["gamma"], "network.activation.gamma");
  }

  auto read_array = [&](const char* name, std::vector<S>& out) {
    if (!j.contains(name) || !j[name].is_array())
      throw std::invalid_argument(std::string("network.") + name +
                                  ": expected an array");
    for (const auto& item : j[name])
      out.push_back(scalar_from_json<S>(item, std::string("network.") + name));
  };
  read_array("w", net.w);
  read_array("b", net.b);
  read_array("v", net.v);
  if (net.w.size() != net.b.size() || net.w.size() != net.v.size())
    throw std::invalid_argument("network.w/b/v: lengths disagree");

  if (!j.contains("c")) throw std::invalid_argument("network.c: required");
  net.c = scalar_from_json<S>(j["c"], "network.c");
  net.validate();
  return net;
}

template <class S>
AffineTarget<S> target_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("target: expected a JSON object");
  AffineTarget<S> t;
  auto read = [&](const char* name, S& out) {
    if (!j.contains(name))
      throw std::invalid_argument(std::string("target.") + name + ": required");
    out = scalar_from_json<S>(j[name], std::string("target.") + name);
  };
  read("alpha", t.alpha);
  read("beta", t.beta);
  read("t0", t.t0);
  read("t1", t.t1);
  t.validate();
  return t;
}

template <class S>
nlohmann::json network_to_json(const Network<S>& net) {
  nlohmann::json act{{"kind", to_string(net.activation.kind)}};
  if (net.activation.kind == ActivationKind::LeakyRelu)
    act["gamma"] = scalar_to_json(net.activation.leak);
  nlohmann::json w = nlohmann::json::array();
  nlohmann::json b = nlohmann::json::array();
  nlohmann::json v = nlohmann::json::array();
  for (int j = 0; j < net.size(); ++j) {
    w.push_back(scalar_to_json(net.w[j]));
    b.push_back(scalar_to_json(net.b[j]));
    v.push_back(scalar_to_json(net.v[j]));
  }
  return nlohmann::json{{"activation", act},
                        {"w", w},
                        {"b", b},
                        {"v", v},
                        {"c", scalar_to_json(net.c)}};
}

template <class S>
nlohmann::json target_to_json(const AffineTarget<S>& t) {
  return nlohmann::json{{"alpha", scalar_to_json(t.alpha)},
                        {"beta", scalar_to_json(t.beta)},
                        {"t0", scalar_to_json(t.t0)},
                        {"t1", scalar_to_json(t.t1)}};
}

template <class S>
nlohmann::json gradient_to_json(const Gradient<S>& g) {
  nlohmann::json dw = nlohmann::json::array();
  nlohmann::json db = nlohmann::json::array();
  nlohmann::json dv = nlohmann::json::array();
  for (const S& x : g.dw) dw.push_back(scalar_to_json(x));
  for (const S& x : g.db) db.push_back(scalar_to_json(x));
  for (const S& x : g.dv) dv.push_back(scalar_to_json(x));
  return nlohmann::json{{"dw", dw},
                        {"db", db},
                        {"dv", dv},
                        {"dc", scalar_to_json(g.dc)},
                        {"inf_norm", gradient_inf_norm(g)}};
}

template <class S>
nlohmann::json classification_to_json(const ClassificationResult<S>& res) {
  nlohmann::json out;
  out["verdict"] = to_string(res.verdict);
  out["predicted_loss"] =
      res.predicted_loss ? scalar_to_json(*res.predicted_loss) : nlohmann::json();
  out["loss"] = scalar_to_json(res.loss);
  out["saddle_order"] =
      res.saddle_order ? nlohmann::json(*res.saddle_order) : nlohmann::json();
  out["sigma"] = res.sigma ? nlohmann::json(*res.sigma) : nlohmann::json();
  out["gradient_norm"] = res.gradient_norm;
  out["gradient_zero"] = res.gradient_zero;
  out["gradient_consistent"] = res.gradient_consistent;
  out["centered"] = res.center.centered;
  out["expected_offset"] = scalar_to_json(res.center.expected_offset);
  out["actual_offset"] = scalar_to_json(res.center.actual_offset);
  nlohmann::json neurons = nlohmann::json::array();
  for (const auto& rep : res.neurons) {
    nlohmann::json item{{"index", rep.index},
                        {"kind", to_string(rep.kind)},
                        {"flat", rep.flat}};
    item["breakpoint"] =
        rep.has_breakpoint ? scalar_to_json(rep.breakpoint) : nlohmann::json();
    neurons.push_back(std::move(item));
  }
  out["neurons"] = std::move(neurons);
  out["evidence"] = res.evidence;
  return out;
}

nlohmann::json probe_to_json(const HessianProbeResult& probe);
nlohmann::json escape_to_json(const EscapeResult& esc);
nlohmann::json recurrence_to_json(const RecurrenceReport& rep);
nlohmann::json sweep_to_json(const SweepSummary& summary);

}  // namespace landscape
