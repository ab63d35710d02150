#include "crio/report.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "crio/angles.hpp"
#include "crio/version.hpp"

namespace crio {

namespace {

std::string bits(std::uint64_t v, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((v >> (width - 1 - i)) & 1U) s[i] = '1';
  }
  return s;
}

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("config: " + what); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) bad("expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const Json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

Json provenance(const Json& config) {
  return Json{{"version", kVersion}, {"config_hash", config_hash(config)}, {"config", config}};
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const PauliAxis& axis) { return Json::array({axis.x(), axis.y(), axis.z()}); }

Json to_json(const QuantumState& state) {
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) amps.push_back(to_json(state.amplitudes()(i)));
  return Json{{"labels", state.labels()}, {"amplitudes", std::move(amps)}};
}

Json to_json(const Stator& stator) {
  Json terms = Json::array();
  for (const auto& t : stator.terms()) {
    terms.push_back(Json{{"control_bits", bits(t.control_bits, stator.num_controls())},
                         {"word", bits(t.word, stator.num_targets())},
                         {"coeff", to_json(t.coeff)}});
  }
  Json axes = Json::array();
  for (const auto& a : stator.target_axes()) axes.push_back(to_json(a));
  return Json{{"controls", stator.control_labels()},
              {"targets", stator.target_labels()},
              {"axes", std::move(axes)},
              {"terms", std::move(terms)},
              {"text", stator.to_string()}};
}

Json to_json(const Branch& branch) {
  Json outcomes = Json::array();
  for (const auto& r : branch.outcomes) {
    outcomes.push_back(Json{{"qubit", r.qubit},
                            {"basis", std::string(to_string(r.basis))},
                            {"outcome", r.outcome},
                            {"probability", r.probability}});
  }
  Json transcript = Json::array();
  for (const auto& m : branch.transcript) {
    transcript.push_back(Json{{"from", m.from}, {"to", m.to}, {"step", m.step}, {"bit", m.payload}});
  }
  return Json{{"outcome_bits", branch.outcome_bits()},
              {"probability", branch.probability},
              {"fidelity", branch.fidelity},
              {"target_fidelities", branch.target_fidelities},
              {"outcomes", std::move(outcomes)},
              {"corrections", branch.corrections},
              {"transcript", std::move(transcript)}};
}

Json to_json(const ProtocolResult& result) {
  Json branches = Json::array();
  for (const auto& b : result.branches) branches.push_back(to_json(b));
  return Json{{"permitted", result.permitted},
              {"completed", result.completed},
              {"branch_count", result.branches.size()},
              {"total_probability", result.total_probability()},
              {"min_fidelity", result.min_fidelity()},
              {"branches", std::move(branches)}};
}

Json to_json(const GMResult& result) {
  Json argmax{{"thetas", result.argmax.thetas}};
  if (result.argmax.phis) argmax["phis"] = *result.argmax.phis;
  return Json{{"lambda_sq", result.lambda_sq},
              {"G", result.G},
              {"argmax", std::move(argmax)},
              {"restarts_used", result.restarts_used},
              {"converged", result.converged},
              {"sweeps", result.trace.size()}};
}

Json to_json(const PovmParams& p) {
  return Json{{"theta1", p.theta1}, {"theta2", p.theta2}, {"phi1", p.phi1},     {"phi2", p.phi2},
              {"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"omega1", p.omega1}, {"omega2", p.omega2}};
}

Json to_json(const ControlPowerReport& report) {
  Json fav = Json::array();
  for (auto [j, k] : report.favorable_branches) fav.push_back(Json::array({j, k}));
  return Json{{"target_alpha", report.target_alpha},
              {"success_rate", report.success_rate},
              {"witness_params", to_json(report.witness)},
              {"favorable_branches", std::move(fav)},
              {"candidates_examined", report.candidates_examined}};
}

Json to_json(const ControlDenialReport& report) {
  return Json{{"reduced_purity", report.reduced_purity},
              {"min_fidelity_by_guess", report.min_fidelity_by_guess},
              {"mean_fidelity_by_guess", report.mean_fidelity_by_guess},
              {"best_guess", report.best_guess},
              {"denial_effective", report.denial_effective}};
}

std::string state_csv(const QuantumState& state) {
  std::ostringstream out;
  out << "index,bits,real,imag\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
    const cplx a = state.amplitudes()(i);
    out << i << ',' << bits(static_cast<std::uint64_t>(i), state.num_qubits()) << ',' << a.real() << ','
        << a.imag() << '\n';
  }
  return out.str();
}

QuantumState state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("amplitudes")) bad("state needs labels and amplitudes");
  std::vector<std::string> labels;
  for (const auto& l : j.at("labels")) {
    if (!l.is_string()) bad("labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  const auto& a = j.at("amplitudes");
  if (!a.is_array()) bad("amplitudes must be an array");
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) amps(static_cast<Eigen::Index>(i)) = complex_from_json(a[i]);
  return {std::move(labels), std::move(amps)};
}

double angle_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_angle(j.get<std::string>());
  bad("angle must be a number or a string such as \"3pi/4\"");
}

PauliAxis axis_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "x") return PauliAxis::x_axis();
    if (s == "y") return PauliAxis::y_axis();
    if (s == "z") return PauliAxis::z_axis();
    bad("unknown axis '" + s + "'");
  }
  if (!j.is_array() || j.size() != 3) bad("axis must be [x, y, z]");
  for (const auto& c : j) {
    if (!c.is_number()) bad("axis components must be numbers");
  }
  return PauliAxis::normalized(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Vec2 target_from_json(const Json& j) {
  const double h = 1.0 / std::numbers::sqrt2;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "0") return {1.0, 0.0};
    if (s == "1") return {0.0, 1.0};
    if (s == "+") return {h, h};
    if (s == "-") return {h, -h};
    bad("unknown target '" + s + "'");
  }
  if (!j.is_array() || j.size() != 2) bad("target must be [[re, im], [re, im]]");
  Vec2 v{complex_from_json(j[0]), complex_from_json(j[1])};
  const double norm = v.norm();
  if (norm == 0.0) bad("target must be nonzero");
  // Leave already-normalized input untouched so dumps round-trip bit for bit.
  return std::abs(norm - 1.0) <= 1e-12 ? v : Vec2(v / norm);
}

ProtocolRunConfig protocol_config_from_json(const Json& j) {
  if (!j.is_object()) bad("expected an object");
  ProtocolRunConfig c;
  try {
    c.crio.N = j.value("N", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    c.crio.permitted = j.value("permitted", true);
    c.crio.denial_guess = j.value("denial_guess", 0);
    const std::string mode = j.value("mode", std::string("enumerate"));
    if (mode == "enumerate") {
      c.mode = RunMode::Enumerate;
    } else if (mode == "sample") {
      c.mode = RunMode::Sample;
    } else {
      bad("mode must be enumerate or sample");
    }
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  if (c.crio.N < 1) bad("N must be at least 1");
  const auto n = static_cast<std::size_t>(c.crio.N);
  Rng rng(c.seed);
  if (j.contains("axes")) {
    for (const auto& a : j.at("axes")) c.crio.axes.push_back(axis_from_json(a));
  } else {
    for (std::size_t i = 0; i < n; ++i) c.crio.axes.push_back(PauliAxis::random(rng));
  }
  if (j.contains("betas")) {
    for (const auto& b : j.at("betas")) c.crio.betas.push_back(angle_from_json(b));
  } else {
    for (std::size_t i = 0; i < n; ++i) c.crio.betas.push_back(2 * std::numbers::pi * uniform01(rng));
  }
  if (j.contains("target_states")) {
    for (const auto& t : j.at("target_states")) c.crio.targets.push_back(target_from_json(t));
  } else {
    for (std::size_t i = 0; i < n; ++i) c.crio.targets.push_back(QuantumState::random({"O"}, rng).amplitudes());
  }
  if (c.crio.axes.size() != n || c.crio.betas.size() != n || c.crio.targets.size() != n) {
    bad("axes, betas and target_states need one entry per group");
  }
  if (j.contains("controlled_groups") && !j.at("controlled_groups").is_null()) {
    std::set<int> groups;
    for (const auto& g : j.at("controlled_groups")) {
      if (!g.is_number_integer()) bad("controlled_groups must be integers");
      groups.insert(g.get<int>());
    }
    c.crio.controlled_groups = std::move(groups);
  }
  return c;
}

Json to_json(const ProtocolRunConfig& config) {
  Json axes = Json::array();
  for (const auto& a : config.crio.axes) axes.push_back(to_json(a));
  Json targets = Json::array();
  for (const auto& t : config.crio.targets) targets.push_back(Json::array({to_json(t(0)), to_json(t(1))}));
  Json j{{"N", config.crio.N},
         {"axes", std::move(axes)},
         {"betas", config.crio.betas},
         {"target_states", std::move(targets)},
         {"mode", config.mode == RunMode::Enumerate ? "enumerate" : "sample"},
         {"seed", config.seed},
         {"permitted", config.crio.permitted},
         {"denial_guess", config.crio.denial_guess}};
  if (config.crio.controlled_groups) {
    j["controlled_groups"] = *config.crio.controlled_groups;
  } else {
    j["controlled_groups"] = nullptr;
  }
  return j;
}

}  // namespace crio
