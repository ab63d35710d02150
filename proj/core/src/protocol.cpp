#include "crio/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crio {

namespace {

using gates::hadamard;
using gates::pauli_x;
using gates::pauli_z;

constexpr double kBranchPruneTol = 1e-12;

std::string group_label(std::string_view prefix, int index) {
  return std::string(prefix) + std::to_string(index);
}

void validate_target(const Vec2& v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kPipelineTol) {
    throw std::invalid_argument("target state must be a normalized qubit vector");
  }
}

QuantumState bell_pair(const std::string& target, const std::string& reference) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(0) = amps(3) = 1.0 / std::numbers::sqrt2;
  return {{target, reference}, std::move(amps)};
}

// Either U|psi> on the target alone or (U (x) I)|Phi+> on (target, reference).
QuantumState expected_factor(const PauliAxis& axis, double angle, const Vec2& input, const std::string& target,
                             const std::string* reference) {
  const Mat2 u = rotation(axis, angle);
  if (reference == nullptr) {
    return QuantumState::single(target, u * input);
  }
  QuantumState pair = bell_pair(target, *reference);
  pair.apply(u, target);
  return pair;
}

QuantumState tensor_all(const std::vector<QuantumState>& parts) {
  QuantumState out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = out.tensor(parts[i]);
  return out;
}

}  // namespace

Session::Session(QuantumState state, const std::map<std::string, Party>* parties)
    : state_(std::move(state)), parties_(parties) {}

void Session::check_owner(std::string_view party, std::string_view qubit) const {
  const auto it = parties_->find(std::string(party));
  if (it == parties_->end()) {
    throw LocalityViolation("unknown party " + std::string(party));
  }
  if (!it->second.owned_qubits.count(std::string(qubit))) {
    throw LocalityViolation(std::string(party) + " does not hold qubit " + std::string(qubit));
  }
}

void Session::apply(std::string_view party, const Mat2& gate, std::string_view qubit, std::string_view note) {
  check_owner(party, qubit);
  state_.apply(gate, qubit);
  (void)note;
}

void Session::apply_controlled(std::string_view party, std::string_view control, std::string_view target,
                               const Mat2& gate, std::string_view note) {
  check_owner(party, control);
  check_owner(party, target);
  state_.apply_controlled(control, target, gate);
  (void)note;
}

void Session::correct(std::string_view party, const Mat2& gate, std::string_view qubit, std::string_view note) {
  check_owner(party, qubit);
  state_.apply(gate, qubit);
  corrections_.push_back(std::string(party) + ": " + std::string(note) + " on " + std::string(qubit));
}

void Session::send(std::string_view from, std::string_view to, std::string_view step, std::string_view qubit) {
  check_owner(from, qubit);
  if (!parties_->count(std::string(to))) {
    throw LocalityViolation("unknown recipient " + std::string(to));
  }
  const auto it = std::find_if(records_.rbegin(), records_.rend(),
                               [&](const MeasurementRecord& r) { return r.qubit == qubit; });
  if (it == records_.rend()) {
    throw std::logic_error(std::string(from) + " has no outcome for " + std::string(qubit));
  }
  messages_.push_back({std::string(from), std::string(to), std::string(step), it->outcome});
}

int Session::received(std::string_view to, std::string_view from, std::string_view step) const {
  for (const auto& m : messages_) {
    if (m.to == to && m.from == from && m.step == step) return m.payload;
  }
  throw std::logic_error(std::string(to) + " got nothing from " + std::string(from) + " in " + std::string(step));
}

void Session::measure(std::string_view party, std::string_view qubit, Basis basis, int outcome) {
  check_owner(party, qubit);
  const MeasurementRecord rec = state_.measure(qubit, basis, outcome);
  probability_ *= rec.probability;
  records_.push_back(rec);
}

std::string Branch::outcome_bits() const {
  std::string bits;
  for (const auto& r : outcomes) bits.push_back(static_cast<char>('0' + r.outcome));
  return bits;
}

double ProtocolResult::total_probability() const {
  double p = 0.0;
  for (const auto& b : branches) p += b.probability;
  return p;
}

double ProtocolResult::min_fidelity() const {
  double f = 1.0;
  for (const auto& b : branches) f = std::min(f, b.fidelity);
  return f;
}

CrioTopology CrioConfig::topology() const {
  if (!controlled_groups) return CrioTopology::full(N);
  return {N, *controlled_groups};
}

LoccProgram::LoccProgram(QuantumState initial, std::vector<Party> parties, std::vector<std::string> kept_labels,
                         std::vector<QuantumState> expected_factors)
    : initial_(std::move(initial)),
      kept_labels_(std::move(kept_labels)),
      expected_factors_(std::move(expected_factors)),
      expected_(tensor_all(expected_factors_)) {
  for (auto& p : parties) {
    for (const auto& q : p.owned_qubits) {
      if (!initial_.has_qubit(q)) {
        throw std::invalid_argument("party " + p.id + " owns unknown qubit " + q);
      }
    }
    const std::string id = p.id;
    if (!parties_.emplace(id, std::move(p)).second) {
      throw std::invalid_argument("duplicate party " + id);
    }
  }
  if (expected_.labels() != kept_labels_) {
    throw std::invalid_argument("expected factors must cover the kept register in order");
  }
}

void LoccProgram::add_action(std::string tag, Action action) {
  steps_.push_back({std::move(tag), std::move(action)});
}

void LoccProgram::add_measurement(std::string tag, std::string party, std::string qubit, Basis basis) {
  steps_.push_back({std::move(tag), Measurement{std::move(party), std::move(qubit), basis}});
}

ProtocolResult LoccProgram::run(const RunOptions& options) const {
  std::vector<Branch> branches;
  Session root(initial_, &parties_);
  if (options.mode == RunMode::Sample) {
    Rng rng(options.seed);
    descend(0, std::move(root), options, &rng, branches);
  } else {
    descend(0, std::move(root), options, nullptr, branches);
  }
  ProtocolResult result{.branches = std::move(branches), .transcript = {}, .permitted = true,
                        .completed = true, .expected = expected_};
  if (options.mode == RunMode::Sample) {
    result.transcript = result.branches.front().transcript;
  }
  return result;
}

void LoccProgram::descend(std::size_t index, Session session, const RunOptions& options, Rng* rng,
                          std::vector<Branch>& out) const {
  for (; index < steps_.size(); ++index) {
    const Step& step = steps_[index];
    if (const auto* action = std::get_if<Action>(&step.body)) {
      (*action)(session);
      if (options.observer) options.observer(step.tag, session);
      continue;
    }
    const auto& m = std::get<Measurement>(step.body);
    const auto p = session.state().outcome_probabilities(m.qubit, m.basis);
    if (rng != nullptr) {
      const std::size_t k = session.records().size();
      const int outcome = k < options.forced_outcomes.size() ? options.forced_outcomes[k]
                                                              : (uniform01(*rng) < p[0] ? 0 : 1);
      session.measure(m.party, m.qubit, m.basis, outcome);
      if (options.observer) options.observer(step.tag, session);
      continue;
    }
    for (int outcome = 0; outcome < 2; ++outcome) {
      if (p[static_cast<std::size_t>(outcome)] <= kBranchPruneTol) continue;
      Session child = session;
      child.measure(m.party, m.qubit, m.basis, outcome);
      if (options.observer) options.observer(step.tag, child);
      descend(index + 1, std::move(child), options, rng, out);
    }
    return;
  }
  out.push_back(finalize(session));
}

Branch LoccProgram::finalize(const Session& session) const {
  QuantumState s = session.state();
  for (const auto& r : session.records()) {
    s = s.contract(r.qubit, basis_vector(r.basis, r.outcome));
  }
  Branch b;
  b.outcomes = session.records();
  b.probability = session.probability();
  b.corrections = session.corrections();
  b.transcript = session.messages();
  b.target_labels = kept_labels_;
  if (s.num_qubits() == kept_labels_.size()) {
    QuantumState pure = s.reordered(kept_labels_);
    b.target_density = pure.amplitudes() * pure.amplitudes().adjoint();
    b.target_state = std::move(pure);
  } else {
    b.target_density = s.reduced_density(kept_labels_);
  }
  b.fidelity = fidelity_with_density(b.target_density, expected_.amplitudes());
  for (const auto& factor : expected_factors_) {
    const Eigen::MatrixXcd rho = s.reduced_density(factor.labels());
    b.target_fidelities.push_back(fidelity_with_density(rho, factor.amplitudes()));
  }
  return b;
}

LoccProgram build_crio_program(const CrioConfig& config, bool attach_references) {
  const int N = config.N;
  if (N < 1) {
    throw std::invalid_argument("N must be at least 1");
  }
  const auto n = static_cast<std::size_t>(N);
  if (config.axes.size() != n || config.betas.size() != n || config.targets.size() != n) {
    throw std::invalid_argument("axes, betas and targets need one entry per group");
  }
  if (config.denial_guess != 0 && config.denial_guess != 1) {
    throw std::invalid_argument("denial guess must be 0 or 1");
  }
  for (const auto& t : config.targets) validate_target(t);
  for (double b : config.betas) {
    if (!std::isfinite(b)) throw std::invalid_argument("rotation angle must be finite");
  }
  const CrioTopology topo = config.topology();
  const Graph graph = crio_graph(topo);

  auto q = [](int i) { return group_label("a", i); };
  auto party = [](int i) { return group_label("A", i); };
  auto tgt = [](int j) { return group_label("O", j); };
  auto ref = [](int j) { return group_label("R", j); };

  QuantumState initial = build_graph_state(graph, vertex_labels(2 * N + 1));
  std::vector<std::string> kept;
  std::vector<QuantumState> expected;
  for (int j = N + 2; j <= 2 * N + 1; ++j) {
    const auto i = static_cast<std::size_t>(j - N - 2);
    const std::string o = tgt(j);
    const std::string r = ref(j);
    if (attach_references) {
      initial = initial.tensor(bell_pair(o, r));
      kept.push_back(o);
      kept.push_back(r);
      expected.push_back(expected_factor(config.axes[i], config.betas[i], config.targets[i], o, &r));
    } else {
      initial = initial.tensor(QuantumState::single(o, config.targets[i]));
      kept.push_back(o);
      expected.push_back(expected_factor(config.axes[i], config.betas[i], config.targets[i], o, nullptr));
    }
  }

  std::vector<Party> parties;
  parties.push_back({party(1), {q(1)}, std::nullopt, std::nullopt});
  for (int k = 2; k <= N + 1; ++k) {
    parties.push_back({party(k), {q(k)}, config.betas[static_cast<std::size_t>(k - 2)], std::nullopt});
  }
  for (int j = N + 2; j <= 2 * N + 1; ++j) {
    parties.push_back({party(j), {q(j), tgt(j)}, std::nullopt, config.axes[static_cast<std::size_t>(j - N - 2)]});
  }
  if (attach_references) {
    Party holder{"Ref", {}, std::nullopt, std::nullopt};
    for (int j = N + 2; j <= 2 * N + 1; ++j) holder.owned_qubits.insert(ref(j));
    parties.push_back(std::move(holder));
  }

  LoccProgram prog(std::move(initial), std::move(parties), std::move(kept), std::move(expected));

  for (int j = N + 2; j <= 2 * N + 1; ++j) {
    const Mat2 sigma = pauli_axis_matrix(config.axes[static_cast<std::size_t>(j - N - 2)]);
    prog.add_action("STEP1", [=](Session& s) { s.apply_controlled(party(j), q(j), tgt(j), sigma, "controlled sigma_n"); });
  }
  for (int k = 3; k <= N + 1; ++k) {
    prog.add_action("STEP2", [=](Session& s) { s.apply(party(k), hadamard(), q(k), "H"); });
  }

  std::vector<int> receivers;
  for (int k = 2; k <= N + 1; ++k) {
    if (topo.controls(k)) receivers.push_back(k);
  }
  if (config.permitted) {
    prog.add_measurement("STEP3", party(1), q(1), Basis::X);
    prog.add_action("STEP3", [=](Session& s) {
      for (int k : receivers) s.send(party(1), party(k), "STEP3", q(1));
      for (int k : receivers) {
        if (s.received(party(k), party(1), "STEP3")) s.correct(party(k), pauli_x(), q(k), "sigma_x");
      }
    });
  } else if (config.denial_guess == 1) {
    prog.add_action("STEP3", [=](Session& s) {
      for (int k : receivers) s.correct(party(k), pauli_x(), q(k), "sigma_x (guess)");
    });
  }

  for (int j = N + 2; j <= 2 * N + 1; ++j) {
    const int k = j - N;
    prog.add_measurement("STEP4", party(j), q(j), Basis::X);
    prog.add_action("STEP4", [=](Session& s) {
      s.send(party(j), party(k), "STEP4", q(j));
      if (s.received(party(k), party(j), "STEP4")) s.correct(party(k), pauli_z(), q(k), "sigma_z");
    });
  }
  for (int k = 2; k <= N + 1; ++k) {
    const Mat2 r = rotation(PauliAxis::x_axis(), config.betas[static_cast<std::size_t>(k - 2)]);
    prog.add_action("STEP5", [=](Session& s) { s.apply(party(k), r, q(k), "exp(i beta sigma_x)"); });
  }
  for (int k = 2; k <= N + 1; ++k) {
    const int j = k + N;
    const Mat2 fix = rotation(config.axes[static_cast<std::size_t>(k - 2)], std::numbers::pi / 2);
    prog.add_measurement("STEP6", party(k), q(k), Basis::Z);
    prog.add_action("STEP6", [=](Session& s) {
      s.send(party(k), party(j), "STEP6", q(k));
      if (s.received(party(j), party(k), "STEP6")) s.correct(party(j), fix, tgt(j), "i sigma_n");
    });
  }
  return prog;
}

ProtocolResult run_crio(const CrioConfig& config, const RunOptions& options) {
  const LoccProgram prog = build_crio_program(config, options.attach_references);
  ProtocolResult result = prog.run(options);
  result.permitted = config.permitted;
  result.completed = config.permitted;
  return result;
}

ProtocolResult run_tripartite(const PauliAxis& axis, double alpha, const Vec2& target, bool permitted,
                              const RunOptions& options) {
  validate_target(target);
  const bool refs = options.attach_references;
  QuantumState initial = build_graph_state(crio_graph(CrioTopology::full(1)), {"a", "b", "c"});
  const std::string ref = "R";
  if (refs) {
    initial = initial.tensor(bell_pair("C", ref));
  } else {
    initial = initial.tensor(QuantumState::single("C", target));
  }
  std::vector<Party> parties{{"Alice", {"a"}, std::nullopt, std::nullopt},
                             {"Bob", {"b"}, alpha, std::nullopt},
                             {"Charlie", {"c", "C"}, std::nullopt, axis}};
  if (refs) parties.push_back({"Ref", {ref}, std::nullopt, std::nullopt});
  std::vector<std::string> kept{"C"};
  if (refs) kept.push_back(ref);
  LoccProgram prog(std::move(initial), std::move(parties), std::move(kept),
                   {expected_factor(axis, alpha, target, "C", refs ? &ref : nullptr)});

  const Mat2 sigma = pauli_axis_matrix(axis);
  prog.add_action("STEP1", [=](Session& s) { s.apply_controlled("Charlie", "c", "C", sigma, "controlled sigma_n"); });
  if (permitted) {
    prog.add_measurement("STEP3", "Alice", "a", Basis::X);
    prog.add_action("STEP3", [](Session& s) {
      s.send("Alice", "Bob", "STEP3", "a");
      if (s.received("Bob", "Alice", "STEP3")) s.correct("Bob", pauli_x(), "b", "sigma_x");
    });
  }
  prog.add_measurement("STEP4", "Charlie", "c", Basis::X);
  prog.add_action("STEP4", [](Session& s) {
    s.send("Charlie", "Bob", "STEP4", "c");
    if (s.received("Bob", "Charlie", "STEP4")) s.correct("Bob", pauli_z(), "b", "sigma_z");
  });
  const Mat2 r = rotation(PauliAxis::x_axis(), alpha);
  prog.add_action("STEP5", [=](Session& s) { s.apply("Bob", r, "b", "exp(i alpha sigma_x)"); });
  const Mat2 fix = rotation(axis, std::numbers::pi / 2);
  prog.add_measurement("STEP6", "Bob", "b", Basis::Z);
  prog.add_action("STEP6", [=](Session& s) {
    s.send("Bob", "Charlie", "STEP6", "b");
    if (s.received("Charlie", "Bob", "STEP6")) s.correct("Charlie", fix, "C", "i sigma_n");
  });

  ProtocolResult result = prog.run(options);
  result.permitted = permitted;
  result.completed = permitted;
  return result;
}

ProtocolResult run_fivepartite(const std::array<PauliAxis, 2>& axes, double alpha, double beta,
                               const std::array<Vec2, 2>& targets, bool permitted, const RunOptions& options) {
  validate_target(targets[0]);
  validate_target(targets[1]);
  const bool refs = options.attach_references;
  QuantumState initial = build_graph_state(crio_graph(CrioTopology::full(2)), {"a", "b", "c", "d", "e"});
  const std::string rd = "RD";
  const std::string re = "RE";
  std::vector<std::string> kept;
  if (refs) {
    initial = initial.tensor(bell_pair("D", rd)).tensor(bell_pair("E", re));
    kept = {"D", rd, "E", re};
  } else {
    initial = initial.tensor(QuantumState::single("D", targets[0])).tensor(QuantumState::single("E", targets[1]));
    kept = {"D", "E"};
  }
  std::vector<Party> parties{{"Alice", {"a"}, std::nullopt, std::nullopt},
                             {"Bob", {"b"}, alpha, std::nullopt},
                             {"Charlie", {"c"}, beta, std::nullopt},
                             {"David", {"d", "D"}, std::nullopt, axes[0]},
                             {"Eve", {"e", "E"}, std::nullopt, axes[1]}};
  if (refs) parties.push_back({"Ref", {rd, re}, std::nullopt, std::nullopt});
  LoccProgram prog(std::move(initial), std::move(parties), std::move(kept),
                   {expected_factor(axes[0], alpha, targets[0], "D", refs ? &rd : nullptr),
                    expected_factor(axes[1], beta, targets[1], "E", refs ? &re : nullptr)});

  const Mat2 sd = pauli_axis_matrix(axes[0]);
  const Mat2 se = pauli_axis_matrix(axes[1]);
  prog.add_action("STEP1", [=](Session& s) { s.apply_controlled("David", "d", "D", sd, "controlled sigma_n"); });
  prog.add_action("STEP1", [=](Session& s) { s.apply_controlled("Eve", "e", "E", se, "controlled sigma_n"); });
  prog.add_action("STEP2", [](Session& s) { s.apply("Charlie", hadamard(), "c", "H"); });
  if (permitted) {
    prog.add_measurement("STEP3", "Alice", "a", Basis::X);
    prog.add_action("STEP3", [](Session& s) {
      s.send("Alice", "Bob", "STEP3", "a");
      s.send("Alice", "Charlie", "STEP3", "a");
      if (s.received("Bob", "Alice", "STEP3")) s.correct("Bob", pauli_x(), "b", "sigma_x");
      if (s.received("Charlie", "Alice", "STEP3")) s.correct("Charlie", pauli_x(), "c", "sigma_x");
    });
  }
  prog.add_measurement("STEP4", "David", "d", Basis::X);
  prog.add_action("STEP4", [](Session& s) {
    s.send("David", "Bob", "STEP4", "d");
    if (s.received("Bob", "David", "STEP4")) s.correct("Bob", pauli_z(), "b", "sigma_z");
  });
  prog.add_measurement("STEP4", "Eve", "e", Basis::X);
  prog.add_action("STEP4", [](Session& s) {
    s.send("Eve", "Charlie", "STEP4", "e");
    if (s.received("Charlie", "Eve", "STEP4")) s.correct("Charlie", pauli_z(), "c", "sigma_z");
  });
  const Mat2 ra = rotation(PauliAxis::x_axis(), alpha);
  const Mat2 rb = rotation(PauliAxis::x_axis(), beta);
  prog.add_action("STEP5", [=](Session& s) { s.apply("Bob", ra, "b", "exp(i alpha sigma_x)"); });
  prog.add_action("STEP5", [=](Session& s) { s.apply("Charlie", rb, "c", "exp(i beta sigma_x)"); });
  const Mat2 fd = rotation(axes[0], std::numbers::pi / 2);
  const Mat2 fe = rotation(axes[1], std::numbers::pi / 2);
  prog.add_measurement("STEP6", "Bob", "b", Basis::Z);
  prog.add_action("STEP6", [=](Session& s) {
    s.send("Bob", "David", "STEP6", "b");
    if (s.received("David", "Bob", "STEP6")) s.correct("David", fd, "D", "i sigma_n");
  });
  prog.add_measurement("STEP6", "Charlie", "c", Basis::Z);
  prog.add_action("STEP6", [=](Session& s) {
    s.send("Charlie", "Eve", "STEP6", "c");
    if (s.received("Eve", "Charlie", "STEP6")) s.correct("Eve", fe, "E", "i sigma_n");
  });

  ProtocolResult result = prog.run(options);
  result.permitted = permitted;
  result.completed = permitted;
  return result;
}

ControlDenialReport control_denial_report(int N, const std::vector<PauliAxis>& axes,
                                          const std::vector<double>& betas, const std::vector<Vec2>& targets) {
  ControlDenialReport report;
  std::optional<QuantumState> shared;
  RunOptions opts;
  // STEPs 1-2 precede every measurement, so the last snapshot taken there is unique.
  opts.observer = [&](std::string_view tag, const Session& s) {
    if (tag == "STEP1" || tag == "STEP2") shared = s.state();
  };
  for (int g = 0; g < 2; ++g) {
    CrioConfig cfg{.N = N, .axes = axes, .betas = betas, .targets = targets, .permitted = false,
                   .controlled_groups = std::nullopt, .denial_guess = g};
    const ProtocolResult r = run_crio(cfg, opts);
    double mean = 0.0;
    for (const auto& b : r.branches) mean += b.probability * b.fidelity;
    report.min_fidelity_by_guess[static_cast<std::size_t>(g)] = r.min_fidelity();
    report.mean_fidelity_by_guess[static_cast<std::size_t>(g)] = mean;
  }
  // The joint state is pure, so the rest of the register has the controller's spectrum.
  const std::vector<std::string> controller{"a1"};
  report.reduced_purity = purity(shared->reduced_density(controller));
  report.best_guess = report.min_fidelity_by_guess[1] > report.min_fidelity_by_guess[0] + kAlgebraTol ? 1 : 0;
  report.denial_effective =
      report.min_fidelity_by_guess[static_cast<std::size_t>(report.best_guess)] < 1.0 - kDenialMargin;
  return report;
}

}  // namespace crio
