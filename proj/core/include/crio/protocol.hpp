#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crio/graphstate.hpp"
#include "crio/qcore.hpp"

namespace crio {

struct Party {
  std::string id;
  std::set<std::string> owned_qubits;
  std::optional<double> knows_angle;
  std::optional<PauliAxis> knows_axis;
};

/// Classical channel traffic. The payload is always a single outcome bit.
struct ClassicalMessage {
  std::string from;
  std::string to;
  std::string step;
  int payload = 0;
};

/// Thrown when a party touches a qubit it does not own.
class LocalityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Mutable record of one branch of a protocol run: the joint state plus everything
/// the parties did and said along the way. All quantum actions are checked for locality.
class Session {
 public:
  Session(QuantumState state, const std::map<std::string, Party>* parties);

  const QuantumState& state() const { return state_; }
  const std::vector<MeasurementRecord>& records() const { return records_; }
  const std::vector<ClassicalMessage>& messages() const { return messages_; }
  const std::vector<std::string>& corrections() const { return corrections_; }
  double probability() const { return probability_; }

  void apply(std::string_view party, const Mat2& gate, std::string_view qubit, std::string_view note);
  void apply_controlled(std::string_view party, std::string_view control, std::string_view target,
                        const Mat2& gate, std::string_view note);

  /// Records a correction that was triggered by a received bit (for the branch log).
  void correct(std::string_view party, const Mat2& gate, std::string_view qubit, std::string_view note);

  /// `from` announces the outcome of its measurement of `qubit` to `to`.
  void send(std::string_view from, std::string_view to, std::string_view step, std::string_view qubit);

  /// Bit delivered to `to` by `from` during `step`; throws std::logic_error if none was sent.
  int received(std::string_view to, std::string_view from, std::string_view step) const;

  void measure(std::string_view party, std::string_view qubit, Basis basis, int outcome);

 private:
  void check_owner(std::string_view party, std::string_view qubit) const;

  QuantumState state_;
  const std::map<std::string, Party>* parties_;
  std::vector<MeasurementRecord> records_;
  std::vector<ClassicalMessage> messages_;
  std::vector<std::string> corrections_;
  double probability_ = 1.0;
};

enum class RunMode { Enumerate, Sample };

using StepObserver = std::function<void(std::string_view step, const Session&)>;

struct RunOptions {
  RunMode mode = RunMode::Enumerate;
  std::uint64_t seed = 0;
  /// Sample mode only: outcomes to pin, in measurement order; later measurements are sampled.
  std::vector<int> forced_outcomes;
  /// Pair every target with a reference qubit in |Phi+>, so each branch carries the
  /// Choi state of the implemented operation instead of a single input.
  bool attach_references = false;
  StepObserver observer;
};

struct Branch {
  std::vector<MeasurementRecord> outcomes;
  double probability = 0.0;
  std::vector<std::string> corrections;
  std::vector<ClassicalMessage> transcript;
  /// Labels of the kept register: targets (and their references when attached).
  std::vector<std::string> target_labels;
  Eigen::MatrixXcd target_density;
  /// Present when every non-target qubit was measured, so the targets are pure.
  std::optional<QuantumState> target_state;
  /// Fidelity of the kept register against the expected output.
  double fidelity = 0.0;
  /// Per target (with its reference when attached), in target order.
  std::vector<double> target_fidelities;

  std::string outcome_bits() const;
};

struct ProtocolResult {
  std::vector<Branch> branches;
  /// Transcript of the realized branch in sample mode; empty when enumerating.
  std::vector<ClassicalMessage> transcript;
  bool permitted = true;
  /// False when the controller withheld the STEP 3 measurement.
  bool completed = true;
  QuantumState expected;

  double total_probability() const;
  double min_fidelity() const;
};

/// Everything a CRIO run needs. axes/betas/targets are indexed by group, i.e. entry i
/// belongs to target O_{N+2+i} and the pair (A_{2+i}, A_{N+2+i}).
struct CrioConfig {
  int N = 1;
  std::vector<PauliAxis> axes;
  std::vector<double> betas;
  std::vector<Vec2> targets;
  bool permitted = true;
  /// Subset of 3..N+1; nullopt means every group is controlled.
  std::optional<std::set<int>> controlled_groups;
  /// When not permitted: the value the receivers assume for the missing STEP 3 bit.
  int denial_guess = 0;

  CrioTopology topology() const;
};

/// A sequence of local actions and measurements over a fixed set of parties. Runs either
/// enumerate the full measurement tree or follow one seeded path.
class LoccProgram {
 public:
  using Action = std::function<void(Session&)>;

  struct Measurement {
    std::string party;
    std::string qubit;
    Basis basis = Basis::Z;
  };

  struct Step {
    std::string tag;
    std::variant<Action, Measurement> body;
  };

  LoccProgram(QuantumState initial, std::vector<Party> parties, std::vector<std::string> kept_labels,
              std::vector<QuantumState> expected_factors);

  void add_action(std::string tag, Action action);
  void add_measurement(std::string tag, std::string party, std::string qubit, Basis basis);

  const std::map<std::string, Party>& parties() const { return parties_; }
  const std::vector<Step>& steps() const { return steps_; }

  ProtocolResult run(const RunOptions& options) const;

 private:
  void descend(std::size_t index, Session session, const RunOptions& options, Rng* rng,
               std::vector<Branch>& out) const;
  Branch finalize(const Session& session) const;

  QuantumState initial_;
  std::map<std::string, Party> parties_;
  std::vector<std::string> kept_labels_;
  std::vector<QuantumState> expected_factors_;
  QuantumState expected_;
  std::vector<Step> steps_;
};

/// Builds the six-step program on the (2N+1)-vertex channel.
LoccProgram build_crio_program(const CrioConfig& config, bool attach_references = false);

/// Throws std::invalid_argument for malformed inputs (wrong arity, unnormalized targets).
ProtocolResult run_crio(const CrioConfig& config, const RunOptions& options = {});

/// Alice/Bob/Charlie on |h_3> with qubits a,b,c and target C.
ProtocolResult run_tripartite(const PauliAxis& axis, double alpha, const Vec2& target, bool permitted,
                              const RunOptions& options = {});

/// Alice..Eve on |h_5> with qubits a..e and targets D (group Bob/David) and E (Charlie/Eve).
ProtocolResult run_fivepartite(const std::array<PauliAxis, 2>& axes, double alpha, double beta,
                               const std::array<Vec2, 2>& targets, bool permitted,
                               const RunOptions& options = {});

struct ControlDenialReport {
  /// Purity of everything except the controller's qubit after STEPs 1-2.
  double reduced_purity = 1.0;
  std::array<double, 2> min_fidelity_by_guess{};
  std::array<double, 2> mean_fidelity_by_guess{};
  int best_guess = 0;
  /// True when even the best guess leaves a branch below 1 - 1e-6.
  bool denial_effective = false;
};

inline constexpr double kDenialMargin = 1e-6;

ControlDenialReport control_denial_report(int N, const std::vector<PauliAxis>& axes,
                                          const std::vector<double>& betas, const std::vector<Vec2>& targets);

}  // namespace crio
