#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crio/qcore.hpp"

namespace crio {

/// Threshold below which stator coefficients are dropped.
inline constexpr double kTermPruneTol = 1e-12;

/// One term c |control_bits> (x) W(word). Both bit fields are big-endian over their
/// label lists; bit j of `word` selects sigma_n (1) or I (0) on target j.
struct StatorTerm {
  std::uint64_t control_bits = 0;
  std::uint64_t word = 0;
  cplx coeff{0.0, 0.0};
};

/// Hybrid state-operator over the two-letter alphabet {I, sigma_n} per target.
/// Terms are kept canonical: merged, pruned and sorted by (control_bits, word).
class Stator {
 public:
  Stator(std::vector<std::string> control_labels, std::vector<std::string> target_labels,
         std::vector<PauliAxis> target_axes, std::vector<StatorTerm> terms);

  /// Lifts a plain state on the control qubits into a stator with identity words.
  static Stator from_state(const QuantumState& state, std::vector<std::string> target_labels,
                           std::vector<PauliAxis> target_axes);

  const std::vector<std::string>& control_labels() const { return control_labels_; }
  const std::vector<std::string>& target_labels() const { return target_labels_; }
  const std::vector<PauliAxis>& target_axes() const { return target_axes_; }
  const std::vector<StatorTerm>& terms() const { return terms_; }
  std::size_t num_controls() const { return control_labels_.size(); }
  std::size_t num_targets() const { return target_labels_.size(); }

  std::size_t control_position(std::string_view label) const;

  /// Operator from the target space into control (x) target space, rows indexed
  /// (control_bits << T) | target_index.
  Eigen::MatrixXcd matrix() const;

  /// The 2^T x 2^T operator attached to one control basis string.
  Eigen::MatrixXcd word_matrix(std::uint64_t word) const;

  /// Tr(S^dagger S).
  double trace_norm_sq() const;

  Stator scaled(cplx factor) const;

  /// Ket-operator rendering, e.g. "+1|00>(x)I + 1|11>(x)sigma_n".
  std::string to_string() const;

 private:
  std::vector<std::string> control_labels_;
  std::vector<std::string> target_labels_;
  std::vector<PauliAxis> target_axes_;
  std::vector<StatorTerm> terms_;
};

/// Applies a 2x2 matrix to a control qubit and re-merges terms.
Stator apply_control_unitary(const Stator& s, std::string_view qubit, const Mat2& gate);

/// Projects a control qubit onto a measurement eigenstate and removes it.
/// Throws std::domain_error when every term is annihilated.
Stator project_control(const Stator& s, std::string_view qubit, Basis basis, int outcome);

/// |0><0| (x) I + |1><1| (x) sigma_{n_j} from a control qubit onto target j.
Stator apply_controlled_sigma(const Stator& s, std::string_view control, std::size_t target);

/// Multiplies sigma_{n_j} onto target j from the left (an operator-side correction).
Stator apply_target_sigma(const Stator& s, std::size_t target);

/// Reads a stator off a Choi-type joint state (S (x) I_R)|Phi+>, where each target is
/// paired with one reference qubit. The joint state must contain exactly the listed
/// controls, targets and references. Throws std::domain_error if the state is not of
/// stator form within kPipelineTol.
Stator extract_stator(const QuantumState& joint, std::vector<std::string> controls,
                      std::vector<std::string> targets, std::span<const std::string> references,
                      std::vector<PauliAxis> axes);

/// max-entry norm of (prod_k e^{i alpha_k sigma_x}) S - S (prod_k e^{i alpha_k sigma_{n_k}}),
/// pairing control k with target k. Throws std::invalid_argument on arity mismatch.
double eigenoperator_residual(const Stator& s, std::span<const double> alphas);

/// Rescales so that Tr(S^dagger S) = 1. Throws std::domain_error for a zero stator.
Stator normalize_stator(const Stator& s);

/// True when the two stators agree term by term after removing a complex scale factor.
bool equivalent_up_to_scale(const Stator& a, const Stator& b, double tol = kPipelineTol);

}  // namespace crio
