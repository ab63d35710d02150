#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace crio {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

/// Tolerance for single algebraic identities (norms, involutions, 2x2 products).
inline constexpr double kAlgebraTol = 1e-12;
/// Tolerance for quantities accumulated over multi-gate pipelines.
inline constexpr double kPipelineTol = 1e-10;

/// All sampled measurement outcomes are driven by this engine.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
/// Unlike std::uniform_real_distribution this is identical across standard libraries.
double uniform01(Rng& rng);

/// Unit axis n = (x, y, z) defining sigma_n = x sigma_x + y sigma_y + z sigma_z.
class PauliAxis {
 public:
  /// Throws std::invalid_argument when |n| differs from 1 by more than kAlgebraTol.
  PauliAxis(double x, double y, double z);

  static PauliAxis normalized(double x, double y, double z);
  static PauliAxis random(Rng& rng);
  static PauliAxis x_axis() { return {1.0, 0.0, 0.0}; }
  static PauliAxis y_axis() { return {0.0, 1.0, 0.0}; }
  static PauliAxis z_axis() { return {0.0, 0.0, 1.0}; }

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  std::array<double, 3> components() const { return {x_, y_, z_}; }

 private:
  double x_;
  double y_;
  double z_;
};

Mat2 pauli_axis_matrix(const PauliAxis& axis);

/// exp(i alpha sigma_n) = cos(alpha) I + i sin(alpha) sigma_n.
Mat2 rotation(const PauliAxis& axis, double alpha);

namespace gates {
Mat2 identity();
Mat2 hadamard();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
}  // namespace gates

bool is_unitary(const Mat2& m, double tol = kPipelineTol);

enum class Basis { Z, X };

std::string_view to_string(Basis basis);

/// Eigenvector for a measurement outcome: Z gives |0>,|1>; X gives |+>,|->.
Vec2 basis_vector(Basis basis, int outcome);

struct MeasurementRecord {
  std::string qubit;
  Basis basis = Basis::Z;
  int outcome = 0;
  double probability = 0.0;
};

/// Dense pure state over labelled qubits. Label 0 is the most significant bit
/// of the amplitude index, so amplitude(bits) reads like the printed ket.
class QuantumState {
 public:
  /// Throws when sizes disagree, labels repeat, or the norm is off by more than kPipelineTol.
  QuantumState(std::vector<std::string> labels, Eigen::VectorXcd amplitudes);

  static QuantumState basis_state(std::vector<std::string> labels, std::uint64_t index);
  static QuantumState plus_state(std::vector<std::string> labels);
  static QuantumState product(std::vector<std::string> labels, std::span<const Vec2> factors);
  static QuantumState single(std::string label, const Vec2& amplitudes);
  static QuantumState random(std::vector<std::string> labels, Rng& rng);

  std::size_t num_qubits() const { return labels_.size(); }
  std::uint64_t dimension() const { return static_cast<std::uint64_t>(amplitudes_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

  bool has_qubit(std::string_view label) const;
  std::size_t position(std::string_view label) const;

  /// Amplitude of a big-endian bitstring such as "101".
  cplx amplitude(std::string_view bits) const;
  double norm() const;

  /// Throws std::invalid_argument for a non-unitary matrix or an unknown label.
  QuantumState& apply(const Mat2& gate, std::string_view qubit);
  QuantumState& apply_cz(std::string_view q1, std::string_view q2);
  /// |0><0| (x) I + |1><1| (x) gate on (control, target).
  QuantumState& apply_controlled(std::string_view control, std::string_view target, const Mat2& gate);

  std::array<double, 2> outcome_probabilities(std::string_view qubit, Basis basis) const;

  /// Samples an outcome; the state collapses and is renormalized in place.
  MeasurementRecord measure(std::string_view qubit, Basis basis, Rng& rng);
  /// Forces an outcome; throws std::domain_error if its probability is <= kAlgebraTol.
  MeasurementRecord measure(std::string_view qubit, Basis basis, int forced_outcome);

  /// Contracts `qubit` with <bra| and drops it from the register, renormalizing the rest.
  /// Throws std::domain_error when the contraction annihilates the state.
  QuantumState contract(std::string_view qubit, const Vec2& bra) const;

  QuantumState tensor(const QuantumState& other) const;

  /// Same state with qubits listed in `order` (a permutation of labels()).
  QuantumState reordered(std::span<const std::string> order) const;

  /// Rows indexed by the `rows` qubits (in the given order), columns by the rest in register order.
  Eigen::MatrixXcd bipartition(std::span<const std::string> rows) const;

  Eigen::MatrixXcd reduced_density(std::span<const std::string> keep) const;

 private:
  std::uint64_t bit_of(std::string_view label) const;
  MeasurementRecord collapse(std::size_t pos, Basis basis, int outcome, double probability);

  std::vector<std::string> labels_;
  Eigen::VectorXcd amplitudes_;
};

/// |<s1|s2>|; throws std::invalid_argument on a dimension mismatch.
double fidelity_up_to_phase(const QuantumState& s1, const QuantumState& s2);

/// sqrt(<psi|rho|psi>), which reduces to fidelity_up_to_phase for pure rho.
double fidelity_with_density(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi);

double purity(const Eigen::MatrixXcd& rho);

}  // namespace crio
