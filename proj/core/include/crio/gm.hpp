#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crio/qcore.hpp"

namespace crio {

/// Product state (x)_j (cos theta_j |0> + e^{i phi_j} sin theta_j |1>). Without phis the
/// ansatz is real and non-negative.
struct ProductAnsatz {
  std::vector<double> thetas;
  std::optional<std::vector<double>> phis;

  Eigen::VectorXcd vector() const;
};

enum class GMMode { NonNegative, General };

struct GMOptions {
  int restarts = 64;
  double tol = 1e-8;
  std::uint64_t seed = 0x5eed;
  int max_sweeps = 2000;
};

struct GMResult {
  double lambda_sq = 0.0;
  double G = 0.0;
  ProductAnsatz argmax;
  int restarts_used = 0;
  bool converged = false;
  /// lambda^2 after each sweep of the winning restart.
  std::vector<double> trace;
  /// Final lambda^2 of every restart, in restart order.
  std::vector<double> restart_values;
};

/// <phi(ansatz)|psi>. Throws std::invalid_argument on arity mismatch.
cplx overlap(const QuantumState& state, const ProductAnsatz& ansatz);

/// Applies H to each listed qubit.
QuantumState hadamard_reduce(const QuantumState& state, std::span<const std::string> qubits);

/// Qubits whose Hadamard makes the CRIO channel non-negative: a1 and a3..a_{N+1}.
std::vector<std::string> crio_reduction_qubits(int N);

/// Non-negative local-unitary image of the (2N+1)-qubit channel.
QuantumState g_state(int N);

/// -log2(lambda_sq), i.e. -2 log2 Lambda.
double geometric_measure(double lambda_sq);

/// Multi-start coordinate-wise golden-section ascent on |<phi|psi>|^2. In NonNegative mode the
/// amplitudes must be real and >= -1e-12 (std::invalid_argument otherwise).
GMResult gm_optimize(const QuantumState& state, GMMode mode, const GMOptions& options = {});

/// (1/sqrt 2^{N+1}) [cos th_1 prod_t cos(th_t - th_{t+N}) + sin th_1 prod_s sin(th_s + th_{s+N})].
/// Throws std::invalid_argument for the wrong arity or an angle outside [0, pi/2].
double closed_form_overlap(int N, std::span<const double> thetas);

/// GM of the 2N-qubit resource used without a controller.
GMResult gm_phi(int N, const GMOptions& options = {});

struct GMTableRow {
  int N = 1;
  std::string crio_state;
  double crio_gm = 0.0;
  std::string rio_state;
  double rio_gm = 0.0;
};

std::vector<GMTableRow> gm_table(int max_N, const GMOptions& options = {});

/// "number_of_systems,crio_state,crio_gm,rio_state,rio_gm" plus one line per row.
std::string gm_table_csv(const std::vector<GMTableRow>& rows);

}  // namespace crio
