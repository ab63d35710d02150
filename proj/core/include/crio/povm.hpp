#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crio/angles.hpp"
#include "crio/qcore.hpp"

namespace crio {

/// Two rank-1 two-outcome POVMs: Bob's |beta_j> = cos th_j |0> + e^{i phi_j} sin th_j |1>
/// and Charlie's |gamma_k> = cos l_k |0> + e^{i w_k} sin l_k |1>.
struct PovmParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;

  /// Completes each pair with th_2 = pi/2 - th_1 and phi_2 = phi_1 + pi (mod 2 pi).
  static PovmParams complete(double theta1, double phi1, double lambda1, double omega1);

  /// Throws std::invalid_argument when an angle is out of range or either pair
  /// fails completeness by more than kPipelineTol.
  void validate() const;
};

bool operator==(const PovmParams& a, const PovmParams& b);

/// cos theta |0> + e^{i phi} sin theta |1>.
Vec2 povm_ket(double theta, double phi);

struct PovmOperators {
  std::array<Mat2, 2> M;
  std::array<Mat2, 2> N;
};

/// Rank-1 projectors for both parties. Validates first.
PovmOperators build_povm(const PovmParams& params);

/// c_{st} = <beta_j|s><gamma_k|t>, with j, k in {1, 2}.
struct BranchCoefficients {
  cplx c00{0.0, 0.0};
  cplx c01{0.0, 0.0};
  cplx c10{0.0, 0.0};
  cplx c11{0.0, 0.0};
};

BranchCoefficients branch_coefficients(const PovmParams& params, int j, int k);

struct RealizedOperation {
  /// Qubit a decouples: (c00, c11) and (c10, c01) are proportional.
  bool realizable = false;
  /// The residual target operator is proportional to some exp(i alpha sigma_n).
  bool is_rotation = false;
  /// c00/c10, or c11/c01 when c10 vanishes.
  std::optional<cplx> K;
  /// A I + B sigma_n left on the target after decoupling.
  cplx residual_identity{0.0, 0.0};
  cplx residual_sigma{0.0, 0.0};
  /// Realized angles in [0, 2 pi), ascending. alpha and alpha + pi are both listed.
  std::vector<double> alphas;
};

/// Decoupling test on the cross ratio c00 c01 = c11 c10.
RealizedOperation separability_check(const BranchCoefficients& c);

/// p(j,k) from the normalized three-qubit stator: Tr[W^dagger (I (x) M_j (x) N_k) W].
double outcome_probability(const PovmParams& params, int j, int k);

/// p(j,k) for one pure target: h_3 (x) |target>, then project b and c. This carries the
/// extra term sin 2th_j sin 2l_k cos phi_j cos w_k <sigma_n> / 4 that the trace removes.
double simulated_outcome_probability(const PovmParams& params, int j, int k, const PauliAxis& axis,
                                     const Vec2& target);

/// Frequency of (j,k) over `samples` simulated joint measurements on Haar-random targets.
std::array<std::array<double, 2>, 2> sampled_outcome_frequencies(const PovmParams& params, const PauliAxis& axis,
                                                                 int samples, std::uint64_t seed);

/// One POVM branch simulated on the Choi state of the three-qubit stator.
struct BranchSimulation {
  double probability = 0.0;
  /// sigma_2 / sigma_1 across the cut a | (C, R).
  double schmidt_ratio = 0.0;
  /// Target operators tied to a = |+> and a = |->.
  Mat2 plus_op;
  Mat2 minus_op;
  /// The dominant Schmidt component reshaped into a target operator.
  Mat2 residual;
};

BranchSimulation simulate_branch(const PovmParams& params, int j, int k, const PauliAxis& axis);

/// |Tr(U^dagger op)|^2 / (2 Tr(op^dagger op)) for U = exp(i alpha sigma_n); 1 iff op ∝ U.
double rotation_match(const Mat2& op, const PauliAxis& axis, double alpha);

struct ControlPowerOptions {
  int random_samples = 256;
  std::uint64_t seed = 0x5eed;
};

struct ControlPowerReport {
  double target_alpha = 0.0;
  double success_rate = 0.0;
  PovmParams witness;
  /// (j, k) pairs, 1-based, that realize the target under the witness.
  std::vector<std::pair<int, int>> favorable_branches;
  int candidates_examined = 0;
};

/// Best success probability of exp(i alpha sigma_n) without the controller, found by
/// searching two-outcome rank-1 POVM pairs. Throws std::invalid_argument outside [0, 2 pi).
ControlPowerReport control_power(double target_alpha, const ControlPowerOptions& options = {});

double success_rate(double target_alpha, const ControlPowerOptions& options = {});

/// Charlie's Case I choice: (lambda1, lambda2) = (0, pi/2) or (pi/2, 0).
enum class CharlieChoice { ZeroFirst, HalfPiFirst };

struct PovmTableRow {
  std::string table;
  PovmParams params;
  int j = 1;
  int k = 1;
  BranchCoefficients c;
  RealizedOperation op;
  double success_rate = 0.0;
};

/// The four (j,k) rows of one Case I block. phi_2 = phi_1 + pi.
std::vector<PovmTableRow> enumerate_case1(double theta1, double phi1, CharlieChoice choice, double omega1 = 0.0,
                                          double omega2 = 0.0);

/// Four rows with theta = pi/4, phi = (0, pi), omega = (pi/2, 3pi/2), lambda2 = pi/2 - lambda1.
/// Throws std::invalid_argument unless 0 < lambda1 < pi/2.
std::vector<PovmTableRow> enumerate_case2(double lambda1);

/// Charlie's lambda1 for a target alpha by quadrant. Throws std::invalid_argument for
/// multiples of pi/2 and angles outside [0, 2 pi).
double case2_lambda_for(double alpha);

/// Angles Charlie cannot tell apart for a given lambda1, deduplicated and sorted.
std::vector<double> guess_candidates(double lambda1);

/// 1 / |guess_candidates(lambda1)|. Throws std::invalid_argument outside [0, pi/2].
double guess_probability(double lambda1);

/// "II": both Case I blocks at theta1 = pi/6, phi1 = 0, omega = (pi/2, pi/2).
/// "III": Case II at lambda1 = pi/4 and lambda1 = pi/8. Anything else throws.
std::vector<PovmTableRow> povm_tables(const std::string& which);

std::string povm_table_csv(const std::vector<PovmTableRow>& rows);

}  // namespace crio
