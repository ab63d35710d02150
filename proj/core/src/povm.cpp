#include "crio/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "crio/graphstate.hpp"
#include "crio/stator.hpp"

namespace crio {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kTwoPi = 2 * std::numbers::pi;
// Angles closer than this count as the same rotation.
constexpr double kAngleTol = 1e-9;

void check_index(int j, int k) {
  if (j < 1 || j > 2 || k < 1 || k > 2) {
    throw std::invalid_argument("POVM outcomes are indexed 1 and 2");
  }
}

Vec2 bob_ket(const PovmParams& p, int j) { return j == 1 ? povm_ket(p.theta1, p.phi1) : povm_ket(p.theta2, p.phi2); }
Vec2 charlie_ket(const PovmParams& p, int k) {
  return k == 1 ? povm_ket(p.lambda1, p.omega1) : povm_ket(p.lambda2, p.omega2);
}

void check_pair(const char* who, double t1, double t2, double p1, double p2) {
  for (double t : {t1, t2}) {
    if (!(t >= -kAlgebraTol && t <= kHalfPi + kAlgebraTol)) {
      throw std::invalid_argument(std::string(who) + ": polar angles must lie in [0, pi/2]");
    }
  }
  for (double p : {p1, p2}) {
    if (!(p >= -kAlgebraTol && p < kTwoPi)) {
      throw std::invalid_argument(std::string(who) + ": phases must lie in [0, 2 pi)");
    }
  }
  const Vec2 a = povm_ket(t1, p1);
  const Vec2 b = povm_ket(t2, p2);
  const Mat2 sum = a * a.adjoint() + b * b.adjoint();
  if ((sum - Mat2::Identity()).cwiseAbs().maxCoeff() > kPipelineTol) {
    throw std::invalid_argument(std::string(who) + ": projectors do not sum to the identity");
  }
}

// h_3 on (a, b, c) after c controls sigma_n onto C, with C entangled to R.
QuantumState choi_state(const PauliAxis& axis) {
  const QuantumState h3 = build_graph_state(Graph(3, {{1, 2}, {1, 3}}), {"a", "b", "c"});
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  QuantumState s = h3.tensor(QuantumState({"C", "R"}, bell));
  s.apply_controlled("c", "C", pauli_axis_matrix(axis));
  return s;
}

// <beta_j, gamma_k| applied to (b, c), leaving the other qubits in register order.
Eigen::VectorXcd project_bc(const QuantumState& s, const PovmParams& p, int j, int k) {
  const std::vector<std::string> rows{"b", "c"};
  const Eigen::MatrixXcd m = s.bipartition(rows);
  const Vec2 beta = bob_ket(p, j);
  const Vec2 gamma = charlie_ket(p, k);
  Eigen::Vector4cd bra;
  bra << beta(0) * gamma(0), beta(0) * gamma(1), beta(1) * gamma(0), beta(1) * gamma(1);
  return m.transpose() * bra.conjugate();
}

Mat2 as_operator(const Eigen::Vector4cd& v) {
  Mat2 op;
  op << v(0), v(1), v(2), v(3);
  return op * std::numbers::sqrt2;
}

bool contains_angle(const std::vector<double>& set, double a) {
  return std::any_of(set.begin(), set.end(), [&](double x) { return angle_distance(x, a) <= kAngleTol; });
}

std::vector<double> sorted_unique(std::vector<double> v) {
  for (auto& x : v) x = wrap_angle(x);
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (!contains_angle(out, x)) out.push_back(x);
  }
  return out;
}

struct Score {
  double rate = 0.0;
  std::vector<std::pair<int, int>> branches;
};

Score score(const PovmParams& p, double alpha) {
  Score s;
  for (int j = 1; j <= 2; ++j) {
    for (int k = 1; k <= 2; ++k) {
      const RealizedOperation op = separability_check(branch_coefficients(p, j, k));
      if (op.realizable && op.is_rotation && contains_angle(op.alphas, alpha)) {
        s.rate += outcome_probability(p, j, k);
        s.branches.emplace_back(j, k);
      }
    }
  }
  return s;
}

PovmParams case2_params(double lambda1, double phi1, double omega1) {
  return PovmParams::complete(kPi / 4, phi1, lambda1, omega1);
}

std::vector<PovmParams> search_family(double alpha, const ControlPowerOptions& opt) {
  std::vector<PovmParams> out;
  // Case I: Charlie projects onto the computational basis.
  const std::array<double, 5> thetas{0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kHalfPi};
  const std::array<double, 4> quarter{0.0, kHalfPi, kPi, 3 * kHalfPi};
  for (double lambda1 : {0.0, kHalfPi}) {
    for (double t : thetas) {
      for (double phi : quarter) {
        for (double w1 : {0.0, kHalfPi}) {
          for (double w2 : {0.0, kPi}) {
            PovmParams p = PovmParams::complete(t, phi, lambda1, 0.0);
            p.omega1 = w1;
            p.omega2 = w2;
            out.push_back(p);
          }
        }
      }
    }
  }
  // Case II: invert every row formula for lambda1, then a grid.
  std::vector<double> lambdas{kPi / 4};
  for (double shift : quarter) {
    for (double l : {wrap_angle(alpha - shift), wrap_angle(shift - alpha)}) {
      if (l > kAngleTol && l < kHalfPi - kAngleTol) lambdas.push_back(l);
    }
  }
  for (int g = 1; g < 16; ++g) lambdas.push_back(kHalfPi * g / 16);
  for (double l : lambdas) {
    for (double phi : {0.0, kPi}) {
      for (double w : {kHalfPi, 3 * kHalfPi}) out.push_back(case2_params(l, phi, w));
    }
  }
  Rng rng(opt.seed);
  for (int i = 0; i < opt.random_samples; ++i) {
    const double t = kHalfPi * uniform01(rng);
    const double phi = kTwoPi * uniform01(rng);
    const double l = kHalfPi * uniform01(rng);
    const double w = kTwoPi * uniform01(rng);
    out.push_back(PovmParams::complete(t, phi, l, w));
  }
  return out;
}

void fill_block_rates(std::vector<PovmTableRow>& rows, std::size_t begin) {
  for (std::size_t i = begin; i < rows.size(); ++i) {
    double rate = 0.0;
    for (std::size_t r = begin; r < rows.size(); ++r) {
      const bool same = rows[r].op.alphas.size() == rows[i].op.alphas.size() &&
                        std::all_of(rows[i].op.alphas.begin(), rows[i].op.alphas.end(),
                                    [&](double a) { return contains_angle(rows[r].op.alphas, a); });
      if (same && rows[r].op.is_rotation) rate += outcome_probability(rows[r].params, rows[r].j, rows[r].k);
    }
    rows[i].success_rate = rows[i].op.is_rotation ? rate : 0.0;
  }
}

std::vector<PovmTableRow> rows_for(const std::string& table, const PovmParams& p) {
  std::vector<PovmTableRow> rows;
  for (int j = 1; j <= 2; ++j) {
    for (int k = 1; k <= 2; ++k) {
      PovmTableRow r;
      r.table = table;
      r.params = p;
      r.j = j;
      r.k = k;
      r.c = branch_coefficients(p, j, k);
      r.op = separability_check(r.c);
      rows.push_back(std::move(r));
    }
  }
  fill_block_rates(rows, 0);
  return rows;
}

std::string format_complex(cplx z) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(9);
  const double re = std::abs(z.real()) < 5e-10 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 5e-10 ? 0.0 : z.imag();
  os << re << (im < 0 ? '-' : '+') << std::abs(im) << 'i';
  return os.str();
}

}  // namespace

PovmParams PovmParams::complete(double theta1, double phi1, double lambda1, double omega1) {
  PovmParams p;
  p.theta1 = theta1;
  p.theta2 = kHalfPi - theta1;
  p.phi1 = wrap_angle(phi1);
  p.phi2 = wrap_angle(phi1 + kPi);
  p.lambda1 = lambda1;
  p.lambda2 = kHalfPi - lambda1;
  p.omega1 = wrap_angle(omega1);
  p.omega2 = wrap_angle(omega1 + kPi);
  return p;
}

void PovmParams::validate() const {
  check_pair("Bob", theta1, theta2, phi1, phi2);
  check_pair("Charlie", lambda1, lambda2, omega1, omega2);
}

bool operator==(const PovmParams& a, const PovmParams& b) {
  return a.theta1 == b.theta1 && a.theta2 == b.theta2 && a.phi1 == b.phi1 && a.phi2 == b.phi2 &&
         a.lambda1 == b.lambda1 && a.lambda2 == b.lambda2 && a.omega1 == b.omega1 && a.omega2 == b.omega2;
}

Vec2 povm_ket(double theta, double phi) { return {std::cos(theta), std::polar(std::sin(theta), phi)}; }

PovmOperators build_povm(const PovmParams& params) {
  params.validate();
  PovmOperators ops;
  for (int i = 1; i <= 2; ++i) {
    const Vec2 b = bob_ket(params, i);
    const Vec2 g = charlie_ket(params, i);
    ops.M[static_cast<std::size_t>(i - 1)] = b * b.adjoint();
    ops.N[static_cast<std::size_t>(i - 1)] = g * g.adjoint();
  }
  return ops;
}

BranchCoefficients branch_coefficients(const PovmParams& params, int j, int k) {
  check_index(j, k);
  const Vec2 b = bob_ket(params, j);
  const Vec2 g = charlie_ket(params, k);
  return {std::conj(b(0)) * std::conj(g(0)), std::conj(b(0)) * std::conj(g(1)), std::conj(b(1)) * std::conj(g(0)),
          std::conj(b(1)) * std::conj(g(1))};
}

RealizedOperation separability_check(const BranchCoefficients& c) {
  RealizedOperation out;
  const double scale = std::max({std::abs(c.c00), std::abs(c.c01), std::abs(c.c10), std::abs(c.c11)});
  if (scale == 0.0) return out;
  const double tol = kPipelineTol * scale;
  out.realizable = std::abs(c.c00 * c.c01 - c.c11 * c.c10) <= tol * scale;
  if (std::abs(c.c10) > tol) {
    out.K = c.c00 / c.c10;
  } else if (std::abs(c.c01) > tol) {
    out.K = c.c11 / c.c01;
  }
  if (!out.realizable) return out;

  const bool minus_side = std::max(std::abs(c.c10), std::abs(c.c01)) > tol;
  const cplx A = minus_side ? c.c10 : c.c00;
  const cplx B = minus_side ? c.c01 : c.c11;
  out.residual_identity = A;
  out.residual_sigma = B;
  if (std::abs(A) <= tol) {
    out.alphas = {kHalfPi, 3 * kHalfPi};
  } else if (std::abs(B) <= tol) {
    out.alphas = {0.0, kPi};
  } else {
    // cos a I + i sin a sigma_n needs B / (i A) = tan a real.
    const cplx r = B / (cplx(0.0, 1.0) * A);
    if (std::abs(r.imag()) > kPipelineTol * (1.0 + std::abs(r))) return out;
    const double a = wrap_angle(std::atan(r.real()));
    out.alphas = sorted_unique({a, a + kPi});
  }
  out.is_rotation = true;
  return out;
}

double outcome_probability(const PovmParams& params, int j, int k) {
  check_index(j, k);
  const PovmOperators ops = build_povm(params);
  QuantumState h3 = build_graph_state(Graph(3, {{1, 2}, {1, 3}}), {"a", "b", "c"});
  // Any axis works: sigma_n is traceless, so the cross term drops out.
  Stator s = Stator::from_state(h3, {"C"}, {PauliAxis::x_axis()});
  s = apply_controlled_sigma(s, "c", 0);
  const Eigen::MatrixXcd W = normalize_stator(s).matrix();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(16, 16);
  const Mat2& M = ops.M[static_cast<std::size_t>(j - 1)];
  const Mat2& N = ops.N[static_cast<std::size_t>(k - 1)];
  for (int a = 0; a < 2; ++a) {
    for (int b1 = 0; b1 < 2; ++b1) {
      for (int b2 = 0; b2 < 2; ++b2) {
        for (int c1 = 0; c1 < 2; ++c1) {
          for (int c2 = 0; c2 < 2; ++c2) {
            for (int t = 0; t < 2; ++t) {
              P((a << 3) | (b1 << 2) | (c1 << 1) | t, (a << 3) | (b2 << 2) | (c2 << 1) | t) = M(b1, b2) * N(c1, c2);
            }
          }
        }
      }
    }
  }
  return (W.adjoint() * P * W).trace().real();
}

double simulated_outcome_probability(const PovmParams& params, int j, int k, const PauliAxis& axis,
                                     const Vec2& target) {
  check_index(j, k);
  params.validate();
  QuantumState s = build_graph_state(Graph(3, {{1, 2}, {1, 3}}), {"a", "b", "c"}).tensor(QuantumState::single("C", target));
  s.apply_controlled("c", "C", pauli_axis_matrix(axis));
  return project_bc(s, params, j, k).squaredNorm();
}

std::array<std::array<double, 2>, 2> sampled_outcome_frequencies(const PovmParams& params, const PauliAxis& axis,
                                                                 int samples, std::uint64_t seed) {
  if (samples < 1) {
    throw std::invalid_argument("need at least one sample");
  }
  params.validate();
  Rng rng(seed);
  std::array<std::array<double, 2>, 2> counts{};
  for (int i = 0; i < samples; ++i) {
    const QuantumState target = QuantumState::random({"C"}, rng);
    const Vec2 t = target.amplitudes();
    double u = uniform01(rng);
    std::size_t pick = 3;
    for (std::size_t b = 0; b < 3; ++b) {
      u -= simulated_outcome_probability(params, static_cast<int>(b / 2) + 1, static_cast<int>(b % 2) + 1, axis, t);
      if (u < 0) {
        pick = b;
        break;
      }
    }
    counts[pick / 2][pick % 2] += 1.0;
  }
  for (auto& row : counts) {
    for (auto& x : row) x /= samples;
  }
  return counts;
}

BranchSimulation simulate_branch(const PovmParams& params, int j, int k, const PauliAxis& axis) {
  check_index(j, k);
  params.validate();
  // Remaining register order is (a, C, R).
  const Eigen::VectorXcd v = project_bc(choi_state(axis), params, j, k);
  BranchSimulation out;
  out.probability = v.squaredNorm();
  Eigen::Matrix<cplx, 2, 4> cut;
  for (int a = 0; a < 2; ++a) {
    for (int r = 0; r < 4; ++r) cut(a, r) = v(a * 4 + r);
  }
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>> svd(cut, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  out.schmidt_ratio = sv(0) > 0 ? sv(1) / sv(0) : 0.0;
  const Eigen::Vector4cd plus = (cut.row(0) + cut.row(1)).transpose() / std::numbers::sqrt2;
  const Eigen::Vector4cd minus = (cut.row(0) - cut.row(1)).transpose() / std::numbers::sqrt2;
  out.plus_op = as_operator(plus);
  out.minus_op = as_operator(minus);
  const Eigen::Vector4cd top = svd.matrixV().col(0).conjugate() * sv(0);
  out.residual = as_operator(top);
  return out;
}

double rotation_match(const Mat2& op, const PauliAxis& axis, double alpha) {
  const double n = op.squaredNorm();
  if (n == 0.0) return 0.0;
  const Mat2 U = rotation(axis, alpha);
  return std::norm((U.adjoint() * op).trace()) / (2.0 * n);
}

ControlPowerReport control_power(double target_alpha, const ControlPowerOptions& options) {
  if (!(target_alpha >= 0.0 && target_alpha < kTwoPi)) {
    throw std::invalid_argument("target alpha must lie in [0, 2 pi)");
  }
  ControlPowerReport best;
  best.target_alpha = target_alpha;
  const auto candidates = search_family(target_alpha, options);
  for (const auto& p : candidates) {
    Score s = score(p, target_alpha);
    if (s.rate > best.success_rate + kAlgebraTol) {
      best.success_rate = s.rate;
      best.witness = p;
      best.favorable_branches = std::move(s.branches);
    }
  }
  best.candidates_examined = static_cast<int>(candidates.size());
  return best;
}

double success_rate(double target_alpha, const ControlPowerOptions& options) {
  return control_power(target_alpha, options).success_rate;
}

std::vector<PovmTableRow> enumerate_case1(double theta1, double phi1, CharlieChoice choice, double omega1,
                                          double omega2) {
  PovmParams p = PovmParams::complete(theta1, phi1, choice == CharlieChoice::ZeroFirst ? 0.0 : kHalfPi, 0.0);
  p.omega1 = omega1;
  p.omega2 = omega2;
  p.validate();
  return rows_for("II", p);
}

std::vector<PovmTableRow> enumerate_case2(double lambda1) {
  if (!(lambda1 > kAlgebraTol && lambda1 < kHalfPi - kAlgebraTol)) {
    throw std::invalid_argument("lambda1 must lie strictly inside (0, pi/2)");
  }
  return rows_for("III", case2_params(lambda1, 0.0, kHalfPi));
}

double case2_lambda_for(double alpha) {
  if (!(alpha >= 0.0 && alpha < kTwoPi)) {
    throw std::invalid_argument("alpha must lie in [0, 2 pi)");
  }
  const double q = alpha / kHalfPi;
  if (std::abs(q - std::round(q)) <= kAngleTol) {
    throw std::invalid_argument("multiples of pi/2 are realized by the computational-basis family");
  }
  if (alpha < kHalfPi) return alpha;
  if (alpha < kPi) return kPi - alpha;
  if (alpha < 3 * kHalfPi) return 3 * kHalfPi - alpha;
  return alpha - 3 * kHalfPi;
}

std::vector<double> guess_candidates(double lambda1) {
  if (!(lambda1 >= -kAlgebraTol && lambda1 <= kHalfPi + kAlgebraTol)) {
    throw std::invalid_argument("lambda1 must lie in [0, pi/2]");
  }
  const double l = lambda1;
  return sorted_unique({kPi - l, kTwoPi - l, 3 * kHalfPi - l, kHalfPi - l, l, l + kPi, l + 3 * kHalfPi, l + kHalfPi});
}

double guess_probability(double lambda1) { return 1.0 / static_cast<double>(guess_candidates(lambda1).size()); }

std::vector<PovmTableRow> povm_tables(const std::string& which) {
  std::vector<PovmTableRow> rows;
  auto append = [&](std::vector<PovmTableRow> r) { rows.insert(rows.end(), r.begin(), r.end()); };
  if (which == "II") {
    append(enumerate_case1(kPi / 6, 0.0, CharlieChoice::ZeroFirst, kHalfPi, kHalfPi));
    append(enumerate_case1(kPi / 6, 0.0, CharlieChoice::HalfPiFirst, kHalfPi, kHalfPi));
  } else if (which == "III") {
    append(enumerate_case2(kPi / 4));
    append(enumerate_case2(kPi / 8));
  } else {
    throw std::invalid_argument("unknown table '" + which + "'");
  }
  return rows;
}

std::string povm_table_csv(const std::vector<PovmTableRow>& rows) {
  std::ostringstream out;
  out << "table,theta1,theta2,phi1,phi2,lambda1,lambda2,omega1,omega2,povm,success_rate,K,c00,c01,c10,c11,alpha\n";
  for (const auto& r : rows) {
    const auto& p = r.params;
    out << r.table;
    for (double a : {p.theta1, p.theta2, p.phi1, p.phi2, p.lambda1, p.lambda2, p.omega1, p.omega2}) {
      out << ',' << format_angle(a);
    }
    out << ",M" << r.j << "N" << r.k << ',' << r.success_rate << ',';
    if (r.op.K) out << format_complex(*r.op.K);
    out << ',' << format_complex(r.c.c00) << ',' << format_complex(r.c.c01) << ',' << format_complex(r.c.c10) << ','
        << format_complex(r.c.c11) << ',';
    for (std::size_t i = 0; i < r.op.alphas.size(); ++i) {
      out << (i ? " or " : "") << format_angle(r.op.alphas[i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace crio
