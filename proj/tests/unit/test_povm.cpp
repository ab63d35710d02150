#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crio/povm.hpp"
#include "oracles.hpp"

using namespace crio;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRootHalf = std::numbers::sqrt2 / 2;
const cplx I1{0.0, 1.0};

double unif(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

PovmParams random_params(std::mt19937_64& rng) {
  return PovmParams::complete(unif(rng, 0, kPi / 2), unif(rng, 0, 2 * kPi), unif(rng, 0, kPi / 2),
                              unif(rng, 0, 2 * kPi));
}

// Draws from a mixture of special and uniform values so that realizable branches occur.
PovmParams mixed_params(std::mt19937_64& rng) {
  const std::array<double, 6> polar{0.0, kPi / 8, kPi / 4, kPi / 3, kPi / 2, kPi / 4};
  const std::array<double, 6> phase{0.0, kPi / 2, kPi, 3 * kPi / 2, kPi / 4, kPi};
  auto pick = [&](const auto& set, double hi) {
    return unif(rng, 0, 1) < 0.5 ? set[std::uniform_int_distribution<std::size_t>(0, set.size() - 1)(rng)]
                                 : unif(rng, 0, hi);
  };
  return PovmParams::complete(pick(polar, kPi / 2), pick(phase, 2 * kPi), pick(polar, kPi / 2), pick(phase, 2 * kPi));
}

bool has_angle(const std::vector<double>& set, double a) {
  for (double x : set) {
    if (angle_distance(x, a) < 1e-9) return true;
  }
  return false;
}

void expect_angles(const std::vector<double>& got, std::vector<double> want) {
  ASSERT_EQ(got.size(), want.size());
  for (double w : want) EXPECT_TRUE(has_angle(got, w)) << w;
}

void expect_c(cplx got, cplx want, double tol = 1e-12) { EXPECT_LE(std::abs(got - want), tol) << got << " vs " << want; }

Vec2 kv(double t, double p) { return {std::cos(t), std::polar(std::sin(t), p)}; }

oracle::Vec oracle_branch(const PovmParams& p, int j, int k, const oracle::Mat& sig) {
  const Vec2 beta = j == 1 ? kv(p.theta1, p.phi1) : kv(p.theta2, p.phi2);
  const Vec2 gamma = k == 1 ? kv(p.lambda1, p.omega1) : kv(p.lambda2, p.omega2);
  return oracle::povm_choi_branch(beta, gamma, sig);
}

}  // namespace

TEST(BuildPovm, ComputationalBasisExample) {
  for (double phi : {0.0, 1.0, 4.0}) {
    const PovmOperators ops = build_povm(PovmParams::complete(0.0, phi, 0.0, phi));
    EXPECT_LE((ops.M[0] - Mat2{{1, 0}, {0, 0}}).norm(), 1e-15);
    EXPECT_LE((ops.M[1] - Mat2{{0, 0}, {0, 1}}).norm(), 1e-15);
    EXPECT_LE((ops.N[0] - ops.M[0]).norm(), 1e-15);
  }
}

TEST(BuildPovm, EqualSuperpositionExample) {
  PovmParams p{kPi / 4, kPi / 4, 0.0, kPi, kPi / 4, kPi / 4, kPi / 2, 3 * kPi / 2};
  const PovmOperators ops = build_povm(p);
  const Mat2 X{{0, 1}, {1, 0}};
  EXPECT_LE((ops.M[0] - 0.5 * (Mat2::Identity() + X)).norm(), 1e-15);
  EXPECT_LE((ops.M[1] - 0.5 * (Mat2::Identity() - X)).norm(), 1e-15);
  const Mat2 n1{{0.5, -0.5 * I1}, {0.5 * I1, 0.5}};
  EXPECT_LE((ops.N[0] - n1).norm(), 1e-15);
  EXPECT_LE((ops.N[1] - n1.conjugate()).norm(), 1e-15);
}

TEST(BuildPovm, RejectsIncompleteOrOutOfRange) {
  PovmParams p = PovmParams::complete(0.3, 0.0, 0.2, 0.0);
  p.theta2 = 0.3;
  EXPECT_THROW(build_povm(p), std::invalid_argument);
  p = PovmParams::complete(0.3, 0.0, 0.2, 0.0);
  p.omega2 = p.omega1;
  EXPECT_THROW(build_povm(p), std::invalid_argument);
  p = PovmParams::complete(0.3, 0.0, 0.2, 0.0);
  p.phi1 = 7.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(PovmParams::complete(2.0, 0.0, 0.2, 0.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(PovmParams::complete(0.0, 5.0, kPi / 2, 6.0).validate());
}

TEST(OutcomeProbability, FlatAcrossRandomParams) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 1000; ++i) {
    const PovmParams p = random_params(rng);
    double total = 0.0;
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        const double pr = outcome_probability(p, j, k);
        ASSERT_NEAR(pr, 0.25, 1e-10);
        total += pr;
      }
    }
    ASSERT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(OutcomeProbability, ChoiSimulationAgrees) {
  Rng rng(7);
  std::mt19937_64 prng(8);
  for (int i = 0; i < 200; ++i) {
    const PovmParams p = random_params(prng);
    const PauliAxis axis = PauliAxis::random(rng);
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) ASSERT_NEAR(simulate_branch(p, j, k, axis).probability, 0.25, 1e-10);
    }
  }
}

TEST(OutcomeProbability, PureTargetsShiftByTheCrossTerm) {
  // For a fixed target the traceless term survives:
  // p = (1 + sin 2th sin 2l cos phi cos w <sigma_n>) / 4, and antipodal targets average to 1/4.
  Rng rng(9);
  std::mt19937_64 prng(10);
  for (int i = 0; i < 200; ++i) {
    const PovmParams p = random_params(prng);
    const PauliAxis axis = PauliAxis::random(rng);
    const Vec2 t = QuantumState::random({"C"}, rng).amplitudes();
    const Vec2 flipped{-std::conj(t(1)), std::conj(t(0))};
    const oracle::Mat sig = oracle::sigma(axis.x(), axis.y(), axis.z());
    const double expect_sigma = (t.adjoint() * sig * t)(0, 0).real();
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        const double th = j == 1 ? p.theta1 : p.theta2;
        const double ph = j == 1 ? p.phi1 : p.phi2;
        const double la = k == 1 ? p.lambda1 : p.lambda2;
        const double om = k == 1 ? p.omega1 : p.omega2;
        const double want =
            0.25 * (1 + std::sin(2 * th) * std::sin(2 * la) * std::cos(ph) * std::cos(om) * expect_sigma);
        const double got = simulated_outcome_probability(p, j, k, axis, t);
        ASSERT_NEAR(got, want, 1e-10);
        ASSERT_NEAR(0.5 * (got + simulated_outcome_probability(p, j, k, axis, flipped)), 0.25, 1e-10);
      }
    }
  }
}

TEST(OutcomeProbability, SampledFrequencies) {
  const auto f = sampled_outcome_frequencies(PovmParams::complete(0.4, 1.1, 0.9, 2.0), PauliAxis(0.6, 0.0, 0.8),
                                             100000, 2024);
  double total = 0.0;
  for (const auto& row : f) {
    for (double x : row) {
      EXPECT_NEAR(x, 0.25, 0.005);
      total += x;
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(f, sampled_outcome_frequencies(PovmParams::complete(0.4, 1.1, 0.9, 2.0), PauliAxis(0.6, 0.0, 0.8),
                                           100000, 2024));
  EXPECT_THROW(sampled_outcome_frequencies(PovmParams{}, PauliAxis::z_axis(), 0, 1), std::invalid_argument);
}

TEST(BranchCoefficients, Examples) {
  const BranchCoefficients z = branch_coefficients(PovmParams::complete(0.0, 0.0, 0.0, 0.0), 1, 1);
  expect_c(z.c00, 1.0);
  expect_c(z.c01, 0.0);
  expect_c(z.c10, 0.0);
  expect_c(z.c11, 0.0);
  const BranchCoefficients h = branch_coefficients(PovmParams::complete(kPi / 4, 0.0, kPi / 4, kPi / 2), 1, 1);
  expect_c(h.c00, 0.5);
  expect_c(h.c01, -0.5 * I1);
  expect_c(h.c10, 0.5);
  expect_c(h.c11, -0.5 * I1);
  EXPECT_THROW(branch_coefficients(PovmParams{}, 0, 1), std::invalid_argument);
  EXPECT_THROW(branch_coefficients(PovmParams{}, 1, 3), std::invalid_argument);
}

TEST(BranchCoefficients, NormalizedAndMatchSimulatedStator) {
  std::mt19937_64 rng(33);
  Rng arng(34);
  for (int i = 0; i < 100; ++i) {
    const PovmParams p = random_params(rng);
    const PauliAxis axis = PauliAxis::random(arng);
    const oracle::Mat sig = oracle::sigma(axis.x(), axis.y(), axis.z());
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        const BranchCoefficients c = branch_coefficients(p, j, k);
        ASSERT_NEAR(std::norm(c.c00) + std::norm(c.c01) + std::norm(c.c10) + std::norm(c.c11), 1.0, 1e-10);
        const oracle::Mat I2 = oracle::Mat::Identity(2, 2);
        const BranchSimulation sim = simulate_branch(p, j, k, axis);
        ASSERT_LE((sim.plus_op - 0.5 * (c.c00 * I2 + c.c11 * sig)).norm(), 1e-10);
        ASSERT_LE((sim.minus_op - 0.5 * (c.c10 * I2 + c.c01 * sig)).norm(), 1e-10);
        ASSERT_NEAR(sim.probability, 0.25, 1e-10);
        // Independent dense route for the same branch.
        const oracle::Vec v = oracle_branch(p, j, k, sig);
        ASSERT_NEAR(v.squaredNorm(), 0.25, 1e-10);
        const oracle::Vec plus = (v.head(4) + v.tail(4)) / std::numbers::sqrt2;
        const Mat2 op = std::numbers::sqrt2 * Mat2{{plus(0), plus(1)}, {plus(2), plus(3)}};
        ASSERT_LE((op - sim.plus_op).norm(), 1e-10);
      }
    }
  }
}

TEST(Separability, ComputationalBasisBlocks) {
  for (double t : {0.0, 0.3, kPi / 4, 1.2, kPi / 2}) {
    const auto block1 = enumerate_case1(t, 0.7, CharlieChoice::ZeroFirst, 1.0, 2.0);
    const auto block2 = enumerate_case1(t, 0.7, CharlieChoice::HalfPiFirst, 1.0, 2.0);
    ASSERT_EQ(block1.size(), 4u);
    for (const auto& r : block1) {
      EXPECT_TRUE(r.op.realizable && r.op.is_rotation);
      if (r.k == 1) {
        expect_angles(r.op.alphas, {0.0, kPi});
      } else {
        expect_angles(r.op.alphas, {kPi / 2, 3 * kPi / 2});
      }
      EXPECT_NEAR(r.success_rate, 0.5, 1e-10);
    }
    for (const auto& r : block2) {
      EXPECT_TRUE(r.op.realizable && r.op.is_rotation);
      if (r.k == 2) {
        expect_angles(r.op.alphas, {0.0, kPi});
      } else {
        expect_angles(r.op.alphas, {kPi / 2, 3 * kPi / 2});
      }
    }
  }
}

TEST(Separability, EqualSuperpositionBranch) {
  const RealizedOperation op = separability_check({0.5, -0.5 * I1, 0.5, -0.5 * I1});
  EXPECT_TRUE(op.realizable);
  EXPECT_TRUE(op.is_rotation);
  ASSERT_TRUE(op.K.has_value());
  expect_c(*op.K, 1.0);
  expect_angles(op.alphas, {3 * kPi / 4, 7 * kPi / 4});
}

TEST(Separability, DecouplesWithoutARotation) {
  // (c10, c01) vanishes and I + sigma_n remains: a projector, not a rotation.
  const RealizedOperation op = separability_check({1.0, 0.0, 0.0, 1.0});
  EXPECT_TRUE(op.realizable);
  EXPECT_FALSE(op.is_rotation);
  EXPECT_TRUE(op.alphas.empty());
  EXPECT_FALSE(op.K.has_value());
  // A I + B sigma with B/(iA) complex is not proportional to any rotation either.
  const RealizedOperation skew = separability_check({1.0, 0.5, 2.0, 0.25});
  EXPECT_TRUE(skew.realizable);
  EXPECT_FALSE(skew.is_rotation);
  EXPECT_FALSE(separability_check({1.0, 1.0, 1.0, 0.0}).realizable);
  EXPECT_FALSE(separability_check({0.0, 0.0, 0.0, 0.0}).realizable);
}

TEST(Separability, AgreesWithSchmidtRank) {
  std::mt19937_64 rng(55);
  Rng arng(56);
  int realizable = 0;
  int total = 0;
  for (int i = 0; i < 400; ++i) {
    const PovmParams p = i % 2 ? random_params(rng) : mixed_params(rng);
    const PauliAxis axis = PauliAxis::random(arng);
    const oracle::Mat sig = oracle::sigma(axis.x(), axis.y(), axis.z());
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        const RealizedOperation op = separability_check(branch_coefficients(p, j, k));
        const oracle::Vec v = oracle_branch(p, j, k, sig);
        Eigen::MatrixXcd cut(2, 4);
        for (int r = 0; r < 4; ++r) {
          cut(0, r) = v(r);
          cut(1, r) = v(4 + r);
        }
        const auto sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(cut).singularValues();
        const bool rank_one = sv(1) <= 1e-10;
        ASSERT_EQ(op.realizable, rank_one) << i << " " << j << k << " sv2=" << sv(1);
        ASSERT_EQ(simulate_branch(p, j, k, axis).schmidt_ratio <= 1e-10, rank_one);
        realizable += rank_one;
        ++total;
      }
    }
  }
  // Both outcomes of the test must actually occur.
  EXPECT_GT(realizable, 50);
  EXPECT_LT(realizable, total);
}

TEST(Separability, RealizableBranchesOutsideComputationalBasisAreTheEqualFamily) {
  std::mt19937_64 rng(77);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) {
    const PovmParams p = mixed_params(rng);
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        const double th = j == 1 ? p.theta1 : p.theta2;
        const double ph = j == 1 ? p.phi1 : p.phi2;
        const double la = k == 1 ? p.lambda1 : p.lambda2;
        const double om = k == 1 ? p.omega1 : p.omega2;
        if (!(th > 1e-9 && th < kPi / 2 - 1e-9 && la > 1e-9 && la < kPi / 2 - 1e-9)) continue;
        const RealizedOperation op = separability_check(branch_coefficients(p, j, k));
        if (!op.realizable) continue;
        ++hits;
        ASSERT_NEAR(th, kPi / 4, 1e-8);
        ASSERT_TRUE(angle_distance(ph, 0.0) < 1e-8 || angle_distance(ph, kPi) < 1e-8) << ph;
        if (op.is_rotation) {
          ASSERT_TRUE(angle_distance(om, kPi / 2) < 1e-8 || angle_distance(om, 3 * kPi / 2) < 1e-8) << om;
        }
      }
    }
  }
  EXPECT_GT(hits, 100);
}

TEST(SuccessRate, DichotomyOnEighthsAndGenericAngles) {
  for (int m = 0; m < 8; ++m) EXPECT_NEAR(success_rate(m * kPi / 4), 0.5, 1e-10) << m;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    double a = unif(rng, 0, 2 * kPi);
    const double q = a / (kPi / 4);
    if (std::abs(q - std::round(q)) < 1e-6) a += 0.01;
    ASSERT_NEAR(success_rate(a), 0.25, 1e-10) << a;
  }
  EXPECT_THROW(success_rate(-0.1), std::invalid_argument);
  EXPECT_THROW(success_rate(2 * kPi), std::invalid_argument);
}

TEST(SuccessRate, WitnessesRealizeTheTarget) {
  Rng arng(3);
  for (double a : {0.0, 3 * kPi / 4, 0.7, 4.0, kPi / 2}) {
    const ControlPowerReport r = control_power(a);
    EXPECT_NO_THROW(r.witness.validate());
    EXPECT_NEAR(r.favorable_branches.size() * 0.25, r.success_rate, 1e-10);
    const PauliAxis axis = PauliAxis::random(arng);
    for (auto [j, k] : r.favorable_branches) {
      const BranchSimulation sim = simulate_branch(r.witness, j, k, axis);
      EXPECT_LE(sim.schmidt_ratio, 1e-10);
      EXPECT_NEAR(rotation_match(sim.residual, axis, a), 1.0, 1e-10);
    }
  }
  const ControlPowerReport r = control_power(3 * kPi / 4);
  EXPECT_EQ(r.favorable_branches.size(), 2u);
  EXPECT_GT(r.candidates_examined, 256);
}

TEST(SuccessRate, Deterministic) {
  const ControlPowerReport a = control_power(1.234);
  const ControlPowerReport b = control_power(1.234);
  EXPECT_EQ(a.witness, b.witness);
  EXPECT_EQ(a.favorable_branches, b.favorable_branches);
}

TEST(Tables, ComputationalBasisRowsMatchTheirFormulas) {
  std::mt19937_64 rng(12);
  for (int s = 0; s < 10; ++s) {
    const double t1 = unif(rng, 0, kPi / 2);
    const double f1 = unif(rng, 0, 2 * kPi);
    const double w1 = unif(rng, 0, 2 * kPi);
    const double w2 = unif(rng, 0, 2 * kPi);
    const double t2 = kPi / 2 - t1;
    const double f2 = wrap_angle(f1 + kPi);
    const auto b1 = enumerate_case1(t1, f1, CharlieChoice::ZeroFirst, w1, w2);
    const auto b2 = enumerate_case1(t1, f1, CharlieChoice::HalfPiFirst, w1, w2);
    const auto e = [](double x) { return std::polar(1.0, -x); };
    // Block 1 rows in order (M1,N1), (M1,N2), (M2,N1), (M2,N2).
    const std::array<std::array<cplx, 4>, 4> want1{{
        {std::cos(t1), 0.0, e(f1) * std::sin(t1), 0.0},
        {0.0, e(w2) * std::cos(t1), 0.0, e(w2 + f1) * std::sin(t1)},
        {std::cos(t2), 0.0, e(f2) * std::sin(t2), 0.0},
        {0.0, e(w2) * std::cos(t2), 0.0, e(w2 + f2) * std::sin(t2)},
    }};
    const std::array<std::array<cplx, 4>, 4> want2{{
        {0.0, e(w1) * std::cos(t1), 0.0, e(w1 + f1) * std::sin(t1)},
        {std::cos(t1), 0.0, e(f1) * std::sin(t1), 0.0},
        {0.0, e(w1) * std::cos(t2), 0.0, e(w1 + f2) * std::sin(t2)},
        {std::cos(t2), 0.0, e(f2) * std::sin(t2), 0.0},
    }};
    for (std::size_t r = 0; r < 4; ++r) {
      for (const auto& [rows, want] : {std::pair{&b1, &want1}, std::pair{&b2, &want2}}) {
        const auto& c = (*rows)[r].c;
        expect_c(c.c00, (*want)[r][0], 1e-10);
        expect_c(c.c01, (*want)[r][1], 1e-10);
        expect_c(c.c10, (*want)[r][2], 1e-10);
        expect_c(c.c11, (*want)[r][3], 1e-10);
      }
    }
  }
}

TEST(Tables, EqualFamilyRowsMatchTheirFormulas) {
  // lambda1 = pi/4 block, with K, c01, c10 and angle pairs per row.
  const auto q = enumerate_case2(kPi / 4);
  const std::array<cplx, 4> K{1.0, 1.0, -1.0, -1.0};
  const std::array<cplx, 4> c01{-0.5 * I1, 0.5 * I1, -0.5 * I1, 0.5 * I1};
  const std::array<cplx, 4> c10{0.5, 0.5, -0.5, -0.5};
  const std::array<std::array<double, 2>, 4> al{{{3 * kPi / 4, 7 * kPi / 4},
                                                 {kPi / 4, 5 * kPi / 4},
                                                 {kPi / 4, 5 * kPi / 4},
                                                 {3 * kPi / 4, 7 * kPi / 4}}};
  for (std::size_t r = 0; r < 4; ++r) {
    ASSERT_TRUE(q[r].op.K.has_value());
    expect_c(*q[r].op.K, K[r]);
    expect_c(q[r].c.c01, c01[r]);
    expect_c(q[r].c.c10, c10[r]);
    expect_angles(q[r].op.alphas, {al[r][0], al[r][1]});
    EXPECT_NEAR(q[r].success_rate, 0.5, 1e-10);
  }
  std::mt19937_64 rng(21);
  for (int s = 0; s < 10; ++s) {
    double l1 = unif(rng, 0.01, kPi / 2 - 0.01);
    if (std::abs(l1 - kPi / 4) < 1e-3) l1 += 0.01;
    const double l2 = kPi / 2 - l1;
    const auto rows = enumerate_case2(l1);
    const double h = kRootHalf;
    const std::array<cplx, 4> k2{1.0, 1.0, -1.0, -1.0};
    const std::array<cplx, 4> w01{-h * I1 * std::sin(l1), h * I1 * std::sin(l2), -h * I1 * std::sin(l1),
                                  h * I1 * std::sin(l2)};
    const std::array<cplx, 4> w10{h * std::cos(l1), h * std::cos(l2), -h * std::cos(l1), -h * std::cos(l2)};
    const std::array<std::array<double, 2>, 4> wa{{{kPi - l1, 2 * kPi - l1},
                                                   {3 * kPi / 2 - l1, kPi / 2 - l1},
                                                   {l1, l1 + kPi},
                                                   {l1 + 3 * kPi / 2, l1 + kPi / 2}}};
    for (std::size_t r = 0; r < 4; ++r) {
      expect_c(*rows[r].op.K, k2[r], 1e-10);
      expect_c(rows[r].c.c01, w01[r], 1e-10);
      expect_c(rows[r].c.c10, w10[r], 1e-10);
      expect_angles(rows[r].op.alphas, {wrap_angle(wa[r][0]), wrap_angle(wa[r][1])});
      EXPECT_NEAR(rows[r].success_rate, 0.25, 1e-10);
    }
  }
}

TEST(Tables, EveryRowConfirmedBySimulation) {
  Rng arng(41);
  std::vector<PovmTableRow> rows = povm_tables("II");
  for (auto r : povm_tables("III")) rows.push_back(r);
  for (auto r : enumerate_case1(0.0, 0.0, CharlieChoice::ZeroFirst)) rows.push_back(r);
  for (double l : {0.1, 0.5, 1.0, 1.4}) {
    for (auto r : enumerate_case2(l)) rows.push_back(r);
  }
  for (const auto& row : rows) {
    const PauliAxis axis = PauliAxis::random(arng);
    const BranchSimulation sim = simulate_branch(row.params, row.j, row.k, axis);
    ASSERT_TRUE(row.op.is_rotation);
    EXPECT_LE(sim.schmidt_ratio, 1e-10);
    for (double a : row.op.alphas) EXPECT_NEAR(rotation_match(sim.residual, axis, a), 1.0, 1e-10);
    EXPECT_LT(rotation_match(sim.residual, axis, row.op.alphas[0] + 0.3), 0.99);
  }
}

TEST(Tables, Csv) {
  const std::string csv = povm_table_csv(povm_tables("III"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "table,theta1,theta2,phi1,phi2,lambda1,lambda2,omega1,omega2,povm,success_rate,K,c00,c01,c10,c11,alpha");
  EXPECT_NE(csv.find("III,pi/4,pi/4,0,pi,pi/4,pi/4,pi/2,3pi/2,M1N1,0.5,1.000000000+0.000000000i,"
                     "0.500000000+0.000000000i,0.000000000-0.500000000i,0.500000000+0.000000000i,"
                     "0.000000000-0.500000000i,3pi/4 or 7pi/4\n"),
            std::string::npos)
      << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_THROW(povm_tables("IV"), std::invalid_argument);
}

TEST(Case2, LambdaSelectionRule) {
  std::mt19937_64 rng(5);
  for (int q = 0; q < 4; ++q) {
    for (int s = 0; s < 10; ++s) {
      const double a = q * kPi / 2 + unif(rng, 0.01, kPi / 2 - 0.01);
      const double l = case2_lambda_for(a);
      ASSERT_GT(l, 0.0);
      ASSERT_LT(l, kPi / 2);
      bool found = false;
      for (const auto& r : enumerate_case2(l)) found = found || has_angle(r.op.alphas, a);
      ASSERT_TRUE(found) << a;
    }
  }
  EXPECT_DOUBLE_EQ(case2_lambda_for(0.3), 0.3);
  EXPECT_DOUBLE_EQ(case2_lambda_for(kPi - 0.3), 0.3);
  EXPECT_NEAR(case2_lambda_for(3 * kPi / 2 - 0.3), 0.3, 1e-14);
  EXPECT_NEAR(case2_lambda_for(3 * kPi / 2 + 0.3), 0.3, 1e-14);
  for (double bad : {0.0, kPi / 2, kPi, 3 * kPi / 2, -0.1, 7.0}) {
    EXPECT_THROW(case2_lambda_for(bad), std::invalid_argument) << bad;
  }
  EXPECT_THROW(enumerate_case2(0.0), std::invalid_argument);
  EXPECT_THROW(enumerate_case2(kPi / 2), std::invalid_argument);
}

TEST(GuessProbability, CandidateCounts) {
  EXPECT_DOUBLE_EQ(guess_probability(0.0), 0.25);
  EXPECT_DOUBLE_EQ(guess_probability(0.3), 0.125);
  EXPECT_DOUBLE_EQ(guess_probability(kPi / 4), 0.25);
  EXPECT_DOUBLE_EQ(guess_probability(kPi / 2), 0.25);
  const auto c = guess_candidates(kPi / 4);
  expect_angles(c, {kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4});
  EXPECT_THROW(guess_probability(2.0), std::invalid_argument);
  // Every candidate is realized by some row of the lambda1 family.
  for (double l : {0.2, 0.9, 1.3}) {
    std::vector<double> realized;
    for (const auto& r : enumerate_case2(l)) realized.insert(realized.end(), r.op.alphas.begin(), r.op.alphas.end());
    for (double a : guess_candidates(l)) EXPECT_TRUE(has_angle(realized, a)) << l << " " << a;
  }
}
