#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "crio/protocol.hpp"
#include "oracles.hpp"

using namespace crio;

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 random_qubit(Rng& rng) {
  return QuantumState::random({"t"}, rng).amplitudes();
}

CrioConfig random_config(int N, Rng& rng) {
  CrioConfig cfg;
  cfg.N = N;
  for (int i = 0; i < N; ++i) {
    cfg.axes.push_back(PauliAxis::random(rng));
    cfg.betas.push_back(2 * kPi * uniform01(rng) - kPi);
    cfg.targets.push_back(random_qubit(rng));
  }
  return cfg;
}

}  // namespace

TEST(Tripartite, EveryBranchRealizesTheRotation) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PauliAxis axis = PauliAxis::random(rng);
    const double alpha = 2 * kPi * uniform01(rng);
    const Vec2 psi = random_qubit(rng);
    const ProtocolResult r = run_tripartite(axis, alpha, psi, true);
    ASSERT_EQ(r.branches.size(), 8u);
    EXPECT_NEAR(r.total_probability(), 1.0, 1e-12);
    for (const auto& b : r.branches) {
      EXPECT_NEAR(b.probability, 0.125, 1e-12);
      EXPECT_NEAR(b.fidelity, 1.0, 1e-10) << b.outcome_bits();
      ASSERT_TRUE(b.target_state.has_value());
    }
  }
}

TEST(Tripartite, ExplicitOutputMatchesDenseOracle) {
  const PauliAxis axis = PauliAxis::normalized(1, 2, 2);
  const double alpha = 0.3;
  Vec2 psi(0.6, cplx(0.0, 0.8));
  const ProtocolResult r = run_tripartite(axis, alpha, psi, true);
  const oracle::Mat u = oracle::expi(oracle::sigma(1.0 / 3, 2.0 / 3, 2.0 / 3), alpha);
  const oracle::Vec want = u * oracle::Vec(psi);
  for (const auto& b : r.branches) {
    const cplx overlap = want.dot(b.target_state->amplitudes());
    EXPECT_NEAR(std::abs(overlap), 1.0, 1e-10);
  }
}

TEST(Fivepartite, BothTargetsRotateInEveryBranch) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::array<PauliAxis, 2> axes{PauliAxis::random(rng), PauliAxis::random(rng)};
    const std::array<Vec2, 2> targets{random_qubit(rng), random_qubit(rng)};
    const double alpha = uniform01(rng) * 2 * kPi;
    const double beta = uniform01(rng) * 2 * kPi;
    const ProtocolResult r = run_fivepartite(axes, alpha, beta, targets, true);
    ASSERT_EQ(r.branches.size(), 32u);
    EXPECT_NEAR(r.total_probability(), 1.0, 1e-12);
    for (const auto& b : r.branches) {
      EXPECT_NEAR(b.fidelity, 1.0, 1e-10);
      ASSERT_EQ(b.target_fidelities.size(), 2u);
      EXPECT_NEAR(b.target_fidelities[0], 1.0, 1e-10);
      EXPECT_NEAR(b.target_fidelities[1], 1.0, 1e-10);
    }
  }
}

TEST(Crio, GeneralRunReachesUnitFidelityUpToFourGroups) {
  Rng rng(2024);
  for (int N = 1; N <= 4; ++N) {
    const CrioConfig cfg = random_config(N, rng);
    const ProtocolResult r = run_crio(cfg);
    EXPECT_EQ(r.branches.size(), std::size_t{1} << (2 * N + 1));
    EXPECT_NEAR(r.total_probability(), 1.0, 1e-12);
    EXPECT_GE(r.min_fidelity(), 1.0 - 1e-10) << "N=" << N;
  }
}

TEST(Crio, GeneralCodePathMatchesTripartiteScript) {
  Rng rng(8);
  CrioConfig cfg = random_config(1, rng);
  const ProtocolResult general = run_crio(cfg);
  const ProtocolResult script = run_tripartite(cfg.axes[0], cfg.betas[0], cfg.targets[0], true);
  ASSERT_EQ(general.branches.size(), script.branches.size());
  for (std::size_t i = 0; i < general.branches.size(); ++i) {
    const auto& g = general.branches[i];
    const auto& s = script.branches[i];
    EXPECT_EQ(g.outcome_bits(), s.outcome_bits());
    EXPECT_NEAR(g.probability, s.probability, 1e-14);
    EXPECT_LE((g.target_density - s.target_density).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(g.corrections.size(), s.corrections.size());
  }
}

TEST(Crio, GeneralCodePathMatchesFivepartiteScript) {
  Rng rng(9);
  CrioConfig cfg = random_config(2, rng);
  const ProtocolResult general = run_crio(cfg);
  const ProtocolResult script = run_fivepartite({cfg.axes[0], cfg.axes[1]}, cfg.betas[0], cfg.betas[1],
                                                {cfg.targets[0], cfg.targets[1]}, true);
  ASSERT_EQ(general.branches.size(), script.branches.size());
  for (std::size_t i = 0; i < general.branches.size(); ++i) {
    EXPECT_EQ(general.branches[i].outcome_bits(), script.branches[i].outcome_bits());
    EXPECT_NEAR(general.branches[i].probability, script.branches[i].probability, 1e-14);
    EXPECT_LE((general.branches[i].target_density - script.branches[i].target_density).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Crio, ChoiModeGivesUnitProcessFidelity) {
  Rng rng(77);
  for (int N = 1; N <= 3; ++N) {
    const CrioConfig cfg = random_config(N, rng);
    RunOptions opts;
    opts.attach_references = true;
    const ProtocolResult r = run_crio(cfg, opts);
    EXPECT_EQ(r.branches.front().target_labels.size(), static_cast<std::size_t>(2 * N));
    EXPECT_GE(r.min_fidelity(), 1.0 - 1e-10);
  }
}

TEST(Crio, MeasurementAndMessageAudit) {
  Rng rng(3);
  for (int N = 1; N <= 3; ++N) {
    const ProtocolResult r = run_crio(random_config(N, rng));
    for (const auto& b : r.branches) {
      ASSERT_EQ(b.outcomes.size(), static_cast<std::size_t>(1 + 2 * N));
      // STEP 3 fans out to N receivers, STEPs 4 and 6 are point to point.
      ASSERT_EQ(b.transcript.size(), static_cast<std::size_t>(3 * N));
      for (const auto& m : b.transcript) {
        EXPECT_TRUE(m.payload == 0 || m.payload == 1);
        EXPECT_NE(m.from, m.to);
      }
      EXPECT_EQ(b.outcomes[0].qubit, "a1");
      EXPECT_EQ(b.outcomes[0].basis, Basis::X);
    }
  }
}

TEST(Crio, MessagesCarryTheSendersOwnOutcome) {
  Rng rng(4);
  const ProtocolResult r = run_crio(random_config(2, rng));
  for (const auto& b : r.branches) {
    for (const auto& m : b.transcript) {
      const std::string qubit = "a" + m.from.substr(1);
      bool found = false;
      for (const auto& rec : b.outcomes) {
        if (rec.qubit == qubit) {
          EXPECT_EQ(rec.outcome, m.payload);
          found = true;
        }
      }
      EXPECT_TRUE(found) << m.from;
    }
  }
}

TEST(Crio, CorrectionsFollowTheReceivedBits) {
  Rng rng(6);
  const ProtocolResult r = run_crio(random_config(1, rng));
  for (const auto& b : r.branches) {
    int ones = 0;
    for (const auto& rec : b.outcomes) ones += rec.outcome;
    EXPECT_EQ(b.corrections.size(), static_cast<std::size_t>(ones));
  }
}

TEST(Crio, DeniedControllerBreaksTheOperation) {
  Rng rng(12);
  for (int N = 1; N <= 3; ++N) {
    CrioConfig cfg = random_config(N, rng);
    cfg.permitted = false;
    for (int g = 0; g < 2; ++g) {
      cfg.denial_guess = g;
      const ProtocolResult r = run_crio(cfg);
      EXPECT_FALSE(r.completed);
      EXPECT_EQ(r.branches.size(), std::size_t{1} << (2 * N));
      EXPECT_NEAR(r.total_probability(), 1.0, 1e-12);
      EXPECT_LT(r.min_fidelity(), 1.0 - kDenialMargin) << "N=" << N << " guess=" << g;
      for (const auto& b : r.branches) EXPECT_FALSE(b.target_state.has_value());
    }
  }
}

TEST(Crio, DenialBreaksEvenTheZeroRotation) {
  // Without the controller's bit the target picks up sigma_n with probability 1/2,
  // so even beta = 0 fails on a target that is not an eigenstate of sigma_n.
  Rng rng(14);
  CrioConfig cfg = random_config(1, rng);
  cfg.betas = {0.0};
  EXPECT_GE(run_crio(cfg).min_fidelity(), 1.0 - 1e-10);
  cfg.permitted = false;
  for (int g = 0; g < 2; ++g) {
    cfg.denial_guess = g;
    EXPECT_LT(run_crio(cfg).min_fidelity(), 1.0 - kDenialMargin);
  }
}

TEST(Crio, DenialReportPurityIsOneHalf) {
  Rng rng(13);
  for (int N = 1; N <= 3; ++N) {
    const CrioConfig cfg = random_config(N, rng);
    const ControlDenialReport rep = control_denial_report(N, cfg.axes, cfg.betas, cfg.targets);
    EXPECT_NEAR(rep.reduced_purity, 0.5, 1e-10);
    EXPECT_TRUE(rep.denial_effective);
    EXPECT_LT(rep.min_fidelity_by_guess[0], 1.0 - kDenialMargin);
    EXPECT_LT(rep.min_fidelity_by_guess[1], 1.0 - kDenialMargin);
  }
}

TEST(Crio, UncontrolledGroupsDoNotNeedTheController) {
  Rng rng(21);
  CrioConfig cfg = random_config(3, rng);
  cfg.controlled_groups = std::set<int>{3};
  const ProtocolResult ok = run_crio(cfg);
  EXPECT_GE(ok.min_fidelity(), 1.0 - 1e-10);
  // Only A2 and A3 hear from the controller now.
  for (const auto& b : ok.branches) EXPECT_EQ(b.transcript.size(), 2u + 6u);

  cfg.permitted = false;
  const ProtocolResult denied = run_crio(cfg);
  double worst_controlled = 1.0;
  for (const auto& b : denied.branches) {
    ASSERT_EQ(b.target_fidelities.size(), 3u);
    EXPECT_NEAR(b.target_fidelities[2], 1.0, 1e-10);
    worst_controlled = std::min({worst_controlled, b.target_fidelities[0], b.target_fidelities[1]});
  }
  EXPECT_LT(worst_controlled, 1.0 - kDenialMargin);
}

TEST(Crio, SampleModeIsSeededAndHonoursForcedOutcomes) {
  Rng rng(30);
  const CrioConfig cfg = random_config(2, rng);
  RunOptions opts;
  opts.mode = RunMode::Sample;
  opts.seed = 99;
  const ProtocolResult a = run_crio(cfg, opts);
  const ProtocolResult b = run_crio(cfg, opts);
  ASSERT_EQ(a.branches.size(), 1u);
  EXPECT_EQ(a.branches[0].outcome_bits(), b.branches[0].outcome_bits());
  EXPECT_EQ(a.transcript.size(), b.transcript.size());
  EXPECT_NEAR(a.branches[0].fidelity, 1.0, 1e-10);

  opts.forced_outcomes = {1, 0, 1, 1, 0};
  const ProtocolResult f = run_crio(cfg, opts);
  EXPECT_EQ(f.branches[0].outcome_bits(), "10110");
  EXPECT_NEAR(f.branches[0].probability, 1.0 / 32, 1e-12);
}

TEST(Crio, RejectsMalformedConfig) {
  Rng rng(1);
  CrioConfig cfg = random_config(2, rng);
  cfg.betas.pop_back();
  EXPECT_THROW(run_crio(cfg), std::invalid_argument);
  cfg = random_config(2, rng);
  cfg.targets[0] = Vec2(1.0, 1.0);
  EXPECT_THROW(run_crio(cfg), std::invalid_argument);
  cfg = random_config(2, rng);
  cfg.controlled_groups = std::set<int>{2};
  EXPECT_THROW(run_crio(cfg), std::invalid_argument);
  cfg = random_config(2, rng);
  cfg.N = 0;
  EXPECT_THROW(run_crio(cfg), std::invalid_argument);
}

TEST(Engine, LocalityIsEnforced) {
  QuantumState init = QuantumState::basis_state({"x", "y"}, 0);
  LoccProgram prog(init, {{"P", {"x"}, std::nullopt, std::nullopt}, {"Q", {"y"}, std::nullopt, std::nullopt}},
                   {"y"}, {QuantumState::single("y", Vec2(1.0, 0.0))});
  prog.add_action("bad", [](Session& s) { s.apply("P", gates::pauli_x(), "y", "X"); });
  EXPECT_THROW(prog.run({}), LocalityViolation);

  LoccProgram joint(init, {{"P", {"x"}, std::nullopt, std::nullopt}, {"Q", {"y"}, std::nullopt, std::nullopt}},
                    {"y"}, {QuantumState::single("y", Vec2(1.0, 0.0))});
  joint.add_action("bad", [](Session& s) { s.apply_controlled("P", "x", "y", gates::pauli_x(), "CX"); });
  EXPECT_THROW(joint.run({}), LocalityViolation);

  LoccProgram meas(init, {{"P", {"x"}, std::nullopt, std::nullopt}, {"Q", {"y"}, std::nullopt, std::nullopt}},
                   {"y"}, {QuantumState::single("y", Vec2(1.0, 0.0))});
  meas.add_measurement("bad", "Q", "x", Basis::Z);
  EXPECT_THROW(meas.run({}), LocalityViolation);
}

TEST(Engine, ForcingAnImpossibleOutcomeIsAnError) {
  QuantumState init = QuantumState::basis_state({"x", "y"}, 0);
  LoccProgram prog(init, {{"P", {"x"}, std::nullopt, std::nullopt}, {"Q", {"y"}, std::nullopt, std::nullopt}},
                   {"y"}, {QuantumState::single("y", Vec2(1.0, 0.0))});
  prog.add_measurement("m", "P", "x", Basis::Z);
  RunOptions opts;
  opts.mode = RunMode::Sample;
  opts.forced_outcomes = {1};
  EXPECT_THROW(prog.run(opts), std::domain_error);
  // Enumeration silently drops the empty branch.
  EXPECT_EQ(prog.run({}).branches.size(), 1u);
}

TEST(Engine, ObserverSeesEveryStepOfEveryBranch) {
  Rng rng(2);
  std::map<std::string, int> seen;
  RunOptions opts;
  opts.observer = [&](std::string_view tag, const Session&) { ++seen[std::string(tag)]; };
  run_crio(random_config(1, rng), opts);
  EXPECT_EQ(seen["STEP1"], 1);
  EXPECT_EQ(seen["STEP3"], 2 + 2);
  EXPECT_EQ(seen["STEP6"], 8 + 8);
}
