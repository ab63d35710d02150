#include "crio/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "crio/gm.hpp"
#include "crio/graphstate.hpp"
#include "crio/povm.hpp"
#include "crio/protocol.hpp"
#include "crio/stator.hpp"

namespace crio {

namespace {

constexpr double kPi = std::numbers::pi;

CrioConfig random_config(int N, Rng& rng) {
  CrioConfig c;
  c.N = N;
  for (int i = 0; i < N; ++i) {
    c.axes.push_back(PauliAxis::random(rng));
    c.betas.push_back(2 * kPi * uniform01(rng));
    c.targets.push_back(QuantumState::random({"O"}, rng).amplitudes());
  }
  return c;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult run_check(std::string name, const std::function<std::string(bool&)>& body) {
  CheckResult r{std::move(name), false, ""};
  try {
    r.detail = body(r.passed);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace

std::vector<CheckResult> verify_all(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  out.push_back(run_check("protocol fidelity N=1..3", [&](bool& ok) {
    double worst = 1.0;
    for (int N = 1; N <= 3; ++N) {
      for (int d = 0; d < 3; ++d) worst = std::min(worst, run_crio(random_config(N, rng)).min_fidelity());
    }
    ok = worst >= 1.0 - 1e-10;
    return "min fidelity " + std::to_string(worst);
  }));

  out.push_back(run_check("graph state vs amplitude oracle N=1..3", [&](bool& ok) {
    double err = 0.0;
    for (int N = 1; N <= 3; ++N) {
      const QuantumState s = build_graph_state(crio_graph(CrioTopology::full(N)));
      const int n = 2 * N + 1;
      for (std::uint64_t i = 0; i < s.dimension(); ++i) {
        std::string b(static_cast<std::size_t>(n), '0');
        for (int q = 0; q < n; ++q) {
          if ((i >> (n - 1 - q)) & 1U) b[static_cast<std::size_t>(q)] = '1';
        }
        err = std::max(err, std::abs(s.amplitudes()(static_cast<Eigen::Index>(i)) - amplitude_oracle(N, b)));
      }
    }
    ok = err <= 1e-12;
    return "max error " + fmt(err);
  }));

  out.push_back(run_check("geometric measure of the channel equals N", [&](bool& ok) {
    double err = 0.0;
    for (int N = 1; N <= 3; ++N) err = std::max(err, std::abs(gm_optimize(g_state(N), GMMode::NonNegative).G - N));
    ok = err <= 1e-6;
    return "max |G - N| " + fmt(err);
  }));

  out.push_back(run_check("geometric measure of phi_2N equals N", [&](bool& ok) {
    double err = 0.0;
    for (int N = 1; N <= 3; ++N) err = std::max(err, std::abs(gm_phi(N).G - N));
    ok = err <= 1e-6;
    return "max |G - N| " + fmt(err);
  }));

  out.push_back(run_check("POVM outcome probabilities are 1/4", [&](bool& ok) {
    double err = 0.0;
    for (int i = 0; i < 100; ++i) {
      const PovmParams p = PovmParams::complete(kPi / 2 * uniform01(rng), 2 * kPi * uniform01(rng),
                                                kPi / 2 * uniform01(rng), 2 * kPi * uniform01(rng));
      for (int j = 1; j <= 2; ++j) {
        for (int k = 1; k <= 2; ++k) err = std::max(err, std::abs(outcome_probability(p, j, k) - 0.25));
      }
    }
    ok = err <= 1e-10;
    return "max error " + fmt(err);
  }));

  out.push_back(run_check("control power 1/2 on multiples of pi/4, else 1/4", [&](bool& ok) {
    ok = true;
    for (int m = 0; m < 8; ++m) ok = ok && std::abs(success_rate(m * kPi / 4) - 0.5) <= 1e-10;
    for (int i = 0; i < 10; ++i) {
      const double a = (i + 0.37) * kPi / 5;
      ok = ok && std::abs(success_rate(a) - 0.25) <= 1e-10;
    }
    return std::string(ok ? "dichotomy holds" : "dichotomy violated");
  }));

  out.push_back(run_check("control denial N=1", [&](bool& ok) {
    const CrioConfig c = random_config(1, rng);
    const ControlDenialReport r = control_denial_report(1, c.axes, c.betas, c.targets);
    ok = r.denial_effective && r.reduced_purity < 1.0 - kDenialMargin;
    return "purity " + std::to_string(r.reduced_purity) + ", best-guess min fidelity " +
           std::to_string(r.min_fidelity_by_guess[static_cast<std::size_t>(r.best_guess)]);
  }));

  out.push_back(run_check("eigenoperator identities N=1..3", [&](bool& ok) {
    double worst = 0.0;
    for (int N = 1; N <= 3; ++N) {
      std::vector<PauliAxis> axes;
      std::vector<std::string> controls;
      std::vector<std::string> targets;
      std::vector<StatorTerm> terms;
      for (int k = 0; k < N; ++k) {
        axes.push_back(PauliAxis::random(rng));
        controls.push_back("a" + std::to_string(k + 2));
        targets.push_back("O" + std::to_string(N + 2 + k));
      }
      for (std::uint64_t q = 0; q < (std::uint64_t{1} << N); ++q) terms.push_back({q, q, cplx(1.0, 0.0)});
      const Stator s(controls, targets, axes, terms);
      for (int t = 0; t < 20; ++t) {
        std::vector<double> alphas;
        for (int k = 0; k < N; ++k) alphas.push_back(2 * kPi * uniform01(rng));
        worst = std::max(worst, eigenoperator_residual(s, alphas));
      }
    }
    ok = worst <= 1e-12;
    return "max residual " + fmt(worst);
  }));

  out.push_back(run_check("partial control N=2, only (A2, A4) controlled", [&](bool& ok) {
    CrioConfig c = random_config(2, rng);
    c.controlled_groups = std::set<int>{};
    const ProtocolResult r = run_crio(c);
    double worst = 1.0;
    for (const auto& b : r.branches) worst = std::min(worst, b.target_fidelities.at(0));
    ok = worst >= 1.0 - 1e-10;
    return "min fidelity on O4 " + std::to_string(worst);
  }));

  return out;
}

}  // namespace crio
