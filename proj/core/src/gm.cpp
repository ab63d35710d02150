#include "crio/gm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "crio/graphstate.hpp"

namespace crio {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;
constexpr int kPhaseScan = 8;

// Golden-section search for a maximum of a unimodal f on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr double r = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (a + b);
  // Endpoints can win when the maximum sits on the boundary.
  double best = mid;
  double fbest = f(mid);
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > fbest) {
      fbest = fx;
      best = x;
    }
  }
  return best;
}

Vec2 factor(double theta, double phi) {
  return {std::cos(theta), std::polar(std::sin(theta), phi)};
}

// Kronecker product of conj(factor) over a run of qubits.
Eigen::VectorXcd bra_block(const std::vector<Vec2>& f, std::size_t begin, std::size_t end) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (std::size_t j = begin; j < end; ++j) {
    Eigen::VectorXcd next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * std::conj(f[j](0));
      next(2 * i + 1) = v(i) * std::conj(f[j](1));
    }
    v = std::move(next);
  }
  return v;
}

// (A, B) with <phi|psi> = conj(c_j) A + conj(s_j) B for the factor (c_j, s_j) on qubit j.
std::array<cplx, 2> environment(const Eigen::VectorXcd& psi, const std::vector<Vec2>& f, std::size_t j) {
  const std::size_t n = f.size();
  const Eigen::VectorXcd left = bra_block(f, 0, j);
  const Eigen::VectorXcd right = bra_block(f, j + 1, n);
  const Eigen::Index rdim = right.size();
  std::array<cplx, 2> out{};
  for (Eigen::Index a = 0; a < left.size(); ++a) {
    for (int b = 0; b < 2; ++b) {
      const Eigen::Index base = (a * 2 + b) * rdim;
      out[static_cast<std::size_t>(b)] += left(a) * right.cwiseProduct(psi.segment(base, rdim)).sum();
    }
  }
  return out;
}

struct Restart {
  double value = 0.0;
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<double> trace;
};

Restart ascend(const Eigen::VectorXcd& psi, std::size_t n, bool general, std::vector<double> thetas,
               std::vector<double> phis, const GMOptions& opt) {
  std::vector<Vec2> f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = factor(thetas[j], phis[j]);
  auto value = [&] {
    const std::array<cplx, 2> e = environment(psi, f, 0);
    return std::norm(std::conj(f[0](0)) * e[0] + std::conj(f[0](1)) * e[1]);
  };
  Restart r;
  double current = value();
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto [A, B] = environment(psi, f, j);
      if (general) {
        auto by_phi = [&](double p) {
          return std::norm(std::cos(thetas[j]) * A + std::polar(std::sin(thetas[j]), -p) * B);
        };
        int best_k = 0;
        double best_v = -1.0;
        for (int k = 0; k < kPhaseScan; ++k) {
          const double v = by_phi(2 * kPi * k / kPhaseScan);
          if (v > best_v) {
            best_v = v;
            best_k = k;
          }
        }
        const double centre = 2 * kPi * best_k / kPhaseScan;
        double p = golden_max(by_phi, centre - 2 * kPi / kPhaseScan, centre + 2 * kPi / kPhaseScan, opt.tol);
        p = std::fmod(p, 2 * kPi);
        if (p < 0) p += 2 * kPi;
        phis[j] = p;
      }
      auto by_theta = [&](double t) { return std::norm(std::cos(t) * A + std::polar(std::sin(t), -phis[j]) * B); };
      thetas[j] = golden_max(by_theta, 0.0, kHalfPi, opt.tol);
      f[j] = factor(thetas[j], phis[j]);
    }
    const double next = value();
    r.trace.push_back(next);
    const bool stalled = next - current <= opt.tol * opt.tol;
    current = std::max(current, next);
    if (stalled) break;
  }
  r.value = current;
  r.thetas = std::move(thetas);
  r.phis = std::move(phis);
  return r;
}

}  // namespace

Eigen::VectorXcd ProductAnsatz::vector() const {
  if (phis && phis->size() != thetas.size()) {
    throw std::invalid_argument("phis must match thetas in length");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    const Vec2 fj = factor(thetas[j], phis ? (*phis)[j] : 0.0);
    Eigen::VectorXcd next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * fj(0);
      next(2 * i + 1) = v(i) * fj(1);
    }
    v = std::move(next);
  }
  return v;
}

cplx overlap(const QuantumState& state, const ProductAnsatz& ansatz) {
  if (ansatz.thetas.size() != state.num_qubits()) {
    throw std::invalid_argument("ansatz needs one angle per qubit");
  }
  return ansatz.vector().dot(state.amplitudes());
}

QuantumState hadamard_reduce(const QuantumState& state, std::span<const std::string> qubits) {
  QuantumState out = state;
  for (const auto& q : qubits) out.apply(gates::hadamard(), q);
  return out;
}

std::vector<std::string> crio_reduction_qubits(int N) {
  if (N < 1) {
    throw std::invalid_argument("N must be at least 1");
  }
  std::vector<std::string> q{"a1"};
  for (int k = 3; k <= N + 1; ++k) q.push_back("a" + std::to_string(k));
  return q;
}

QuantumState g_state(int N) {
  const auto qubits = crio_reduction_qubits(N);
  return hadamard_reduce(build_graph_state(crio_graph(CrioTopology::full(N))), qubits);
}

double geometric_measure(double lambda_sq) {
  if (!(lambda_sq > 0.0)) {
    throw std::domain_error("lambda^2 must be positive");
  }
  return -std::log2(lambda_sq);
}

GMResult gm_optimize(const QuantumState& state, GMMode mode, const GMOptions& options) {
  if (options.restarts < 1 || !(options.tol > 0.0)) {
    throw std::invalid_argument("need at least one restart and a positive tolerance");
  }
  const Eigen::VectorXcd& psi = state.amplitudes();
  const bool general = mode == GMMode::General;
  if (!general) {
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      if (std::abs(psi(i).imag()) > kAlgebraTol || psi(i).real() < -kAlgebraTol) {
        throw std::invalid_argument("non-negative mode needs real amplitudes >= 0; reduce the state first");
      }
    }
  }
  const std::size_t n = state.num_qubits();
  Rng rng(options.seed);
  std::vector<Restart> runs;
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<double> thetas(n);
    std::vector<double> phis(n, 0.0);
    for (auto& t : thetas) t = kHalfPi * uniform01(rng);
    if (general) {
      for (auto& p : phis) p = 2 * kPi * uniform01(rng);
    }
    runs.push_back(ascend(psi, n, general, std::move(thetas), std::move(phis), options));
  }

  GMResult res;
  for (const auto& r : runs) res.restart_values.push_back(r.value);
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const double d = runs[i].value - runs[best].value;
    if (d > kAlgebraTol || (std::abs(d) <= kAlgebraTol && runs[i].thetas < runs[best].thetas)) best = i;
  }
  std::vector<double> sorted = res.restart_values;
  std::sort(sorted.rbegin(), sorted.rend());
  res.lambda_sq = std::min(runs[best].value, 1.0);
  res.G = geometric_measure(res.lambda_sq);
  res.argmax.thetas = runs[best].thetas;
  if (general) res.argmax.phis = runs[best].phis;
  res.restarts_used = options.restarts;
  res.converged = sorted.size() > 1 && sorted[0] - sorted[1] <= options.tol;
  res.trace = runs[best].trace;
  return res;
}

double closed_form_overlap(int N, std::span<const double> th) {
  if (N < 1 || th.size() != static_cast<std::size_t>(2 * N + 1)) {
    throw std::invalid_argument("closed form needs 2N+1 angles");
  }
  for (double t : th) {
    if (!(t >= -kAlgebraTol && t <= kHalfPi + kAlgebraTol)) {
      throw std::invalid_argument("angles must lie in [0, pi/2]");
    }
  }
  auto at = [&](int i) { return th[static_cast<std::size_t>(i - 1)]; };
  double c = std::cos(at(1));
  double s = std::sin(at(1));
  for (int t = 2; t <= N + 1; ++t) {
    c *= std::cos(at(t) - at(t + N));
    s *= std::sin(at(t) + at(t + N));
  }
  return (c + s) / std::pow(std::numbers::sqrt2, N + 1);
}

GMResult gm_phi(int N, const GMOptions& options) {
  return gm_optimize(phi_state(N), GMMode::NonNegative, options);
}

std::vector<GMTableRow> gm_table(int max_N, const GMOptions& options) {
  std::vector<GMTableRow> rows;
  for (int N = 1; N <= max_N; ++N) {
    GMTableRow row;
    row.N = N;
    row.crio_state = "h_" + std::to_string(2 * N + 1);
    row.crio_gm = gm_optimize(g_state(N), GMMode::NonNegative, options).G;
    row.rio_state = "phi_" + std::to_string(2 * N);
    row.rio_gm = gm_phi(N, options).G;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string gm_table_csv(const std::vector<GMTableRow>& rows) {
  std::ostringstream out;
  out << "number_of_systems,crio_state,crio_gm,rio_state,rio_gm\n";
  out.setf(std::ios::fixed);
  out.precision(9);
  for (const auto& r : rows) {
    out << r.N << ',' << r.crio_state << ',' << r.crio_gm << ',' << r.rio_state << ',' << r.rio_gm << '\n';
  }
  return out.str();
}

}  // namespace crio
