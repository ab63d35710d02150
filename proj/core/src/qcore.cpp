#include "crio/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace crio {

namespace {

constexpr cplx kI{0.0, 1.0};

std::string label_error(std::string_view label) {
  return "unknown qubit label '" + std::string(label) + "'";
}

}  // namespace

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// PauliAxis

PauliAxis::PauliAxis(double x, double y, double z) : x_(x), y_(y), z_(z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("PauliAxis must have unit norm");
  }
}

PauliAxis PauliAxis::normalized(double x, double y, double z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite axis");
  }
  return {x / norm, y / norm, z / norm};
}

PauliAxis PauliAxis::random(Rng& rng) {
  // Uniform on the sphere: z uniform in [-1,1], azimuth uniform.
  const double z = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return normalized(r * std::cos(phi), r * std::sin(phi), z);
}

Mat2 pauli_axis_matrix(const PauliAxis& axis) {
  Mat2 m;
  m << cplx(axis.z(), 0.0), cplx(axis.x(), -axis.y()),
       cplx(axis.x(), axis.y()), cplx(-axis.z(), 0.0);
  return m;
}

Mat2 rotation(const PauliAxis& axis, double alpha) {
  return std::cos(alpha) * gates::identity() + kI * std::sin(alpha) * pauli_axis_matrix(axis);
}

namespace gates {

Mat2 identity() { return Mat2::Identity(); }

Mat2 hadamard() {
  const double s = 1.0 / std::numbers::sqrt2;
  Mat2 m;
  m << s, s, s, -s;
  return m;
}

Mat2 pauli_x() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace gates

bool is_unitary(const Mat2& m, double tol) {
  return (m.adjoint() * m - Mat2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

std::string_view to_string(Basis basis) {
  return basis == Basis::Z ? "Z" : "X";
}

Vec2 basis_vector(Basis basis, int outcome) {
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("measurement outcome must be 0 or 1");
  }
  Vec2 v;
  if (basis == Basis::Z) {
    v << (outcome == 0 ? 1.0 : 0.0), (outcome == 0 ? 0.0 : 1.0);
  } else {
    const double s = 1.0 / std::numbers::sqrt2;
    v << s, (outcome == 0 ? s : -s);
  }
  return v;
}

// ---------------------------------------------------------------------------
// QuantumState

QuantumState::QuantumState(std::vector<std::string> labels, Eigen::VectorXcd amplitudes)
    : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
  if (labels_.empty() || labels_.size() > 24) {
    throw std::invalid_argument("QuantumState supports 1..24 qubits");
  }
  if (amplitudes_.size() != (Eigen::Index{1} << labels_.size())) {
    throw std::invalid_argument("amplitude vector length must be 2^num_qubits");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty() || !seen.insert(l).second) {
      throw std::invalid_argument("qubit labels must be non-empty and distinct");
    }
  }
  if (std::abs(amplitudes_.norm() - 1.0) > kPipelineTol) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

QuantumState QuantumState::basis_state(std::vector<std::string> labels, std::uint64_t index) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << labels.size());
  if (index >= static_cast<std::uint64_t>(amps.size())) {
    throw std::invalid_argument("basis index out of range");
  }
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return {std::move(labels), std::move(amps)};
}

QuantumState QuantumState::plus_state(std::vector<std::string> labels) {
  const auto dim = Eigen::Index{1} << labels.size();
  Eigen::VectorXcd amps = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return {std::move(labels), std::move(amps)};
}

QuantumState QuantumState::product(std::vector<std::string> labels, std::span<const Vec2> factors) {
  if (labels.size() != factors.size()) {
    throw std::invalid_argument("one factor per qubit required");
  }
  Eigen::VectorXcd amps(1);
  amps(0) = 1.0;
  for (const auto& f : factors) {
    Eigen::VectorXcd next(amps.size() * 2);
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      next(2 * i) = amps(i) * f(0);
      next(2 * i + 1) = amps(i) * f(1);
    }
    amps = std::move(next);
  }
  return {std::move(labels), std::move(amps)};
}

QuantumState QuantumState::single(std::string label, const Vec2& amplitudes) {
  return {{std::move(label)}, Eigen::VectorXcd(amplitudes)};
}

QuantumState QuantumState::random(std::vector<std::string> labels, Rng& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd amps(Eigen::Index{1} << labels.size());
  for (auto& a : amps) {
    a = cplx(gauss(rng), gauss(rng));
  }
  amps.normalize();
  return {std::move(labels), std::move(amps)};
}

bool QuantumState::has_qubit(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t QuantumState::position(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument(label_error(label));
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

std::uint64_t QuantumState::bit_of(std::string_view label) const {
  return std::uint64_t{1} << (labels_.size() - 1 - position(label));
}

cplx QuantumState::amplitude(std::string_view bits) const {
  if (bits.size() != labels_.size()) {
    throw std::invalid_argument("bitstring length must equal qubit count");
  }
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bitstring must contain only 0 and 1");
    }
    index = (index << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return amplitudes_(static_cast<Eigen::Index>(index));
}

double QuantumState::norm() const { return amplitudes_.norm(); }

QuantumState& QuantumState::apply(const Mat2& gate, std::string_view qubit) {
  if (!is_unitary(gate)) {
    throw std::invalid_argument("gate is not unitary");
  }
  const std::uint64_t bit = bit_of(qubit);
  const auto dim = dimension();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(i);
    const auto i1 = static_cast<Eigen::Index>(i | bit);
    const cplx a0 = amplitudes_(i0);
    const cplx a1 = amplitudes_(i1);
    amplitudes_(i0) = gate(0, 0) * a0 + gate(0, 1) * a1;
    amplitudes_(i1) = gate(1, 0) * a0 + gate(1, 1) * a1;
  }
  return *this;
}

QuantumState& QuantumState::apply_cz(std::string_view q1, std::string_view q2) {
  const std::uint64_t b1 = bit_of(q1);
  const std::uint64_t b2 = bit_of(q2);
  if (b1 == b2) {
    throw std::invalid_argument("CZ requires two distinct qubits");
  }
  const auto dim = dimension();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & b1) && (i & b2)) {
      amplitudes_(static_cast<Eigen::Index>(i)) = -amplitudes_(static_cast<Eigen::Index>(i));
    }
  }
  return *this;
}

QuantumState& QuantumState::apply_controlled(std::string_view control, std::string_view target,
                                             const Mat2& gate) {
  if (!is_unitary(gate)) {
    throw std::invalid_argument("gate is not unitary");
  }
  const std::uint64_t cb = bit_of(control);
  const std::uint64_t tb = bit_of(target);
  if (cb == tb) {
    throw std::invalid_argument("controlled gate requires distinct control and target");
  }
  const auto dim = dimension();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (!(i & cb) || (i & tb)) continue;
    const auto i0 = static_cast<Eigen::Index>(i);
    const auto i1 = static_cast<Eigen::Index>(i | tb);
    const cplx a0 = amplitudes_(i0);
    const cplx a1 = amplitudes_(i1);
    amplitudes_(i0) = gate(0, 0) * a0 + gate(0, 1) * a1;
    amplitudes_(i1) = gate(1, 0) * a0 + gate(1, 1) * a1;
  }
  return *this;
}

std::array<double, 2> QuantumState::outcome_probabilities(std::string_view qubit, Basis basis) const {
  const std::uint64_t bit = bit_of(qubit);
  std::array<double, 2> p{0.0, 0.0};
  const auto dim = dimension();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const cplx a0 = amplitudes_(static_cast<Eigen::Index>(i));
    const cplx a1 = amplitudes_(static_cast<Eigen::Index>(i | bit));
    if (basis == Basis::Z) {
      p[0] += std::norm(a0);
      p[1] += std::norm(a1);
    } else {
      p[0] += 0.5 * std::norm(a0 + a1);
      p[1] += 0.5 * std::norm(a0 - a1);
    }
  }
  return p;
}

MeasurementRecord QuantumState::collapse(std::size_t pos, Basis basis, int outcome, double probability) {
  const std::uint64_t bit = std::uint64_t{1} << (labels_.size() - 1 - pos);
  const Vec2 e = basis_vector(basis, outcome);
  const double scale = 1.0 / std::sqrt(probability);
  const auto dim = dimension();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(i);
    const auto i1 = static_cast<Eigen::Index>(i | bit);
    // <e|q> contracted, then re-expanded along |e>.
    const cplx proj = std::conj(e(0)) * amplitudes_(i0) + std::conj(e(1)) * amplitudes_(i1);
    amplitudes_(i0) = e(0) * proj * scale;
    amplitudes_(i1) = e(1) * proj * scale;
  }
  return {labels_[pos], basis, outcome, probability};
}

MeasurementRecord QuantumState::measure(std::string_view qubit, Basis basis, Rng& rng) {
  const auto p = outcome_probabilities(qubit, basis);
  const int outcome = uniform01(rng) < p[0] ? 0 : 1;
  return collapse(position(qubit), basis, outcome, p[outcome]);
}

MeasurementRecord QuantumState::measure(std::string_view qubit, Basis basis, int forced_outcome) {
  if (forced_outcome != 0 && forced_outcome != 1) {
    throw std::invalid_argument("forced outcome must be 0 or 1");
  }
  const auto p = outcome_probabilities(qubit, basis);
  if (p[forced_outcome] <= kAlgebraTol) {
    throw std::domain_error("cannot force a zero-probability outcome on " + std::string(qubit));
  }
  return collapse(position(qubit), basis, forced_outcome, p[forced_outcome]);
}

QuantumState QuantumState::contract(std::string_view qubit, const Vec2& bra) const {
  if (labels_.size() < 2) {
    throw std::invalid_argument("cannot contract the last qubit of a register");
  }
  const std::size_t pos = position(qubit);
  const std::size_t n = labels_.size();
  const std::uint64_t bit = std::uint64_t{1} << (n - 1 - pos);
  const std::uint64_t low_mask = bit - 1;
  Eigen::VectorXcd out(amplitudes_.size() / 2);
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    const auto uj = static_cast<std::uint64_t>(j);
    const std::uint64_t i0 = ((uj & ~low_mask) << 1) | (uj & low_mask);
    out(j) = std::conj(bra(0)) * amplitudes_(static_cast<Eigen::Index>(i0)) +
             std::conj(bra(1)) * amplitudes_(static_cast<Eigen::Index>(i0 | bit));
  }
  const double nrm = out.norm();
  if (nrm <= kAlgebraTol) {
    throw std::domain_error("contraction annihilates the state");
  }
  out /= nrm;
  std::vector<std::string> labels = labels_;
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(pos));
  return {std::move(labels), std::move(out)};
}

QuantumState QuantumState::tensor(const QuantumState& other) const {
  std::vector<std::string> labels = labels_;
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  Eigen::VectorXcd amps(amplitudes_.size() * other.amplitudes_.size());
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    amps.segment(i * other.amplitudes_.size(), other.amplitudes_.size()) = amplitudes_(i) * other.amplitudes_;
  }
  return {std::move(labels), std::move(amps)};
}

QuantumState QuantumState::reordered(std::span<const std::string> order) const {
  if (order.size() != labels_.size()) {
    throw std::invalid_argument("reorder requires a permutation of the labels");
  }
  const Eigen::MatrixXcd m = bipartition(order);
  return {std::vector<std::string>(order.begin(), order.end()), Eigen::VectorXcd(m.col(0))};
}

Eigen::MatrixXcd QuantumState::bipartition(std::span<const std::string> rows) const {
  const std::size_t n = labels_.size();
  std::vector<std::size_t> row_pos;
  std::vector<bool> is_row(n, false);
  for (const auto& l : rows) {
    const std::size_t p = position(l);
    if (is_row[p]) {
      throw std::invalid_argument("duplicate label in bipartition");
    }
    is_row[p] = true;
    row_pos.push_back(p);
  }
  std::vector<std::size_t> col_pos;
  for (std::size_t p = 0; p < n; ++p) {
    if (!is_row[p]) col_pos.push_back(p);
  }
  Eigen::MatrixXcd m(Eigen::Index{1} << row_pos.size(), Eigen::Index{1} << col_pos.size());
  const auto dim = dimension();
  for (std::uint64_t i = 0; i < dim; ++i) {
    std::uint64_t r = 0;
    for (std::size_t p : row_pos) r = (r << 1) | ((i >> (n - 1 - p)) & 1U);
    std::uint64_t c = 0;
    for (std::size_t p : col_pos) c = (c << 1) | ((i >> (n - 1 - p)) & 1U);
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = amplitudes_(static_cast<Eigen::Index>(i));
  }
  return m;
}

Eigen::MatrixXcd QuantumState::reduced_density(std::span<const std::string> keep) const {
  const Eigen::MatrixXcd m = bipartition(keep);
  return m * m.adjoint();
}

double fidelity_up_to_phase(const QuantumState& s1, const QuantumState& s2) {
  if (s1.dimension() != s2.dimension()) {
    throw std::invalid_argument("fidelity requires states of equal dimension");
  }
  return std::min(1.0, std::abs(s1.amplitudes().dot(s2.amplitudes())));
}

double fidelity_with_density(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi) {
  if (rho.rows() != psi.size() || rho.cols() != psi.size()) {
    throw std::invalid_argument("fidelity requires matching dimensions");
  }
  const double overlap = std::real(psi.dot(rho * psi));
  return std::sqrt(std::clamp(overlap, 0.0, 1.0));
}

double purity(const Eigen::MatrixXcd& rho) {
  return std::real((rho * rho).trace());
}

}  // namespace crio
