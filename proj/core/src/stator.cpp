#include "crio/stator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace crio {

namespace {

using TermKey = std::pair<std::uint64_t, std::uint64_t>;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::string bits_to_string(std::uint64_t bits, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((bits >> (width - 1 - i)) & 1U) s[i] = '1';
  }
  return s;
}

std::string format_coeff(cplx c) {
  std::ostringstream out;
  out << std::setprecision(6);
  const bool has_re = std::abs(c.real()) > kTermPruneTol;
  const bool has_im = std::abs(c.imag()) > kTermPruneTol;
  if (has_re && has_im) {
    out << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  } else if (has_im) {
    out << c.imag() << 'i';
  } else {
    out << c.real();
  }
  return out.str();
}

}  // namespace

Stator::Stator(std::vector<std::string> control_labels, std::vector<std::string> target_labels,
               std::vector<PauliAxis> target_axes, std::vector<StatorTerm> terms)
    : control_labels_(std::move(control_labels)),
      target_labels_(std::move(target_labels)),
      target_axes_(std::move(target_axes)) {
  if (target_labels_.size() != target_axes_.size()) {
    throw std::invalid_argument("one axis per target required");
  }
  if (control_labels_.size() + target_labels_.size() > 62) {
    throw std::invalid_argument("stator too large");
  }
  const std::uint64_t control_limit = std::uint64_t{1} << control_labels_.size();
  const std::uint64_t word_limit = std::uint64_t{1} << target_labels_.size();
  std::map<TermKey, cplx> merged;
  for (const auto& t : terms) {
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
      throw std::invalid_argument("stator coefficients must be finite");
    }
    if (t.control_bits >= control_limit || t.word >= word_limit) {
      throw std::invalid_argument("stator term out of range");
    }
    merged[{t.control_bits, t.word}] += t.coeff;
  }
  for (const auto& [key, c] : merged) {
    if (std::abs(c) > kTermPruneTol) {
      terms_.push_back({key.first, key.second, c});
    }
  }
  if (terms_.empty()) {
    throw std::invalid_argument("stator needs at least one nonzero term");
  }
}

Stator Stator::from_state(const QuantumState& state, std::vector<std::string> target_labels,
                          std::vector<PauliAxis> target_axes) {
  std::vector<StatorTerm> terms;
  const auto& amps = state.amplitudes();
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if (std::abs(amps(i)) > kTermPruneTol) {
      terms.push_back({static_cast<std::uint64_t>(i), 0, amps(i)});
    }
  }
  return {state.labels(), std::move(target_labels), std::move(target_axes), std::move(terms)};
}

std::size_t Stator::control_position(std::string_view label) const {
  const auto it = std::find(control_labels_.begin(), control_labels_.end(), label);
  if (it == control_labels_.end()) {
    throw std::invalid_argument("'" + std::string(label) + "' is not a control qubit of this stator");
  }
  return static_cast<std::size_t>(it - control_labels_.begin());
}

Eigen::MatrixXcd Stator::word_matrix(std::uint64_t word) const {
  const std::size_t T = target_labels_.size();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t j = 0; j < T; ++j) {
    const bool sigma = (word >> (T - 1 - j)) & 1U;
    const Eigen::MatrixXcd f = sigma ? Eigen::MatrixXcd(pauli_axis_matrix(target_axes_[j]))
                                     : Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(2, 2));
    w = kron(w, f);
  }
  return w;
}

Eigen::MatrixXcd Stator::matrix() const {
  const Eigen::Index tdim = Eigen::Index{1} << target_labels_.size();
  const Eigen::Index cdim = Eigen::Index{1} << control_labels_.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(cdim * tdim, tdim);
  for (const auto& t : terms_) {
    m.block(static_cast<Eigen::Index>(t.control_bits) * tdim, 0, tdim, tdim) += t.coeff * word_matrix(t.word);
  }
  return m;
}

double Stator::trace_norm_sq() const {
  // Distinct words are Hilbert-Schmidt orthogonal and Tr(W^dagger W) = 2^T.
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::norm(t.coeff);
  return sum * static_cast<double>(std::uint64_t{1} << target_labels_.size());
}

Stator Stator::scaled(cplx factor) const {
  std::vector<StatorTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= factor;
  return {control_labels_, target_labels_, target_axes_, std::move(terms)};
}

std::string Stator::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    first = false;
    out << format_coeff(t.coeff) << "|" << bits_to_string(t.control_bits, control_labels_.size()) << "⟩";
    if (!target_labels_.empty()) {
      out << "⊗";
      for (std::size_t j = 0; j < target_labels_.size(); ++j) {
        if (j) out << "·";
        out << (((t.word >> (target_labels_.size() - 1 - j)) & 1U) ? "σ_n" : "I");
      }
    }
  }
  return out.str();
}

Stator apply_control_unitary(const Stator& s, std::string_view qubit, const Mat2& gate) {
  const std::size_t pos = s.control_position(qubit);
  const std::uint64_t bit = std::uint64_t{1} << (s.num_controls() - 1 - pos);
  std::vector<StatorTerm> out;
  out.reserve(s.terms().size() * 2);
  for (const auto& t : s.terms()) {
    const int in = (t.control_bits & bit) ? 1 : 0;
    for (int o = 0; o < 2; ++o) {
      const cplx g = gate(o, in);
      if (g == cplx{}) continue;
      const std::uint64_t bits = o ? (t.control_bits | bit) : (t.control_bits & ~bit);
      out.push_back({bits, t.word, g * t.coeff});
    }
  }
  return {s.control_labels(), s.target_labels(), s.target_axes(), std::move(out)};
}

Stator project_control(const Stator& s, std::string_view qubit, Basis basis, int outcome) {
  const std::size_t pos = s.control_position(qubit);
  const std::size_t C = s.num_controls();
  if (C < 1) {
    throw std::invalid_argument("stator has no control qubits");
  }
  const std::uint64_t bit = std::uint64_t{1} << (C - 1 - pos);
  const std::uint64_t low_mask = bit - 1;
  const Vec2 e = basis_vector(basis, outcome);
  std::vector<StatorTerm> out;
  for (const auto& t : s.terms()) {
    const int in = (t.control_bits & bit) ? 1 : 0;
    const cplx amp = std::conj(e(in)) * t.coeff;
    if (std::abs(amp) <= kTermPruneTol) continue;
    const std::uint64_t bits = ((t.control_bits >> 1) & ~low_mask) | (t.control_bits & low_mask);
    out.push_back({bits, t.word, amp});
  }
  // Merging can still cancel everything, which the constructor reports as invalid_argument.
  std::vector<std::string> controls = s.control_labels();
  controls.erase(controls.begin() + static_cast<std::ptrdiff_t>(pos));
  try {
    return {std::move(controls), s.target_labels(), s.target_axes(), std::move(out)};
  } catch (const std::invalid_argument&) {
    throw std::domain_error("projection annihilates every stator term");
  }
}

Stator apply_controlled_sigma(const Stator& s, std::string_view control, std::size_t target) {
  if (target >= s.num_targets()) {
    throw std::invalid_argument("target index out of range");
  }
  const std::uint64_t bit = std::uint64_t{1} << (s.num_controls() - 1 - s.control_position(control));
  const std::uint64_t wbit = std::uint64_t{1} << (s.num_targets() - 1 - target);
  std::vector<StatorTerm> out = s.terms();
  for (auto& t : out) {
    if (t.control_bits & bit) t.word ^= wbit;
  }
  return {s.control_labels(), s.target_labels(), s.target_axes(), std::move(out)};
}

Stator apply_target_sigma(const Stator& s, std::size_t target) {
  if (target >= s.num_targets()) {
    throw std::invalid_argument("target index out of range");
  }
  const std::uint64_t wbit = std::uint64_t{1} << (s.num_targets() - 1 - target);
  std::vector<StatorTerm> out = s.terms();
  for (auto& t : out) t.word ^= wbit;
  return {s.control_labels(), s.target_labels(), s.target_axes(), std::move(out)};
}

Stator extract_stator(const QuantumState& joint, std::vector<std::string> controls,
                      std::vector<std::string> targets, std::span<const std::string> references,
                      std::vector<PauliAxis> axes) {
  const std::size_t T = targets.size();
  if (references.size() != T || axes.size() != T) {
    throw std::invalid_argument("one reference qubit and one axis per target required");
  }
  if (controls.size() + 2 * T != joint.num_qubits()) {
    throw std::invalid_argument("joint state must hold exactly the controls, targets and references");
  }
  std::vector<std::string> order = controls;
  order.insert(order.end(), targets.begin(), targets.end());
  const std::size_t row_count = order.size();
  order.insert(order.end(), references.begin(), references.end());
  const QuantumState arranged = joint.reordered(order);

  const Eigen::Index tdim = Eigen::Index{1} << T;
  const std::span<const std::string> rows(order.data(), row_count);
  const Eigen::MatrixXcd m = arranged.bipartition(rows) * std::sqrt(static_cast<double>(tdim));

  Stator probe(controls, targets, axes, {{0, 0, cplx{1.0, 0.0}}});
  std::vector<Eigen::MatrixXcd> words;
  for (std::uint64_t w = 0; w < static_cast<std::uint64_t>(tdim); ++w) words.push_back(probe.word_matrix(w));

  std::vector<StatorTerm> terms;
  double residual = 0.0;
  const Eigen::Index cdim = Eigen::Index{1} << controls.size();
  for (Eigen::Index c = 0; c < cdim; ++c) {
    const Eigen::MatrixXcd block = m.block(c * tdim, 0, tdim, tdim);
    Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(tdim, tdim);
    for (std::uint64_t w = 0; w < words.size(); ++w) {
      const cplx coeff = (words[w].adjoint() * block).trace() / static_cast<double>(tdim);
      if (std::abs(coeff) > kTermPruneTol) {
        terms.push_back({static_cast<std::uint64_t>(c), w, coeff});
        rebuilt += coeff * words[w];
      }
    }
    residual = std::max(residual, (block - rebuilt).cwiseAbs().maxCoeff());
  }
  if (residual > kPipelineTol) {
    throw std::domain_error("joint state is not of stator form (residual " + std::to_string(residual) + ")");
  }
  return {std::move(controls), std::move(targets), std::move(axes), std::move(terms)};
}

double eigenoperator_residual(const Stator& s, std::span<const double> alphas) {
  if (alphas.size() != s.num_controls() || alphas.size() != s.num_targets()) {
    throw std::invalid_argument("eigenoperator check needs one angle per control and per target");
  }
  Eigen::MatrixXcd left = Eigen::MatrixXcd::Identity(1, 1);
  Eigen::MatrixXcd right = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    left = kron(left, rotation(PauliAxis::x_axis(), alphas[k]));
    right = kron(right, rotation(s.target_axes()[k], alphas[k]));
  }
  const Eigen::Index tdim = right.rows();
  left = kron(left, Eigen::MatrixXcd::Identity(tdim, tdim));
  const Eigen::MatrixXcd m = s.matrix();
  return (left * m - m * right).cwiseAbs().maxCoeff();
}

Stator normalize_stator(const Stator& s) {
  const double tr = s.trace_norm_sq();
  if (!(tr > 0.0)) {
    throw std::domain_error("cannot normalize a zero stator");
  }
  return s.scaled(1.0 / std::sqrt(tr));
}

bool equivalent_up_to_scale(const Stator& a, const Stator& b, double tol) {
  if (a.control_labels() != b.control_labels() || a.target_labels() != b.target_labels()) {
    return false;
  }
  std::map<TermKey, std::pair<cplx, cplx>> joined;
  for (const auto& t : a.terms()) joined[{t.control_bits, t.word}].first = t.coeff;
  for (const auto& t : b.terms()) joined[{t.control_bits, t.word}].second = t.coeff;
  double na = 0.0;
  double nb = 0.0;
  cplx overlap{};
  for (const auto& [key, pair] : joined) {
    na += std::norm(pair.first);
    nb += std::norm(pair.second);
    overlap += std::conj(pair.first) * pair.second;
  }
  if (!(na > 0.0) || !(nb > 0.0) || std::abs(overlap) == 0.0) return false;
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  const cplx phase = overlap / std::abs(overlap);
  for (const auto& [key, pair] : joined) {
    if (std::abs(pair.first / na * phase - pair.second / nb) > tol) return false;
  }
  return true;
}

}  // namespace crio
