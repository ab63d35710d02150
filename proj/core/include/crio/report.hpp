#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "crio/gm.hpp"
#include "crio/povm.hpp"
#include "crio/protocol.hpp"
#include "crio/stator.hpp"

namespace crio {

/// Keys keep insertion order so reports read top-down and dump byte-identically.
using Json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 hex digits of FNV-1a over the compact dump of `config`.
std::string config_hash(const Json& config);

/// {"version", "config_hash", "config"}.
Json provenance(const Json& config);

Json to_json(cplx z);
Json to_json(const PauliAxis& axis);
Json to_json(const QuantumState& state);
Json to_json(const Stator& stator);
Json to_json(const Branch& branch);
Json to_json(const ProtocolResult& result);
Json to_json(const GMResult& result);
Json to_json(const PovmParams& params);
Json to_json(const ControlPowerReport& report);
Json to_json(const ControlDenialReport& report);

/// "index,bits,real,imag" with one line per amplitude, 17 significant digits.
std::string state_csv(const QuantumState& state);

/// Reads {"labels": [...], "amplitudes": [[re, im], ...]}.
QuantumState state_from_json(const Json& j);

/// An angle given as a number or as a string accepted by parse_angle.
double angle_from_json(const Json& j);

/// [x, y, z] (normalized on read) or one of "x", "y", "z".
PauliAxis axis_from_json(const Json& j);

/// [[re, im], [re, im]] (rescaled on read unless already unit norm) or one of "0", "1", "+", "-".
Vec2 target_from_json(const Json& j);

/// Run configuration for one protocol invocation.
struct ProtocolRunConfig {
  CrioConfig crio;
  RunMode mode = RunMode::Enumerate;
  std::uint64_t seed = 0;
};

/// Parses {N, axes, betas, target_states, mode, seed, permitted, controlled_groups}.
/// Missing axes, betas or targets are drawn from `seed`. Throws std::invalid_argument
/// on malformed input.
ProtocolRunConfig protocol_config_from_json(const Json& j);

Json to_json(const ProtocolRunConfig& config);

}  // namespace crio
