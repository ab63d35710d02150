// crio: command-line front end for graph-state construction, protocol runs, GM and
// control-power reports. Exit codes: 0 success, 1 usage or I/O error, 2 verification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crio/angles.hpp"
#include "crio/gm.hpp"
#include "crio/graphstate.hpp"
#include "crio/povm.hpp"
#include "crio/protocol.hpp"
#include "crio/report.hpp"
#include "crio/verify.hpp"
#include "crio/version.hpp"

namespace {

using crio::Json;

constexpr int kOk = 0;
constexpr int kIoError = 1;
constexpr int kVerifyFailed = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::uint64_t seed = 0;
  std::string format;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Global& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f || !(f << text)) throw IoError("cannot write '" + g.out + "'");
}

std::string format_or(const Global& g, const char* fallback) { return g.format.empty() ? fallback : g.format; }

void require_format(const std::string& f, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (f == a) return;
  }
  throw std::invalid_argument("format '" + f + "' is not available for this command");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

crio::PauliAxis parse_axis(const std::string& s) {
  if (s == "x" || s == "y" || s == "z") return crio::axis_from_json(Json(s));
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 3) throw std::invalid_argument("--axis expects x, y, z or three comma-separated numbers");
  return crio::PauliAxis::normalized(v[0], v[1], v[2]);
}

std::string state_text(const crio::QuantumState& s) {
  std::ostringstream os;
  os.precision(9);
  os << std::fixed;
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    const crio::cplx a = s.amplitudes()(i);
    if (std::abs(a) < 1e-12) continue;
    std::string bits(s.num_qubits(), '0');
    for (std::size_t q = 0; q < s.num_qubits(); ++q) {
      if ((static_cast<std::uint64_t>(i) >> (s.num_qubits() - 1 - q)) & 1U) bits[q] = '1';
    }
    os << (a.real() < 0 ? "-" : "+") << std::abs(a.real());
    if (std::abs(a.imag()) >= 1e-12) os << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << "i";
    os << " |" << bits << ">\n";
  }
  return os.str();
}

// ---- build-state

struct BuildStateArgs {
  std::string family;
  int n = 1;
  std::vector<int> groups;
  bool groups_given = false;
  std::string edges;
};

int cmd_build_state(const Global& g, const BuildStateArgs& a) {
  Json cfg{{"command", "build-state"}, {"family", a.family}, {"n", a.n}};
  crio::QuantumState state = crio::QuantumState::plus_state({"a1"});
  std::optional<crio::Graph> graph;
  if (a.family == "h3" || a.family == "h5" || a.family == "h2n1") {
    const int N = a.family == "h3" ? 1 : a.family == "h5" ? 2 : a.n;
    crio::CrioTopology topo = crio::CrioTopology::full(N);
    if (a.groups_given) {
      topo.controlled_groups = std::set<int>(a.groups.begin(), a.groups.end());
      cfg["groups"] = a.groups;
    }
    graph = crio::crio_graph(topo);
    state = crio::build_graph_state(*graph);
  } else if (a.family == "phi") {
    state = crio::phi_state(a.n);
  } else if (a.family == "g") {
    state = crio::g_state(a.n);
  } else if (a.family == "edges") {
    if (a.edges.empty()) throw std::invalid_argument("family 'edges' needs --edges FILE");
    cfg["edges"] = a.edges;
    graph = crio::parse_edge_list(read_file(a.edges));
    state = crio::build_graph_state(*graph);
  } else {
    throw std::invalid_argument("unknown family '" + a.family + "' (h3, h5, h2n1, phi, g, edges)");
  }
  const std::string f = format_or(g, "json");
  require_format(f, {"json", "csv", "text"});
  if (f == "csv") {
    emit(g, crio::state_csv(state));
  } else if (f == "text") {
    emit(g, state_text(state));
  } else {
    Json j{{"provenance", crio::provenance(cfg)}};
    if (graph) j["edge_list"] = crio::to_edge_list(*graph);
    j["state"] = crio::to_json(state);
    emit(g, dump(j));
  }
  return kOk;
}

// ---- run-protocol

struct RunArgs {
  std::string config;
  int n = 1;
  bool n_given = false;
  std::vector<std::string> alphas;
  std::vector<std::string> axes;
  std::string mode = "enumerate";
  bool permitted = true;
  std::vector<int> groups;
  bool groups_given = false;
  int guess = 0;
};

int cmd_run_protocol(const Global& g, const RunArgs& a) {
  Json cfg = a.config.empty() ? Json::object() : Json::parse(read_file(a.config));
  if (a.config.empty() || a.n_given) cfg["N"] = a.n;
  const auto N = static_cast<std::size_t>(cfg.value("N", 1));
  if (!a.alphas.empty()) {
    Json betas = Json::array();
    for (std::size_t i = 0; i < N; ++i) betas.push_back(a.alphas.size() == 1 ? a.alphas[0] : a.alphas.at(i));
    cfg["betas"] = betas;
  }
  if (!a.axes.empty()) {
    Json axes = Json::array();
    for (std::size_t i = 0; i < N; ++i) axes.push_back(crio::to_json(parse_axis(a.axes.size() == 1 ? a.axes[0] : a.axes.at(i))));
    cfg["axes"] = axes;
  }
  if (a.config.empty() || !cfg.contains("mode")) cfg["mode"] = a.mode;
  if (a.config.empty() || !cfg.contains("permitted")) cfg["permitted"] = a.permitted;
  if (a.config.empty() || !cfg.contains("seed")) cfg["seed"] = g.seed;
  if (a.groups_given) cfg["controlled_groups"] = a.groups;
  if (!cfg.contains("denial_guess")) cfg["denial_guess"] = a.guess;

  const crio::ProtocolRunConfig rc = crio::protocol_config_from_json(cfg);
  crio::RunOptions opts;
  opts.mode = rc.mode;
  opts.seed = rc.seed;
  const crio::ProtocolResult r = crio::run_crio(rc.crio, opts);

  bool ok = std::abs(r.total_probability() - 1.0) <= 1e-10 || rc.mode == crio::RunMode::Sample;
  if (rc.crio.permitted) ok = ok && r.min_fidelity() >= 1.0 - 1e-10;

  const std::string f = format_or(g, "json");
  require_format(f, {"json", "csv", "text"});
  if (f == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "outcome_bits,probability,fidelity\n";
    for (const auto& b : r.branches) os << b.outcome_bits() << ',' << b.probability << ',' << b.fidelity << '\n';
    emit(g, os.str());
  } else if (f == "text") {
    std::ostringstream os;
    os << "N=" << rc.crio.N << " permitted=" << (r.permitted ? "true" : "false")
       << " completed=" << (r.completed ? "true" : "false") << "\n"
       << "branches=" << r.branches.size() << " total_probability=" << r.total_probability()
       << " min_fidelity=" << r.min_fidelity() << "\n"
       << "verification=" << (ok ? "pass" : "fail") << "\n";
    emit(g, os.str());
  } else {
    const Json effective = crio::to_json(rc);
    Json j{{"provenance", crio::provenance(effective)}, {"verification", ok ? "pass" : "fail"}};
    j["result"] = crio::to_json(r);
    emit(g, dump(j));
  }
  return ok ? kOk : kVerifyFailed;
}

// ---- gm

struct GmArgs {
  std::string family;
  int n = 1;
  std::string mode;
  int restarts = 64;
  std::string state;
  std::optional<double> expect;
};

int cmd_gm(const Global& g, const GmArgs& a) {
  crio::GMOptions opt;
  opt.restarts = a.restarts;
  opt.seed = g.seed == 0 ? opt.seed : g.seed;
  Json cfg{{"command", "gm"}, {"family", a.family}, {"n", a.n}, {"restarts", a.restarts}, {"seed", opt.seed}};
  std::optional<double> expected;
  crio::QuantumState state = crio::QuantumState::plus_state({"a1"});
  std::string mode = a.mode;
  if (a.family == "h2n1" || a.family == "g") {
    if (mode.empty()) mode = "nonneg";
    state = mode == "nonneg" ? crio::g_state(a.n) : crio::build_graph_state(crio::crio_graph(crio::CrioTopology::full(a.n)));
    expected = a.n;
  } else if (a.family == "phi") {
    if (mode.empty()) mode = "nonneg";
    state = crio::phi_state(a.n);
    expected = a.n;
  } else if (a.family == "state") {
    if (a.state.empty()) throw std::invalid_argument("family 'state' needs --state FILE");
    if (mode.empty()) mode = "general";
    Json sj = Json::parse(read_file(a.state));
    state = crio::state_from_json(sj.contains("state") ? sj["state"] : sj);
    cfg["state"] = a.state;
  } else {
    throw std::invalid_argument("unknown family '" + a.family + "' (h2n1, g, phi, state)");
  }
  if (a.expect) {
    expected = *a.expect;
    cfg["expect"] = *a.expect;
  }
  if (mode != "nonneg" && mode != "general") throw std::invalid_argument("--mode must be nonneg or general");
  cfg["mode"] = mode;
  const crio::GMResult r =
      crio::gm_optimize(state, mode == "nonneg" ? crio::GMMode::NonNegative : crio::GMMode::General, opt);
  const bool ok = !expected || std::abs(r.G - *expected) <= 1e-6;

  const std::string f = format_or(g, "json");
  require_format(f, {"json", "text"});
  if (f == "text") {
    std::ostringstream os;
    os.precision(12);
    os << "G=" << r.G << " lambda_sq=" << r.lambda_sq << " converged=" << (r.converged ? "true" : "false") << "\n";
    if (expected) os << "expected=" << *expected << " verification=" << (ok ? "pass" : "fail") << "\n";
    emit(g, os.str());
  } else {
    Json j{{"provenance", crio::provenance(cfg)}, {"verification", ok ? "pass" : "fail"}, {"result", crio::to_json(r)}};
    if (expected) j["expected_G"] = *expected;
    emit(g, dump(j));
  }
  return ok ? kOk : kVerifyFailed;
}

// ---- control-power

struct PowerArgs {
  std::string alpha;
  int sweep = 0;
  int samples = 256;
};

int cmd_control_power(const Global& g, const PowerArgs& a) {
  if (a.alpha.empty() == (a.sweep == 0)) throw std::invalid_argument("give exactly one of --alpha or --sweep");
  crio::ControlPowerOptions opt;
  opt.random_samples = a.samples;
  opt.seed = g.seed == 0 ? opt.seed : g.seed;
  std::vector<double> alphas;
  if (!a.alpha.empty()) {
    alphas.push_back(crio::wrap_angle(crio::parse_angle(a.alpha)));
  } else {
    if (a.sweep < 1) throw std::invalid_argument("--sweep needs a positive count");
    for (int i = 0; i < a.sweep; ++i) alphas.push_back(2 * std::numbers::pi * i / a.sweep);
  }
  Json cfg{{"command", "control-power"}, {"alphas", alphas}, {"random_samples", opt.random_samples}, {"seed", opt.seed}};
  bool ok = true;
  Json reports = Json::array();
  std::ostringstream csv;
  csv << "target_alpha,success_rate,favorable_branches\n";
  for (double al : alphas) {
    const crio::ControlPowerReport r = crio::control_power(al, opt);
    const double eighths = al / (std::numbers::pi / 4);
    const double want = std::abs(eighths - std::round(eighths)) <= 1e-9 ? 0.5 : 0.25;
    ok = ok && std::abs(r.success_rate - want) <= 1e-10;
    reports.push_back(crio::to_json(r));
    csv << crio::format_angle(al) << ',' << r.success_rate << ',' << r.favorable_branches.size() << '\n';
  }
  const std::string f = format_or(g, "json");
  require_format(f, {"json", "csv"});
  if (f == "csv") {
    emit(g, csv.str());
  } else {
    Json j{{"provenance", crio::provenance(cfg)}, {"verification", ok ? "pass" : "fail"}};
    j["reports"] = std::move(reports);
    emit(g, dump(j));
  }
  return ok ? kOk : kVerifyFailed;
}

// ---- reproduce-tables

int cmd_reproduce_tables(const Global& g, const std::string& table, int max_n) {
  const std::string f = format_or(g, "csv");
  require_format(f, {"csv"});
  bool ok = true;
  if (table == "I") {
    crio::GMOptions opt;
    if (g.seed != 0) opt.seed = g.seed;
    const auto rows = crio::gm_table(max_n, opt);
    for (const auto& r : rows) ok = ok && std::abs(r.crio_gm - r.N) <= 1e-6 && std::abs(r.rio_gm - r.N) <= 1e-6;
    emit(g, crio::gm_table_csv(rows));
  } else if (table == "II" || table == "III") {
    const auto rows = crio::povm_tables(table);
    crio::Rng rng(g.seed);
    for (const auto& r : rows) {
      const crio::PauliAxis axis = crio::PauliAxis::random(rng);
      const crio::BranchSimulation sim = crio::simulate_branch(r.params, r.j, r.k, axis);
      ok = ok && r.op.is_rotation && sim.schmidt_ratio <= 1e-10;
      for (double al : r.op.alphas) ok = ok && std::abs(crio::rotation_match(sim.residual, axis, al) - 1.0) <= 1e-10;
    }
    emit(g, crio::povm_table_csv(rows));
  } else {
    throw std::invalid_argument("unknown table '" + table + "' (I, II, III)");
  }
  return ok ? kOk : kVerifyFailed;
}

// ---- verify-all

int cmd_verify_all(const Global& g) {
  const auto checks = crio::verify_all(g.seed);
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.passed;
  const std::string f = format_or(g, "text");
  require_format(f, {"text", "json"});
  if (f == "json") {
    Json list = Json::array();
    for (const auto& c : checks) list.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    Json cfg{{"command", "verify-all"}, {"seed", g.seed}};
    emit(g, dump(Json{{"provenance", crio::provenance(cfg)}, {"passed", ok}, {"checks", std::move(list)}}));
  } else {
    std::ostringstream os;
    for (const auto& c : checks) os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    emit(g, os.str());
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled remote implementation of operations on graph states"};
  app.set_version_flag("--version", std::string(crio::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--format", g.format, "json, csv or text (default depends on the command)");
  app.add_option("--out", g.out, "Output file (default: stdout)");

  BuildStateArgs bs;
  auto* build = app.add_subcommand("build-state", "Write the amplitudes of a graph state");
  build->add_option("family", bs.family, "h3, h5, h2n1, phi, g or edges")->required();
  auto* build_n = build->add_option("--n", bs.n, "Number of groups N")->check(CLI::Range(1, 10));
  build->add_option("N", bs.n, "Number of groups, as an alternative to --n")->check(CLI::Range(1, 10))->excludes(build_n);
  build->add_option("--groups", bs.groups, "Controlled groups, e.g. 3,4")->delimiter(',');
  build->add_option("--edges", bs.edges, "Edge-list file for family 'edges'");

  RunArgs ra;
  auto* run = app.add_subcommand("run-protocol", "Run the protocol and report every branch");
  run->add_option("--config", ra.config, "JSON run configuration");
  auto* n_opt = run->add_option("--n", ra.n, "Number of groups N")->check(CLI::Range(1, 6));
  run->add_option("--alpha", ra.alphas, "Rotation angle(s), e.g. 3pi/4 or 0.3,pi/2")->delimiter(',');
  run->add_option("--axis", ra.axes, "Axis per group: x, y, z or nx,ny,nz (repeatable)");
  run->add_option("--mode", ra.mode, "enumerate or sample")->check(CLI::IsMember({"enumerate", "sample"}));
  run->add_option("--permitted", ra.permitted, "Whether the controller cooperates (true|false)");
  auto* groups_opt = run->add_option("--groups", ra.groups, "Controlled groups, e.g. 3")->delimiter(',');
  run->add_option("--guess", ra.guess, "Bit the receivers assume when the controller is silent")
      ->check(CLI::Range(0, 1));

  GmArgs ga;
  auto* gm = app.add_subcommand("gm", "Geometric measure of entanglement");
  gm->add_option("family", ga.family, "h2n1, g, phi or state")->required();
  auto* gm_n = gm->add_option("--n", ga.n, "Number of groups N")->check(CLI::Range(1, 6));
  gm->add_option("N", ga.n, "Number of groups, as an alternative to --n")->check(CLI::Range(1, 6))->excludes(gm_n);
  gm->add_option("--mode", ga.mode, "nonneg or general");
  gm->add_option("--restarts", ga.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  gm->add_option("--state", ga.state, "State JSON for family 'state'");
  gm->add_option("--expect", ga.expect, "Fail with exit code 2 unless |G - value| <= 1e-6");

  PowerArgs pa;
  auto* power = app.add_subcommand("control-power", "Success rate without the controller");
  power->add_option("--alpha", pa.alpha, "Target angle, e.g. 3pi/4");
  power->add_option("--sweep", pa.sweep, "Evaluate K evenly spaced angles in [0, 2pi)");
  power->add_option("--samples", pa.samples, "Random POVM pairs added to the search")->check(CLI::NonNegativeNumber);

  std::string table;
  int max_n = 3;
  auto* tables = app.add_subcommand("reproduce-tables", "Emit the GM or control-power tables as CSV");
  tables->add_option("table", table, "I, II or III")->required();
  tables->add_option("--max-n", max_n, "Largest N for table I")->check(CLI::Range(1, 4));

  app.add_subcommand("verify-all", "Run quick self-checks across all modules");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoError;
  }
  bs.groups_given = !bs.groups.empty();
  ra.n_given = n_opt->count() > 0;
  ra.groups_given = groups_opt->count() > 0;

  try {
    if (build->parsed()) return cmd_build_state(g, bs);
    if (run->parsed()) return cmd_run_protocol(g, ra);
    if (gm->parsed()) return cmd_gm(g, ga);
    if (power->parsed()) return cmd_control_power(g, pa);
    if (tables->parsed()) return cmd_reproduce_tables(g, table, max_n);
    return cmd_verify_all(g);
  } catch (const IoError& e) {
    std::cerr << "crio: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "crio: " << e.what() << "\n";
    return kIoError;
  }
}
