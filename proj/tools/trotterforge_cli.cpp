#include <trotterforge/trotterforge.hpp>

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace trotterforge;
using nlohmann::json;

namespace {

struct Options {
  std::string spec, out, method = "sequential", variant = "lowrank", pair = "ZZ", signs = "all-positive";
  std::string kind;
  int n = 8, d = 1, p = 1, m = 2, cutoff = 1, eta = 1, grid = 3;
  double alpha = 2, t = 0.1, eps = 1e-3, tol = 1e-9, omega = 1;
  std::uint64_t seed = 0;
  bool countOnly = false;
  std::vector<double> times{0.05, 0.1, 0.2};
  long long nMin = 64, nMax = 1024;
  // bound flags
  double mu = 1, thetaMax = 1, delta = 0.1, b = 4, k = 2, bits = 8, coeffCap = 1;
};

// temp file + rename so readers never see a partial file
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

HamiltonianSpec load_spec(const Options& o) {
  if (o.spec.empty())
    return build_power_law(o.n, o.d, o.alpha, PauliPair::parse(o.pair), sign_rule_from_string(o.signs), o.seed);
  std::ifstream f(o.spec);
  if (!f) throw ValidationError("cannot read spec " + o.spec);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("spec is not valid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

CompiledStep compile(const Options& o, const HamiltonianSpec& s, bool countOnly) {
  auto f = make_product_formula(o.p);
  if (o.method == "sequential") return compile_sequential_step(s, o.t, f, countOnly);
  if (o.method == "lowrank") return compile_lowrank_step(s, o.t, o.tol, o.cutoff, f, countOnly);
  if (o.method == "avgcost") return compile_avgcost_step(s, o.t, o.m, f, countOnly, o.eps);
  if (o.method == "block") {
    if (!countOnly) throw CapacityError("block method is count-only");
    return compile_block_step_count(s, o.t, o.eps, f);
  }
  throw ValidationError("unknown method " + o.method);
}

// the sequential compiler's units: one per same-Pauli group, one per term of a mixed group, then on-site
std::vector<Matrix> stage_matrices(const HamiltonianSpec& s) {
  std::vector<Matrix> out;
  auto add = [&](PauliPair pair, const CoeffMatrix& m) {
    HamiltonianSpec part = empty_spec(s.n, s.d);
    part.twoLocal[pair] = m;
    out.push_back(hamiltonian_matrix(part));
  };
  for (auto& [pair, m] : s.twoLocal) {
    if (m.empty()) continue;
    if (pair.first == pair.second) {
      add(pair, m);
      continue;
    }
    for (int j = 1; j <= s.n; ++j)
      for (int k = j + 1; k <= s.n; ++k)
        if (m.at(j, k) != 0.0) {
          CoeffMatrix one(s.n);
          one.set(j, k, m.at(j, k));
          add(pair, one);
        }
  }
  for (auto& [k, v] : s.onSite) {
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) continue;
    HamiltonianSpec part = empty_spec(s.n, s.d);
    part.onSite[k] = v;
    out.push_back(hamiltonian_matrix(part));
  }
  return out;
}

std::string run_verify(const Options& o) {
  auto s = load_spec(o);
  auto step = compile(o, s, false);
  Matrix u = circuit_to_unitary(step.circuit), e = exact_evolution(s, o.t);
  json j{{"method", step.method},
         {"n", s.n},
         {"t", o.t},
         {"p", o.p},
         {"gates", step.gateCount},
         {"distance", spectral_distance(u, e)},
         {"distance_phase_min", phase_minimized_distance(u, e)}};
  return dump(j);
}

std::string run_error_sweep(const Options& o) {
  auto s = load_spec(o);
  std::optional<double> alphaComm;
  // other methods split H differently, so the bound only applies to sequential
  if (o.method == "sequential" && o.p <= 3 && s.n <= 10) alphaComm = commutator_norm_sum(stage_matrices(s), o.p);
  std::vector<TrotterErrorReport> rows;
  for (double t : o.times) {
    Options local = o;
    local.t = t;
    auto step = compile(local, s, false);
    TrotterErrorReport r;
    r.method = step.method;
    r.p = o.p;
    r.t = t;
    r.alphaComm = alphaComm.value_or(0);
    r.bound = alphaComm ? *alphaComm * std::pow(t, o.p + 1) : 0;
    r.empirical = spectral_distance(circuit_to_unitary(step.circuit), exact_evolution(s, t));
    r.r = alphaComm ? step_count({t, o.eps, o.p}, *alphaComm) : 1;
    rows.push_back(r);
  }
  return to_csv(rows);
}

std::string run_bound(const Options& o) {
  BoundQuery q;
  q.mu = o.mu;
  q.thetaMax = o.thetaMax;
  q.delta = o.delta;
  q.b = o.b;
  q.gateSetSize = o.k;
  q.m = o.bits;
  q.n = o.n;
  q.t = o.coeffCap;
  BoundResult r;
  if (o.kind == "diag") r = diag_synthesis_lower_bound(q);
  else if (o.kind == "hamiltonian") r = commuting_ham_lower_bound(q);
  else if (o.kind == "discrete") r = discrete_diag_lower_bound(q);
  else if (o.kind == "oracle") r = coeff_oracle_lower_bound(q);
  else throw ValidationError("unknown bound kind " + o.kind);
  return dump(to_json(r));
}

std::string run_chem(const Options& o) {
  std::vector<Nucleus> nuclei;
  if (!o.spec.empty()) {
    std::ifstream f(o.spec);
    if (!f) throw ValidationError("cannot read system " + o.spec);
    json j;
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("system is not valid JSON: ") + e.what());
    }
    auto s = system_from_json(j);
    nuclei = s.nuclei;
  }
  auto s = build_uniform_electron_gas(o.grid, o.omega, o.eta, nuclei);
  auto norms = fermionic_error_norms(s.tau, s.nu, s.eta);
  json j = to_json(s);
  j["n"] = s.n;
  j["tau_induced_1norm"] = norms.tau1;
  j["nu_restricted_1norm"] = norms.nuEta;
  j["nu_ratio"] = norms.nuEta / (std::pow(s.eta, 2.0 / 3) * std::cbrt(double(s.n)) / std::cbrt(s.omega));
  j["tau_ratio"] = norms.tau1 / std::pow(s.n / s.omega, 2.0 / 3);
  j["t"] = o.t;
  j["eps"] = o.eps;
  j["p"] = o.p;
  j["r"] = chem_step_count(s, o.t, o.eps, o.p);
  if (!s.nuclei.empty()) j["external_max"] = external_potential_max(s);
  return dump(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trotterforge: power-law Hamiltonian simulation toolkit"};
  app.require_subcommand(1);
  Options o;

  auto specFlags = [&](CLI::App* c) {
    c->add_option("--spec", o.spec, "input spec JSON (otherwise a power law is built)");
    c->add_option("--n", o.n, "sites");
    c->add_option("--d", o.d, "lattice dimension");
    c->add_option("--alpha", o.alpha, "power-law exponent");
    c->add_option("--pair", o.pair, "Pauli pair, e.g. ZZ");
    c->add_option("--signs", o.signs, "all-positive | alternating | seeded-random");
    c->add_option("--seed", o.seed, "seed for randomized choices");
  };
  auto outFlag = [&](CLI::App* c) { c->add_option("--out", o.out, "output path (stdout if omitted)"); };
  auto compileFlags = [&](CLI::App* c) {
    c->add_option("--method", o.method, "sequential | lowrank | avgcost | block");
    c->add_option("--t", o.t, "time slice");
    c->add_option("--p", o.p, "product-formula order (1, 2 or 4)");
    c->add_option("--tol", o.tol, "truncation tolerance");
    c->add_option("--cutoff", o.cutoff, "low-rank cutoff");
    c->add_option("--m", o.m, "subdivision count");
    c->add_option("--eps", o.eps, "target accuracy");
  };

  auto* build = app.add_subcommand("build", "emit a power-law spec as JSON");
  specFlags(build);
  outFlag(build);

  auto* decompose = app.add_subcommand("decompose", "emit a decomposition as JSON");
  decompose->add_option("--n", o.n, "sites");
  decompose->add_option("--variant", o.variant, "bisection | lowrank | boxes");
  decompose->add_option("--cutoff", o.cutoff, "low-rank cutoff");
  outFlag(decompose);

  auto* rank = app.add_subcommand("rank-profile", "far-field ranks as CSV");
  specFlags(rank);
  rank->add_option("--cutoff", o.cutoff, "low-rank cutoff");
  rank->add_option("--tol", o.tol, "truncation tolerance");
  outFlag(rank);

  auto* comp = app.add_subcommand("compile", "compile one step; writes circuit text and <out>.cost.json");
  specFlags(comp);
  compileFlags(comp);
  comp->add_flag("--count-only", o.countOnly, "skip gate emission");
  outFlag(comp);

  auto* verify = app.add_subcommand("verify", "distance of a compiled step from exact evolution");
  specFlags(verify);
  compileFlags(verify);
  outFlag(verify);

  auto* sweep = app.add_subcommand("error-sweep", "Trotter error vs t as CSV");
  specFlags(sweep);
  compileFlags(sweep);
  sweep->add_option("--times", o.times, "time slices");
  outFlag(sweep);

  auto* cost = app.add_subcommand("cost-report", "gate-count scaling as CSV");
  cost->add_option("--method", o.method, "sequential | lowrank | avgcost | block");
  cost->add_option("--alpha", o.alpha, "power-law exponent");
  cost->add_option("--d", o.d, "lattice dimension");
  cost->add_option("--t", o.t, "time slice");
  cost->add_option("--eps", o.eps, "target accuracy");
  cost->add_option("--n-min", o.nMin, "smallest n");
  cost->add_option("--n-max", o.nMax, "largest n");
  outFlag(cost);

  auto* bound = app.add_subcommand("bound", "gate-count lower bounds as JSON");
  bound->add_option("kind", o.kind, "diag | hamiltonian | discrete | oracle")->required();
  bound->add_option("--mu", o.mu, "target qubits");
  bound->add_option("--theta-max", o.thetaMax, "largest phase");
  bound->add_option("--delta", o.delta, "accuracy");
  bound->add_option("--b", o.b, "circuit qubits");
  bound->add_option("--k", o.k, "gate-set size");
  bound->add_option("--bits", o.bits, "phase bits");
  bound->add_option("--n", o.n, "sites");
  bound->add_option("--t", o.coeffCap, "coefficient cap");
  outFlag(bound);

  auto* chem = app.add_subcommand("chem", "uniform electron gas norms and step count");
  chem->add_option("--spec", o.spec, "system JSON with nuclei");
  chem->add_option("--grid", o.grid, "grid side");
  chem->add_option("--omega", o.omega, "cell volume");
  chem->add_option("--eta", o.eta, "electrons");
  chem->add_option("--t", o.t, "time");
  chem->add_option("--eps", o.eps, "accuracy");
  chem->add_option("--p", o.p, "order");
  outFlag(chem);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (auto* c = std::getenv("TROTTERFORGE_THREADS"); c && std::atoi(c) < 1)
      throw ValidationError("TROTTERFORGE_THREADS must be a positive integer");
    if (build->parsed()) {
      emit(o.out, dump(to_json(load_spec(o))));
    } else if (decompose->parsed()) {
      json j;
      if (o.variant == "bisection") j = to_json(bisection_decompose(o.n));
      else if (o.variant == "lowrank") j = to_json(lowrank_decompose(o.n, o.cutoff));
      else if (o.variant == "boxes") {
        if (!is_power_of_two(o.n) || o.n < 4) throw DomainError("boxes need n a power of two, n >= 4");
        j = json::array();
        for (auto& b : nested_boxes(o.n / 2).boxes)
          j.push_back({{"mu", b.mu},
                       {"nu", b.nu},
                       {"boundary", b.boundary},
                       {"u", {b.shifted.uLo, b.shifted.uHi}},
                       {"v", {b.shifted.vLo, b.shifted.vHi}}});
      } else throw ValidationError("unknown variant " + o.variant);
      emit(o.out, dump(j));
    } else if (rank->parsed()) {
      auto s = load_spec(o);
      emit(o.out, to_csv(rank_profile(s, lowrank_decompose(s.n, o.cutoff), o.tol)));
    } else if (comp->parsed()) {
      auto s = load_spec(o);
      auto step = compile(o, s, o.countOnly || o.method == "block");
      // count-only steps (always the case for block) have no circuit to write
      if (!step.countOnly) emit(o.out, to_text(step.circuit));
      std::string side = dump(cost_sidecar(step));
      if (o.out.empty() || o.out == "-") std::cerr << side;
      else emit(o.out + ".cost.json", side);
    } else if (verify->parsed()) {
      emit(o.out, run_verify(o));
    } else if (sweep->parsed()) {
      emit(o.out, run_error_sweep(o));
    } else if (cost->parsed()) {
      std::vector<long long> ns;
      for (long long n = o.nMin; n <= o.nMax; n *= 2) ns.push_back(n);
      emit(o.out, to_csv(gate_count_report(o.method, o.alpha, o.d, o.t, o.eps, ns)));
    } else if (bound->parsed()) {
      emit(o.out, run_bound(o));
    } else if (chem->parsed()) {
      emit(o.out, run_chem(o));
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
