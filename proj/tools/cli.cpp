#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gapforge/circuit/certify.hpp"
#include "gapforge/circuit/circuit.hpp"
#include "gapforge/csp/generate.hpp"
#include "gapforge/csp/io.hpp"
#include "gapforge/error.hpp"
#include "gapforge/gap_eth/reduction.hpp"
#include "gapforge/oracle/brute_force.hpp"
#include "gapforge/pcp/transform.hpp"
#include "gapforge/random.hpp"
#include "gapforge/sampler/sampler.hpp"

namespace gapforge::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct Config {
  std::string input;
  std::string report;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string variant = "det";
  std::optional<std::size_t> fan_in;
  std::string theta = "4/5";
  std::size_t exhaustive_cap = 20;
  std::size_t trials = 64;
  bool waive_cert = false;
  std::string adversary = "none";
  std::optional<std::size_t> m;
  std::size_t n = 12;
  std::string circuit;
  bool certify_loaded = false;
  std::string out_circuit;
  std::string out_system;
  bool timing = false;
  // gap-reduce
  std::string s = "7/8";
  std::string epsilon = "1/7";
  std::size_t k = 128;
  std::size_t t = 16;
  std::optional<std::size_t> reduce_trials;
  std::string reduction = "one-sided";
  bool dry_run = false;
  bool stop_at_first = false;
  std::optional<double> lambda;
  std::string sampler_file;
};

std::uint64_t effective_seed(const Config& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("GAPFORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, std::string("GAPFORGE_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::invalid_argument, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::invalid_argument, "cannot write " + path);
  out << text;
}

Json rational(const Rational& r) { return to_string(r); }

Json header(const std::string& command, std::uint64_t seed) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["seed"] = seed;
  return j;
}

csp::CspInstance load_instance(const Config& cfg, std::uint64_t seed, Json& params) {
  if (!cfg.input.empty()) {
    params["input"] = cfg.input;
    return csp::parse_instance(read_file(cfg.input));
  }
  require(cfg.m.has_value(), ErrorKind::invalid_argument, "give an instance file or --m");
  require(cfg.n >= 1, ErrorKind::invalid_argument, "--n must be positive");
  params["generated"] = {{"n", cfg.n}, {"m", *cfg.m}, {"arity", std::min<std::size_t>(3, cfg.n)}};
  return csp::random_ksat(cfg.n, *cfg.m, std::min<std::size_t>(3, cfg.n), derive_seed(seed, 0));
}

circuit::Variant parse_variant(const std::string& v) {
  if (v == "det" || v == "deterministic") return circuit::Variant::deterministic;
  if (v == "rand" || v == "randomized") return circuit::Variant::randomized;
  fail(ErrorKind::invalid_argument, "unknown variant " + v);
}

Json goodness_json(const circuit::GoodnessCertificate& g) {
  Json j;
  j["pass"] = g.pass();
  j["mean_in"] = rational(g.mean_in);
  j["mean_out"] = rational(g.mean_out);
  j["exhaustive_cap"] = g.exhaustive_cap;
  j["trials"] = g.trials;
  j["seed"] = g.seed;
  j["layers"] = Json::array();
  for (const auto& l : g.layers) {
    Json layer;
    layer["layer"] = l.layer;
    layer["input_width"] = l.input_width;
    layer["output_width"] = l.output_width;
    layer["mode"] = to_string(l.mode);
    layer["pass"] = l.pass;
    layer["max_input_ones"] = l.max_input_ones;
    layer["allowed_output_ones"] = l.allowed_output_ones;
    layer["worst_output_ones"] = l.worst_output_ones;
    layer["strings_checked"] = l.strings_checked;
    layer["worst_input"] = l.worst_input.to_string();
    j["layers"].push_back(layer);
  }
  return j;
}

Json completeness_json(const circuit::CompletenessCertificate& c) {
  Json j;
  j["pass"] = c.pass();
  j["exact"] = c.exact();
  j["completeness"] = rational(c.completeness);
  j["layers"] = Json::array();
  for (const auto& l : c.layers) {
    Json layer;
    layer["layer"] = l.layer;
    layer["mode"] = to_string(l.mode);
    layer["pass"] = l.pass;
    layer["zeros_in"] = l.zeros_in;
    layer["allowed_zeros_out"] = l.allowed_zeros_out;
    layer["worst_zeros_out"] = l.worst_zeros_out;
    layer["strings_checked"] = l.strings_checked;
    layer["worst_input"] = l.worst_input.to_string();
    j["layers"].push_back(layer);
  }
  return j;
}

Json certificate_json(const circuit::CircuitCertificate& c) {
  Json j;
  j["pass"] = c.pass();
  j["goodness"] = goodness_json(c.goodness);
  if (c.completeness) j["completeness"] = completeness_json(*c.completeness);
  return j;
}

Json circuit_json(const circuit::RobustCircuit& c) {
  Json j;
  j["variant"] = to_string(c.variant());
  j["m"] = c.m();
  j["depth"] = c.depth();
  j["theta"] = rational(c.theta());
  j["widths"] = c.widths();
  j["max_fan_in"] = c.max_fan_in();
  j["total_gates"] = c.total_gates();
  if (c.fan_in()) j["fan_in"] = *c.fan_in();
  Json layers = Json::array();
  for (std::size_t i = 1; i <= c.depth(); ++i) {
    const auto& l = c.layer(i);
    Json layer{{"layer", i}, {"wiring", to_string(l.wiring)}, {"width", l.width()}, {"max_fan_in", l.max_fan_in()}};
    if (l.lambda) layer["lambda"] = *l.lambda;
    layers.push_back(layer);
  }
  j["layers"] = layers;
  return j;
}

Json sampler_json(const sampler::SamplerReport& r) {
  Json j;
  j["pass"] = r.pass();
  j["property1_pass"] = r.property1_pass;
  j["property2_pass"] = r.property2_pass;
  j["mixing_pass"] = r.mixing_pass;
  j["worst_deviation"] = rational(r.worst_deviation);
  j["worst_low"] = r.worst_low ? Json(rational(*r.worst_low)) : Json(nullptr);
  j["strings"] = r.strings.size();
  return j;
}

circuit::GoodnessOptions goodness_options(const Config& cfg, std::uint64_t seed) {
  circuit::GoodnessOptions g;
  g.exhaustive_cap = cfg.exhaustive_cap;
  g.trials = cfg.trials;
  g.seed = derive_seed(seed, 1);
  return g;
}

circuit::CompletenessOptions completeness_options(const Config& cfg, std::uint64_t seed) {
  circuit::CompletenessOptions c;
  c.trials = cfg.trials;
  c.seed = derive_seed(seed, 2);
  return c;
}

circuit::CircuitCertificate certify_circuit(const circuit::RobustCircuit& c, const Config& cfg, std::uint64_t seed) {
  circuit::CircuitCertificate cert;
  cert.goodness = circuit::certify_goodness(c, goodness_options(cfg, seed));
  // Randomized completeness holds per input with high probability, not for
  // every input, so only the deterministic variant gets a completeness check.
  if (c.variant() == circuit::Variant::deterministic) {
    cert.completeness = circuit::certify_completeness(c, completeness_options(cfg, seed));
  }
  return cert;
}

struct BuiltCircuit {
  circuit::RobustCircuit circuit;
  std::optional<circuit::CircuitCertificate> certificate;
  Json notes;
};

// Builds (or loads) the circuit for m inputs; certifies unless waived.
BuiltCircuit obtain_circuit(std::size_t m, const Config& cfg, std::uint64_t seed, bool certify) {
  Rational theta = parse_rational(cfg.theta);
  Json notes = Json::object();
  if (!cfg.circuit.empty()) {
    auto c = circuit::parse_circuit(read_file(cfg.circuit));
    notes["loaded"] = cfg.circuit;
    std::optional<circuit::CircuitCertificate> cert;
    if (certify && cfg.certify_loaded) cert = certify_circuit(c, cfg, seed);
    return {std::move(c), std::move(cert), notes};
  }
  auto variant = parse_variant(cfg.variant);
  if (variant == circuit::Variant::deterministic) {
    circuit::DeterministicOptions opts;
    opts.seed = derive_seed(seed, 3);
    opts.theta = theta;
    if (!certify) return {circuit::build_deterministic(m, opts), std::nullopt, notes};
    auto built = circuit::build_certified_deterministic(m, opts, goodness_options(cfg, seed),
                                                        completeness_options(cfg, seed));
    notes["tuning_rounds"] = built.rounds;
    return {std::move(built.circuit), std::move(built.certificate), notes};
  }
  std::size_t f = 0;
  if (cfg.fan_in) {
    f = *cfg.fan_in;
  } else {
    auto inputs = circuit::completeness_inputs(m, Rational(9, 10), 4, derive_seed(seed, 4));
    std::vector<std::uint64_t> seeds{derive_seed(seed, 5), derive_seed(seed, 6), derive_seed(seed, 7)};
    auto search = circuit::tune_fan_in(m, inputs, seeds, goodness_options(cfg, seed), 64, theta);
    f = search.fan_in;
    notes["tuned_fan_in"] = f;
  }
  auto c = circuit::build_randomized(m, f, derive_seed(seed, 8), theta);
  std::optional<circuit::CircuitCertificate> cert;
  if (certify) cert = certify_circuit(c, cfg, seed);
  return {std::move(c), std::move(cert), notes};
}

Json accounting_json(const pcp::Accounting& a) {
  Json j;
  j["base_vars"] = a.base_vars;
  j["base_clauses"] = a.base_clauses;
  j["base_width"] = a.base_width;
  j["depth"] = a.depth;
  j["layer_bits"] = a.layer_bits;
  j["proof_length"] = a.proof_length;
  j["randomness_bits"] = a.randomness_bits;
  j["random_strings"] = a.random_strings;
  j["max_fan_in"] = a.max_fan_in;
  j["extra_query_bound"] = a.extra_query_bound;
  j["query_bound"] = a.query_bound;
  j["max_nominal_queries"] = a.max_nominal_queries;
  j["max_distinct_queries"] = a.max_distinct_queries;
  return j;
}

void emit(const Json& report, const Config& cfg, std::ostream& out, const std::string& summary) {
  std::string text = report.dump(2) + "\n";
  if (cfg.report.empty()) {
    out << text;
  } else {
    write_file(cfg.report, text);
    out << summary << '\n';
  }
}

int cmd_transform(const Config& cfg, std::ostream& out) {
  auto seed = effective_seed(cfg);
  Json report = header("transform", seed);
  Json params;
  auto inst = load_instance(cfg, seed, params);
  params["variant"] = cfg.variant;
  params["theta"] = cfg.theta;
  params["waive_cert"] = cfg.waive_cert;
  params["exhaustive_cap"] = cfg.exhaustive_cap;
  params["trials"] = cfg.trials;
  params["adversary"] = cfg.adversary;
  if (cfg.fan_in) params["fan_in"] = *cfg.fan_in;
  report["parameters"] = params;

  auto built = obtain_circuit(inst.clause_count(), cfg, seed, !cfg.waive_cert);
  report["circuit"] = circuit_json(built.circuit);
  if (!built.notes.empty()) report["circuit"]["notes"] = built.notes;
  if (built.certificate) report["certificate"] = certificate_json(*built.certificate);
  if (!cfg.out_circuit.empty()) write_file(cfg.out_circuit, circuit::serialize_circuit(built.circuit));

  auto ts = pcp::transform(inst, built.circuit, built.certificate, cfg.waive_cert);
  report["accounting"] = accounting_json(ts.accounting());

  if (inst.num_vars() <= cfg.exhaustive_cap && !inst.degenerate()) {
    oracle::OracleOptions oo;
    oo.cap = cfg.exhaustive_cap;
    oo.jobs = cfg.jobs;
    auto opt = oracle::brute_force_opt(inst, oo);
    auto proof = pcp::honest_proof(ts, opt.argmax);
    report["honest"] = {{"base_optimum", rational(opt.optimum)},
                        {"assignment", opt.argmax.to_string()},
                        {"acceptance", rational(pcp::acceptance_probability(ts, proof, cfg.jobs))}};
  }
  if (cfg.adversary == "exhaustive") {
    auto adv = pcp::exhaustive_adversary(ts, cfg.exhaustive_cap, cfg.jobs);
    report["adversary"] = {{"kind", "exhaustive"},
                           {"max_acceptance", rational(adv.acceptance)},
                           {"proofs_examined", adv.proofs_examined}};
  } else if (cfg.adversary == "greedy") {
    auto adv = pcp::greedy_adversary(ts, cfg.trials, derive_seed(seed, 9));
    report["adversary"] = {{"kind", "greedy"},
                           {"best_acceptance", rational(adv.acceptance)},
                           {"restarts", adv.proofs_examined},
                           {"label", "heuristic lower bound on the maximum acceptance"}};
    if (ts.certificate() && ts.certificate()->pass() && !ts.waived()) {
      auto th = circuit::default_thresholds();
      report["adversary"]["certified_upper_bound"] = rational(th.transformed_soundness);
      report["adversary"]["bound_applies_if_base_optimum_at_most"] = rational(th.mean_out);
    }
  } else {
    require(cfg.adversary == "none", ErrorKind::invalid_argument, "unknown adversary " + cfg.adversary);
  }
  if (!cfg.out_system.empty()) write_file(cfg.out_system, csp::serialize(pcp::export_checks(ts)));

  emit(report, cfg, out,
       "transform: proof length " + std::to_string(ts.accounting().proof_length) + ", query bound " +
           std::to_string(ts.accounting().query_bound));
  return 0;
}

std::vector<sampler::SamplerReport> layer_sampler_reports(const circuit::RobustCircuit& c, std::uint64_t seed,
                                                          unsigned jobs, Json& out) {
  std::vector<sampler::SamplerReport> reports;
  out = Json::array();
  for (std::size_t i = 1; i <= c.depth(); ++i) {
    const auto& l = c.layer(i);
    if (l.wiring != circuit::Wiring::sampler) continue;
    sampler::SamplerFamily fam;
    fam.ground_size = l.input_width;
    fam.params = circuit::default_wiring_params();
    fam.lambda = l.lambda;
    for (const auto& g : l.gates) fam.sets.push_back(g.inputs);
    sampler::CorpusOptions co;
    co.seed = derive_seed(seed, 100 + i);
    auto corpus = sampler::adversarial_corpus(fam, co);
    auto rep = sampler::certify_sampler(fam, corpus, jobs);
    Json j = sampler_json(rep);
    j["layer"] = i;
    out.push_back(j);
    reports.push_back(std::move(rep));
  }
  return reports;
}

int cmd_certify(const Config& cfg, std::ostream& out) {
  auto seed = effective_seed(cfg);
  Json report = header("certify", seed);
  Json params;
  params["exhaustive_cap"] = cfg.exhaustive_cap;
  params["trials"] = cfg.trials;
  bool pass = true;

  if (!cfg.sampler_file.empty()) {
    params["sampler"] = cfg.sampler_file;
    auto fam = sampler::parse_family(read_file(cfg.sampler_file));
    sampler::CorpusOptions co;
    co.seed = derive_seed(seed, 10);
    auto corpus = sampler::adversarial_corpus(fam, co);
    auto rep = sampler::certify_sampler(fam, corpus, cfg.jobs);
    report["parameters"] = params;
    report["sampler"] = sampler_json(rep);
    pass = rep.pass();
  }
  if (!cfg.input.empty() || cfg.m) {
    Config c = cfg;
    if (!cfg.input.empty()) {
      c.circuit = cfg.input;
      c.certify_loaded = true;
    }
    std::size_t m = cfg.m.value_or(0);
    if (!cfg.input.empty()) {
      params["circuit"] = cfg.input;
    } else {
      params["m"] = m;
      params["variant"] = cfg.variant;
      if (cfg.fan_in) params["fan_in"] = *cfg.fan_in;
    }
    report["parameters"] = params;
    auto built = obtain_circuit(m, c, seed, true);
    report["circuit"] = circuit_json(built.circuit);
    if (!built.notes.empty()) report["circuit"]["notes"] = built.notes;
    report["certificate"] = certificate_json(*built.certificate);
    Json samplers;
    layer_sampler_reports(built.circuit, seed, cfg.jobs, samplers);
    report["sampler_layers"] = samplers;
    pass = pass && built.certificate->pass();
  }
  require(report.contains("parameters"), ErrorKind::invalid_argument, "give a circuit file, --m, or --sampler");
  report["pass"] = pass;
  emit(report, cfg, out, std::string("certify: ") + (pass ? "pass" : "fail"));
  return pass ? 0 : 1;
}

int cmd_oracle(const Config& cfg, std::ostream& out) {
  auto seed = effective_seed(cfg);
  Json report = header("oracle", seed);
  Json params;
  auto inst = load_instance(cfg, seed, params);
  params["exhaustive_cap"] = cfg.exhaustive_cap;
  report["parameters"] = params;
  oracle::OracleOptions oo;
  oo.cap = cfg.exhaustive_cap;
  oo.jobs = cfg.jobs;
  auto r = oracle::brute_force_opt(inst, oo);
  report["n"] = inst.num_vars();
  report["m"] = inst.clause_count();
  report["optimum"] = rational(r.optimum);
  report["satisfied"] = r.satisfied;
  report["argmax"] = r.argmax.to_string();
  report["enumerated"] = r.enumerated;
  report["degenerate"] = r.degenerate;
  if (cfg.timing) report["wall_seconds"] = r.wall_seconds;
  emit(report, cfg, out, "oracle: optimum " + to_string(r.optimum));
  return 0;
}

Json verdict_json(const gap_eth::BalanceVerdict& v) {
  Json j;
  j["balanced"] = v.balanced;
  j["condition1"] = v.condition1;
  j["condition2"] = v.condition2;
  j["top_size"] = v.top_size;
  j["top_rounded"] = v.top_rounded;
  j["top_sum"] = v.top_sum;
  j["top_limit"] = rational(v.top_limit);
  j["bottom_size"] = v.bottom_size;
  j["bottom_rounded"] = v.bottom_rounded;
  j["bottom_sum"] = v.bottom_sum;
  j["bottom_limit"] = rational(v.bottom_limit);
  return j;
}

int cmd_gap_reduce(const Config& cfg, std::ostream& out) {
  auto seed = effective_seed(cfg);
  Json report = header("gap-reduce", seed);
  Json params;
  auto base = load_instance(cfg, seed, params);
  require(base.is_3sat(), ErrorKind::invalid_argument, "gap-reduce needs a 3SAT instance");
  gap_eth::ReductionParams p;
  p.s = parse_rational(cfg.s);
  p.epsilon = parse_rational(cfg.epsilon);
  p.k = cfg.k;
  p.t = cfg.t;
  p.seed = derive_seed(seed, 11);
  p.validate();
  bool one_sided = cfg.reduction == "one-sided";
  require(one_sided || cfg.reduction == "two-sided", ErrorKind::invalid_argument,
          "unknown reduction " + cfg.reduction);
  std::size_t trials = cfg.reduce_trials.value_or(gap_eth::trial_budget(base.num_vars(), p.k));
  params["s"] = rational(p.s);
  params["epsilon"] = rational(p.epsilon);
  params["k"] = p.k;
  params["t"] = p.t;
  params["reduction"] = cfg.reduction;
  params["trials"] = trials;
  params["dry_run"] = cfg.dry_run;
  params["density"] = rational(gap_eth::clause_density(base));
  params["threshold"] = rational(p.threshold());
  params["k_condition"] = rational(p.k_condition());
  report["parameters"] = params;

  std::optional<sampler::SamplerFamily> fam;
  if (one_sided) {
    auto sp = gap_eth::one_sided_sampler_params(p);
    sp.target_lambda = cfg.lambda.value_or(sampler::chebyshev_lambda(sp.epsilon, sp.delta));
    fam = sampler::build_sampler_family(sp, p.t * base.clause_count(), derive_seed(seed, 12),
                                        sampler::FamilyKind::full);
    report["sampler"] = {{"ground_size", fam->ground_size},
                         {"degree", fam->degree},
                         {"lambda", fam->lambda.value_or(0.0)},
                         {"target_lambda", sp.target_lambda},
                         {"epsilon", rational(sp.epsilon)},
                         {"delta", rational(sp.delta)}};
  }

  gap_eth::ReductionParams first = p;
  first.seed = derive_seed(p.seed, 0);
  auto list = gap_eth::sample_list(base, first);
  auto verdict = gap_eth::check_balanced(list, first);
  report["first_list"] = verdict_json(verdict);
  if (fam) {
    auto r = gap_eth::one_sided_report(base, first, *fam, verdict);
    report["lll"] = {{"set_size", r.set_size},
                     {"intersection_degree", r.intersection_degree},
                     {"failure_estimate", r.failure_estimate},
                     {"value", r.lll.value},
                     {"holds", r.lll.holds},
                     {"k_condition_holds", r.k_condition_holds}};
  }
  if (cfg.dry_run) {
    emit(report, cfg, out, std::string("gap-reduce: dry run, first list ") + (verdict.balanced ? "balanced" : "unbalanced"));
    return 0;
  }

  gap_eth::DriverOptions opts;
  opts.kind = one_sided ? gap_eth::ReductionKind::one_sided : gap_eth::ReductionKind::two_sided;
  opts.family = fam ? &*fam : nullptr;
  opts.decider = gap_eth::propagation_decider(std::max<std::size_t>(cfg.exhaustive_cap, 24));
  opts.jobs = cfg.jobs;
  opts.stop_at_first_yes = cfg.stop_at_first;
  auto result = gap_eth::solve_driver(base, p, trials, opts);
  Json outcomes = Json::array();
  for (const auto& t : result.trials) {
    Json j{{"index", t.index}, {"seed", t.seed}};
    if (t.balanced) j["balanced"] = *t.balanced;
    j["output_clauses"] = t.output_clauses;
    j["cnf_vars"] = t.cnf_vars;
    j["cnf_clauses"] = t.cnf_clauses;
    j["yes"] = t.yes;
    outcomes.push_back(j);
  }
  report["trials"] = outcomes;
  report["verdict"] = result.yes ? "YES" : "NO";
  report["first_yes"] = result.first_yes ? Json(*result.first_yes) : Json(nullptr);
  emit(report, cfg, out, std::string("gap-reduce: ") + (result.yes ? "YES" : "NO"));
  return 0;
}

int cmd_bench(const Config& cfg, std::ostream& out) {
  auto seed = effective_seed(cfg);
  Json report = header("bench", seed);
  using Clock = std::chrono::steady_clock;
  auto time = [](auto&& fn) {
    auto start = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  Json rows = Json::array();
  auto inst = csp::random_ksat(18, 72, 3, derive_seed(seed, 0));
  rows.push_back({{"task", "brute_force n=18 m=72"}, {"seconds", time([&] {
                    oracle::OracleOptions oo;
                    oo.jobs = cfg.jobs;
                    oracle::brute_force_opt(inst, oo);
                  })}});
  std::optional<circuit::CertifiedCircuit> cc;
  rows.push_back({{"task", "certified deterministic circuit m=64"}, {"seconds", time([&] {
                    cc = circuit::build_certified_deterministic(64, {});
                  })}});
  rows.push_back({{"task", "sampler family N=1024"}, {"seconds", time([&] {
                    sampler::build_sampler_family(circuit::default_wiring_params(), 1024, seed);
                  })}});
  auto base = csp::random_ksat(12, 64, 3, derive_seed(seed, 1));
  rows.push_back({{"task", "transform and honest acceptance m=64"}, {"seconds", time([&] {
                    auto ts = pcp::transform(base, cc->circuit, cc->certificate);
                    auto proof = pcp::honest_proof(ts, Assignment(12));
                    pcp::acceptance_probability(ts, proof, cfg.jobs);
                  })}});
  rows.push_back({{"task", "randomized circuit m=1024 f=32 evaluation"}, {"seconds", time([&] {
                    auto c = circuit::build_randomized(1024, 32, seed);
                    c.evaluate(LayerString(1024, true));
                  })}});
  report["rows"] = rows;
  emit(report, cfg, out, "bench: " + std::to_string(rows.size()) + " rows");
  return 0;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_instance:
    case ErrorKind::parse_error:
    case ErrorKind::invalid_argument:
    case ErrorKind::shape_mismatch:
      return 2;
    case ErrorKind::resource_cap:
      return 3;
    case ErrorKind::infeasible:
    case ErrorKind::no_convergence:
    case ErrorKind::certificate:
    case ErrorKind::subroutine_failure:
      return 1;
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gap-preserving CSP transformations with certified robust circuits"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed (default: GAPFORGE_SEED or 1)");
    sub->add_option("--jobs", cfg.jobs, "Worker threads; never changes results")->check(CLI::PositiveNumber);
    sub->add_option("--report", cfg.report, "Write the JSON report here instead of stdout");
  };
  auto instance_source = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "Instance file (DIMACS or gcsp)");
    sub->add_option("--m", cfg.m, "Clause count of a random toy instance");
    sub->add_option("--n", cfg.n, "Variable count of a random toy instance");
  };
  auto circuit_opts = [&](CLI::App* sub) {
    sub->add_option("--variant", cfg.variant, "det|rand")
        ->check(CLI::IsMember({"det", "rand", "deterministic", "randomized"}));
    sub->add_option("--fanin", cfg.fan_in, "Fan-in of randomized circuits (default: tuned)");
    sub->add_option("--theta", cfg.theta, "Gate threshold");
    sub->add_option("--exhaustive-cap", cfg.exhaustive_cap, "Largest width or variable count enumerated");
    sub->add_option("--trials", cfg.trials, "Trials per statistical certificate layer");
  };

  auto* transform = app.add_subcommand("transform", "Build the transformed system and report its accounting");
  common(transform);
  instance_source(transform);
  circuit_opts(transform);
  transform->add_flag("--waive-cert", cfg.waive_cert, "Accept an uncertified circuit");
  transform->add_option("--adversary", cfg.adversary, "none|exhaustive|greedy")
      ->check(CLI::IsMember({"none", "exhaustive", "greedy"}));
  transform->add_option("--circuit", cfg.circuit, "Use this circuit file");
  transform->add_flag("--certify", cfg.certify_loaded, "Certify a loaded circuit");
  transform->add_option("--out-circuit", cfg.out_circuit, "Write the circuit here");
  transform->add_option("--out-system", cfg.out_system, "Write the checks as an instance here");

  auto* certify = app.add_subcommand("certify", "Certify a circuit or a sampler family");
  common(certify);
  certify->add_option("input", cfg.input, "Circuit file");
  certify->add_option("--m", cfg.m, "Build and certify a circuit for m inputs");
  certify->add_option("--sampler", cfg.sampler_file, "Sampler family file");
  circuit_opts(certify);

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum by enumeration");
  common(oracle_cmd);
  instance_source(oracle_cmd);
  oracle_cmd->add_option("--exhaustive-cap", cfg.exhaustive_cap, "Largest variable count enumerated");
  oracle_cmd->add_flag("--timing", cfg.timing, "Include wall time in the report");

  auto* gap = app.add_subcommand("gap-reduce", "Run the Gap-ETH reduction driver");
  common(gap);
  instance_source(gap);
  gap->add_option("--s", cfg.s, "Soundness of the base instance");
  gap->add_option("--epsilon", cfg.epsilon, "Relative gap");
  gap->add_option("--k", cfg.k, "Sample scale")->check(CLI::PositiveNumber);
  gap->add_option("--t", cfg.t, "List length multiplier")->check(CLI::PositiveNumber);
  gap->add_option("--trials", cfg.reduce_trials, "Reduction trials (default: ceil(2^(n/k) n^2))");
  gap->add_option("--reduction", cfg.reduction, "one-sided|two-sided")
      ->check(CLI::IsMember({"one-sided", "two-sided"}));
  gap->add_option("--lambda", cfg.lambda, "Sampler lambda target");
  gap->add_option("--exhaustive-cap", cfg.exhaustive_cap, "Primary variable cap of the decider");
  gap->add_flag("--dry-run", cfg.dry_run, "Report balancedness and the LLL condition only");
  gap->add_flag("--stop-at-first", cfg.stop_at_first, "Stop after the first YES trial");

  auto* bench = app.add_subcommand("bench", "Time representative operations");
  common(bench);

  try {
    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (transform->parsed()) return cmd_transform(cfg, out);
    if (certify->parsed()) return cmd_certify(cfg, out);
    if (oracle_cmd->parsed()) return cmd_oracle(cfg, out);
    if (gap->parsed()) return cmd_gap_reduce(cfg, out);
    if (bench->parsed()) return cmd_bench(cfg, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace gapforge::cli
