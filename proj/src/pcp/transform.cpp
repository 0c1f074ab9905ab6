#include "gapforge/pcp/transform.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "gapforge/error.hpp"
#include "gapforge/parallel.hpp"
#include "gapforge/random.hpp"

namespace gapforge::pcp {

TransformedSystem::TransformedSystem(csp::CspInstance base, circuit::RobustCircuit circuit,
                                     std::optional<circuit::CircuitCertificate> certificate, bool waived)
    : base_(std::move(base)), circuit_(std::move(circuit)), certificate_(std::move(certificate)), waived_(waived) {
  auto widths = circuit_.widths();
  std::size_t d = circuit_.depth();
  std::size_t at = base_.num_vars();
  for (auto w : widths) {
    offsets_.push_back(at);
    at += w;
  }
  auto& a = accounting_;
  a.base_vars = base_.num_vars();
  a.base_clauses = base_.clause_count();
  a.base_width = base_.width();
  a.depth = d;
  a.layer_bits = at - base_.num_vars();
  a.proof_length = at;
  a.randomness_bits = circuit::deterministic_depth(base_.clause_count());
  a.random_strings = base_.clause_count();
  a.max_fan_in = circuit_.max_fan_in();
  a.extra_query_bound = a.max_fan_in * d + d + 1;
  a.query_bound = a.base_width + a.extra_query_bound;
  for (std::size_t j = 0; j < check_count(); ++j) {
    auto r = reads(j);
    a.max_nominal_queries = std::max(a.max_nominal_queries, r.size());
    std::sort(r.begin(), r.end());
    auto distinct = static_cast<std::size_t>(std::unique(r.begin(), r.end()) - r.begin());
    a.max_distinct_queries = std::max(a.max_distinct_queries, distinct);
  }
}

CheckRef TransformedSystem::check(std::size_t j) const {
  require(j < check_count(), ErrorKind::invalid_argument, "check index out of range");
  CheckRef ref;
  ref.index = j;
  for (std::size_t i = 1; i <= circuit_.depth(); ++i) ref.gates.push_back(j % circuit_.layer(i).width());
  return ref;
}

BitString TransformedSystem::flatten(const ProofString& p) const {
  auto widths = circuit_.widths();
  require(p.x.size() == base_.num_vars(), ErrorKind::shape_mismatch, "proof assignment has the wrong length");
  require(p.layers.size() == widths.size(), ErrorKind::shape_mismatch, "proof has the wrong number of layers");
  BitString flat(proof_length());
  for (std::size_t v = 0; v < p.x.size(); ++v) flat.set(v, p.x[v]);
  for (std::size_t i = 0; i < widths.size(); ++i) {
    require(p.layers[i].size() == widths[i], ErrorKind::shape_mismatch,
            "proof layer " + std::to_string(i) + " has the wrong width");
    for (std::size_t g = 0; g < widths[i]; ++g) flat.set(offsets_[i] + g, p.layers[i][g]);
  }
  return flat;
}

ProofString TransformedSystem::unflatten(const BitString& flat) const {
  require(flat.size() == proof_length(), ErrorKind::shape_mismatch, "flat proof has the wrong length");
  auto widths = circuit_.widths();
  ProofString p;
  p.x = Assignment(base_.num_vars());
  for (std::size_t v = 0; v < base_.num_vars(); ++v) p.x.set(v, flat[v]);
  for (std::size_t i = 0; i < widths.size(); ++i) {
    LayerString l(widths[i]);
    for (std::size_t g = 0; g < widths[i]; ++g) l.set(g, flat[offsets_[i] + g]);
    p.layers.push_back(std::move(l));
  }
  return p;
}

std::vector<std::size_t> TransformedSystem::reads(std::size_t j) const {
  std::vector<std::size_t> out(base_.clause(j).scope().begin(), base_.clause(j).scope().end());
  out.push_back(position(0, j));
  for (std::size_t i = 1; i <= circuit_.depth(); ++i) {
    const auto& layer = circuit_.layer(i);
    std::size_t g = j % layer.width();
    for (auto in : layer.gates[g].inputs) out.push_back(position(i - 1, in));
    out.push_back(position(i, g));
  }
  return out;
}

bool TransformedSystem::accepts(std::size_t j, const BitString& flat) const {
  const auto& clause = base_.clause(j);
  std::uint64_t idx = 0;
  for (auto v : clause.scope()) idx = (idx << 1) | static_cast<std::uint64_t>(flat[v]);
  if (clause.value_at(idx) != flat[position(0, j)]) return false;
  bool last = true;
  for (std::size_t i = 1; i <= circuit_.depth(); ++i) {
    const auto& layer = circuit_.layer(i);
    std::size_t g = j % layer.width();
    std::size_t ones = 0;
    for (auto in : layer.gates[g].inputs) ones += flat[position(i - 1, in)] ? 1 : 0;
    last = flat[position(i, g)];
    if (layer.gates[g].fires(ones) != last) return false;
  }
  return circuit_.depth() == 0 ? flat[position(0, j)] : last;
}

TransformedSystem transform(csp::CspInstance base, circuit::RobustCircuit circuit,
                            std::optional<circuit::CircuitCertificate> certificate, bool waive) {
  require(circuit.m() == base.clause_count(), ErrorKind::shape_mismatch,
          "circuit input width " + std::to_string(circuit.m()) + " differs from the clause count " +
              std::to_string(base.clause_count()));
  if (!waive) {
    require(certificate.has_value(), ErrorKind::certificate, "circuit has no certificate and no waiver");
    require(certificate->goodness.m == circuit.m() && certificate->goodness.widths == circuit.widths(),
            ErrorKind::certificate, "certificate was issued for a different circuit shape");
    require(certificate->pass(), ErrorKind::certificate, "circuit certificate does not pass");
  }
  return TransformedSystem(std::move(base), std::move(circuit), std::move(certificate), waive);
}

ProofString honest_proof(const TransformedSystem& ts, const Assignment& a) {
  require(a.size() == ts.base().num_vars(), ErrorKind::shape_mismatch, "assignment has the wrong length");
  ProofString p;
  p.x = a;
  LayerString l0(ts.base().clause_count());
  for (std::size_t j = 0; j < l0.size(); ++j) l0.set(j, ts.base().clause(j).evaluate(a));
  auto rest = ts.circuit().evaluate(l0);
  p.layers.push_back(std::move(l0));
  for (auto& l : rest) p.layers.push_back(std::move(l));
  return p;
}

CheckResult run_check(const TransformedSystem& ts, std::size_t j, const ProofString& p) {
  require(j < ts.check_count(), ErrorKind::invalid_argument, "check index out of range");
  auto flat = ts.flatten(p);
  CheckResult r;
  auto reads = ts.reads(j);
  r.nominal_queries = reads.size();
  for (auto pos : reads) {
    if (std::find(r.transcript.begin(), r.transcript.end(), pos) == r.transcript.end()) r.transcript.push_back(pos);
  }
  r.clause_ok = ts.base().clause(j).evaluate(p.x) == p.layers[0][j];
  const auto& c = ts.circuit();
  bool top = p.layers[0][j];
  for (std::size_t i = 1; i <= c.depth(); ++i) {
    const auto& layer = c.layer(i);
    std::size_t g = j % layer.width();
    r.gates_ok.push_back(layer.gates[g].evaluate(p.layers[i - 1]) == p.layers[i][g]);
    top = p.layers[i][g];
  }
  r.top_ok = top;
  r.accept = r.clause_ok && r.top_ok && std::all_of(r.gates_ok.begin(), r.gates_ok.end(), [](bool b) { return b; });
  return r;
}

Rational acceptance_probability(const TransformedSystem& ts, const ProofString& p, unsigned jobs) {
  auto flat = ts.flatten(p);
  std::size_t m = ts.check_count();
  require(m > 0, ErrorKind::invalid_argument, "system has no checks");
  std::vector<std::size_t> counts(worker_count(m, jobs), 0);
  parallel_ranges(m, jobs, [&](std::size_t begin, std::size_t end, std::size_t w) {
    for (std::size_t j = begin; j < end; ++j) counts[w] += ts.accepts(j, flat) ? 1 : 0;
  });
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return Rational(static_cast<std::int64_t>(total), static_cast<std::int64_t>(m));
}

AdversaryResult exhaustive_adversary(const TransformedSystem& ts, std::size_t cap, unsigned jobs) {
  std::size_t bits = ts.proof_length();
  require(bits <= std::min<std::size_t>(cap, 40), ErrorKind::resource_cap,
          "proof of " + std::to_string(bits) + " bits exceeds the exhaustive cap " + std::to_string(cap));
  const auto& base = ts.base();
  const auto& c = ts.circuit();
  std::size_t n = base.num_vars();
  std::size_t m = base.clause_count();
  std::size_t layer_bits = bits - n;

  // Clause values of every assignment as an m-bit mask.
  std::vector<std::uint64_t> clause_mask(std::size_t{1} << n, 0);
  for (std::uint64_t x = 0; x < clause_mask.size(); ++x) {
    for (std::size_t j = 0; j < m; ++j) {
      if (base.clause(j).evaluate_mask(x)) clause_mask[x] |= std::uint64_t{1} << j;
    }
  }
  auto widths = c.widths();
  std::vector<std::size_t> offsets{0};
  for (auto w : widths) offsets.push_back(offsets.back() + w);

  struct Best {
    std::size_t count = 0;
    std::uint64_t layers = 0;
    std::uint64_t x = 0;
    bool found = false;
  };
  std::uint64_t total_layers = std::uint64_t{1} << layer_bits;
  std::vector<Best> per_worker(worker_count(total_layers, jobs));
  parallel_ranges(total_layers, jobs, [&](std::size_t begin, std::size_t end, std::size_t w) {
    Best best;
    std::vector<std::uint8_t> consistent;
    for (std::uint64_t L = begin; L < end; ++L) {
      auto bit = [&](std::size_t layer, std::size_t g) { return ((L >> (offsets[layer] + g)) & 1U) != 0; };
      std::uint64_t good = (m == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
      for (std::size_t i = 1; i <= c.depth(); ++i) {
        const auto& layer = c.layer(i);
        consistent.assign(layer.width(), 0);
        for (std::size_t g = 0; g < layer.width(); ++g) {
          std::size_t ones = 0;
          for (auto in : layer.gates[g].inputs) ones += bit(i - 1, in) ? 1 : 0;
          consistent[g] = layer.gates[g].fires(ones) == bit(i, g) ? 1 : 0;
        }
        for (std::size_t j = 0; j < m; ++j) {
          std::size_t g = j % layer.width();
          if (!consistent[g] || (i == c.depth() && !bit(i, g))) good &= ~(std::uint64_t{1} << j);
        }
      }
      if (c.depth() == 0) good &= L;
      std::uint64_t l0 = L & ((m == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
      if (good == 0) {
        if (!best.found) best = {0, L, 0, true};
        continue;
      }
      for (std::uint64_t x = 0; x < clause_mask.size(); ++x) {
        auto count = static_cast<std::size_t>(std::popcount(good & ~(clause_mask[x] ^ l0)));
        if (!best.found || count > best.count) best = {count, L, x, true};
      }
    }
    per_worker[w] = best;
  });
  Best best;
  for (const auto& b : per_worker) {
    if (!best.found || b.count > best.count) best = b;
  }
  BitString flat(bits);
  for (std::size_t v = 0; v < n; ++v) flat.set(v, (best.x >> v) & 1U);
  for (std::size_t k = 0; k < layer_bits; ++k) flat.set(n + k, (best.layers >> k) & 1U);
  AdversaryResult out;
  out.acceptance = Rational(static_cast<std::int64_t>(best.count), static_cast<std::int64_t>(m));
  out.proof = ts.unflatten(flat);
  out.proofs_examined = std::uint64_t{1} << bits;
  return out;
}

AdversaryResult greedy_adversary(const TransformedSystem& ts, std::size_t restarts, std::uint64_t seed) {
  std::size_t bits = ts.proof_length();
  std::size_t m = ts.check_count();
  std::vector<std::vector<std::size_t>> readers(bits);
  for (std::size_t j = 0; j < m; ++j) {
    auto r = ts.reads(j);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    for (auto pos : r) readers[pos].push_back(j);
  }
  AdversaryResult best;
  bool have = false;
  for (std::size_t run = 0; run < std::max<std::size_t>(restarts, 1); ++run) {
    Rng rng(derive_seed(seed, run));
    BitString flat;
    if (run % 3 != 2) {
      Assignment a(ts.base().num_vars());
      for (std::size_t v = 0; v < a.size(); ++v) a.set(v, rng() & 1U);
      flat = ts.flatten(honest_proof(ts, a));
      // Claim every layer is all ones: accepted exactly where x satisfies the clause.
      if (run % 3 == 1) {
        for (std::size_t k = a.size(); k < bits; ++k) flat.set(k, true);
      }
    } else {
      flat = BitString(bits);
      for (std::size_t k = 0; k < bits; ++k) flat.set(k, rng() & 1U);
    }
    std::vector<std::uint8_t> ok(m);
    std::size_t accepted = 0;
    for (std::size_t j = 0; j < m; ++j) {
      ok[j] = ts.accepts(j, flat) ? 1 : 0;
      accepted += ok[j];
    }
    std::vector<std::size_t> order(bits);
    for (std::size_t k = 0; k < bits; ++k) order[k] = k;
    bool improved = true;
    while (improved && accepted < m) {
      improved = false;
      std::shuffle(order.begin(), order.end(), rng);
      for (auto pos : order) {
        flat.flip(pos);
        long delta = 0;
        for (auto j : readers[pos]) delta += static_cast<long>(ts.accepts(j, flat)) - static_cast<long>(ok[j]);
        if (delta > 0) {
          for (auto j : readers[pos]) {
            bool now = ts.accepts(j, flat);
            accepted += now;
            accepted -= ok[j];
            ok[j] = now ? 1 : 0;
          }
          improved = true;
        } else {
          flat.flip(pos);
        }
      }
    }
    Rational value(static_cast<std::int64_t>(accepted), static_cast<std::int64_t>(m));
    if (!have || value > best.acceptance) {
      best.acceptance = value;
      best.proof = ts.unflatten(flat);
      have = true;
    }
    ++best.proofs_examined;
  }
  return best;
}

csp::CspInstance export_checks(const TransformedSystem& ts, std::size_t max_arity) {
  std::vector<csp::Clause> clauses;
  BitString scratch(ts.proof_length());
  for (std::size_t j = 0; j < ts.check_count(); ++j) {
    auto scope = ts.reads(j);
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    require(scope.size() <= std::min(max_arity, csp::kMaxArity), ErrorKind::resource_cap,
            "check " + std::to_string(j) + " reads " + std::to_string(scope.size()) +
                " positions, above the export cap " + std::to_string(max_arity));
    std::size_t a = scope.size();
    std::vector<std::uint8_t> table(std::size_t{1} << a);
    for (std::uint64_t row = 0; row < table.size(); ++row) {
      for (std::size_t k = 0; k < a; ++k) scratch.set(scope[k], (row >> (a - 1 - k)) & 1U);
      table[row] = ts.accepts(j, scratch) ? 1 : 0;
    }
    clauses.emplace_back(std::move(scope), std::move(table));
  }
  return csp::CspInstance(ts.proof_length(), std::move(clauses));
}

}  // namespace gapforge::pcp
