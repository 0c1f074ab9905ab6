#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gapforge/bits.hpp"
#include "gapforge/circuit/certify.hpp"
#include "gapforge/circuit/circuit.hpp"
#include "gapforge/csp/instance.hpp"
#include "gapforge/rational.hpp"

namespace gapforge::pcp {

// The proof (x, l_0, ..., l_d).
struct ProofString {
  Assignment x;
  std::vector<LayerString> layers;

  friend bool operator==(const ProofString&, const ProofString&) = default;
};

struct Accounting {
  std::size_t base_vars = 0;
  std::size_t base_clauses = 0;
  std::size_t base_width = 0;
  std::size_t depth = 0;
  // w_0 + ... + w_d.
  std::size_t layer_bits = 0;
  std::size_t proof_length = 0;
  // ceil(log2 m).
  std::size_t randomness_bits = 0;
  std::size_t random_strings = 0;
  std::size_t max_fan_in = 0;
  // fan_in * d + d + 1.
  std::size_t extra_query_bound = 0;
  std::size_t query_bound = 0;
  // Largest per-check count of proof reads, counting repeats.
  std::size_t max_nominal_queries = 0;
  // Largest per-check count of distinct proof positions.
  std::size_t max_distinct_queries = 0;
};

// Check j reads gate j mod w_i in every layer i.
struct CheckRef {
  std::size_t index = 0;
  std::vector<std::size_t> gates;
};

class TransformedSystem {
 public:
  TransformedSystem(csp::CspInstance base, circuit::RobustCircuit circuit,
                    std::optional<circuit::CircuitCertificate> certificate, bool waived);

  const csp::CspInstance& base() const noexcept { return base_; }
  const circuit::RobustCircuit& circuit() const noexcept { return circuit_; }
  const std::optional<circuit::CircuitCertificate>& certificate() const noexcept { return certificate_; }
  bool waived() const noexcept { return waived_; }
  const Accounting& accounting() const noexcept { return accounting_; }

  std::size_t check_count() const noexcept { return base_.clause_count(); }
  std::size_t proof_length() const noexcept { return accounting_.proof_length; }
  // Flat position of bit g of layer i; x occupies positions [0, n).
  std::size_t position(std::size_t layer, std::size_t bit) const { return offsets_[layer] + bit; }
  CheckRef check(std::size_t j) const;

  BitString flatten(const ProofString& p) const;
  ProofString unflatten(const BitString& flat) const;

  // Proof positions read by check j in read order, repeats included.
  std::vector<std::size_t> reads(std::size_t j) const;
  bool accepts(std::size_t j, const BitString& flat) const;

 private:
  csp::CspInstance base_;
  circuit::RobustCircuit circuit_;
  std::optional<circuit::CircuitCertificate> certificate_;
  bool waived_;
  std::vector<std::size_t> offsets_;
  Accounting accounting_;
};

// Requires m to match and a passing certificate for this circuit unless waived.
TransformedSystem transform(csp::CspInstance base, circuit::RobustCircuit circuit,
                            std::optional<circuit::CircuitCertificate> certificate, bool waive = false);

ProofString honest_proof(const TransformedSystem& ts, const Assignment& a);

struct CheckResult {
  bool accept = false;
  bool clause_ok = false;
  // Gate consistency per layer 1..d.
  std::vector<bool> gates_ok;
  bool top_ok = false;
  // Distinct positions in first-read order.
  std::vector<std::size_t> transcript;
  std::size_t nominal_queries = 0;
};

CheckResult run_check(const TransformedSystem& ts, std::size_t j, const ProofString& p);

Rational acceptance_probability(const TransformedSystem& ts, const ProofString& p, unsigned jobs = 1);

struct AdversaryResult {
  Rational acceptance;
  ProofString proof;
  std::uint64_t proofs_examined = 0;
};

// Exact maximum over all proofs; ties go to the first proof in enumeration
// order (layer bits outer, x inner).
AdversaryResult exhaustive_adversary(const TransformedSystem& ts, std::size_t cap = 24, unsigned jobs = 1);

// Single-bit hill climbing, cycling through three starts: the honest proof of
// a random assignment, the same assignment with every layer set to ones, and
// a uniformly random proof.
AdversaryResult greedy_adversary(const TransformedSystem& ts, std::size_t restarts, std::uint64_t seed);

// The checks as truth-table clauses over the flat proof.
csp::CspInstance export_checks(const TransformedSystem& ts, std::size_t max_arity = 20);

}  // namespace gapforge::pcp
