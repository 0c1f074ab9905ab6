#include "gapforge/oracle/sat_decider.hpp"

#include <string>
#include <vector>

#include "gapforge/error.hpp"

namespace gapforge::oracle {

namespace {

class Propagator {
 public:
  explicit Propagator(const csp::CspInstance& cnf) : occ_(cnf.num_vars()), value_(cnf.num_vars(), -1) {
    clauses_.reserve(cnf.clause_count());
    for (std::size_t j = 0; j < cnf.clause_count(); ++j) {
      auto lits = cnf.clause(j).literals();
      require(lits.has_value(), ErrorKind::invalid_argument, "decider needs disjunctive clauses");
      for (const auto& l : *lits) occ_[l.var].push_back(j);
      clauses_.push_back(std::move(*lits));
    }
  }

  // Returns false on conflict.
  bool run(std::uint64_t primary_bits, std::size_t primary) {
    std::fill(value_.begin(), value_.end(), std::int8_t{-1});
    trail_.clear();
    for (std::size_t v = 0; v < primary; ++v) assign(v, (primary_bits >> v) & 1U);
    for (std::size_t j = 0; j < clauses_.size(); ++j) {
      if (!visit(j)) return false;
    }
    for (std::size_t head = 0; head < trail_.size(); ++head) {
      for (auto j : occ_[trail_[head]]) {
        if (!visit(j)) return false;
      }
    }
    for (auto& v : value_) {
      if (v < 0) v = 0;
    }
    for (const auto& c : clauses_) {
      bool sat = false;
      for (const auto& l : c) sat = sat || truth(l) == 1;
      if (!sat) return false;
    }
    return true;
  }

  Assignment assignment() const {
    Assignment a(value_.size());
    for (std::size_t v = 0; v < value_.size(); ++v) a.set(v, value_[v] == 1);
    return a;
  }

 private:
  int truth(const csp::Literal& l) const {
    auto v = value_[l.var];
    if (v < 0) return -1;
    return (v == 1) != l.negated ? 1 : 0;
  }

  void assign(std::size_t var, bool bit) {
    value_[var] = bit ? 1 : 0;
    trail_.push_back(var);
  }

  bool visit(std::size_t j) {
    const csp::Literal* open = nullptr;
    std::size_t unassigned = 0;
    for (const auto& l : clauses_[j]) {
      int t = truth(l);
      if (t == 1) return true;
      if (t < 0) {
        ++unassigned;
        open = &l;
      }
    }
    if (unassigned == 0) return false;
    if (unassigned == 1) assign(open->var, !open->negated);
    return true;
  }

  std::vector<std::vector<csp::Literal>> clauses_;
  std::vector<std::vector<std::size_t>> occ_;
  std::vector<std::int8_t> value_;
  std::vector<std::size_t> trail_;
};

}  // namespace

DeciderResult propagate_decide(const csp::CspInstance& cnf, std::size_t primary, std::size_t cap) {
  require(primary <= cnf.num_vars(), ErrorKind::invalid_argument, "primary count exceeds variables");
  require(primary <= cap && primary < 64, ErrorKind::resource_cap,
          "decider enumeration over " + std::to_string(primary) + " variables exceeds cap");
  Propagator prop(cnf);
  DeciderResult out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << primary); ++x) {
    ++out.primary_assignments_tried;
    if (prop.run(x, primary)) {
      out.satisfiable = true;
      out.witness = prop.assignment();
      return out;
    }
  }
  return out;
}

}  // namespace gapforge::oracle
