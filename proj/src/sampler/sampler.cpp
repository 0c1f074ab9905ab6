#include "gapforge/sampler/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "gapforge/error.hpp"
#include "gapforge/parallel.hpp"
#include "gapforge/random.hpp"

namespace gapforge::sampler {

void SamplerParams::validate() const {
  require(epsilon > 0 && epsilon < 1, ErrorKind::invalid_argument, "epsilon must lie in (0,1)");
  require(delta > 0 && delta < 1, ErrorKind::invalid_argument, "delta must lie in (0,1)");
  if (gamma) require(*gamma > 0 && *gamma < 1, ErrorKind::invalid_argument, "gamma must lie in (0,1)");
  require(target_lambda > 0 && target_lambda < 1, ErrorKind::invalid_argument,
          "target lambda must lie in (0,1)");
}

std::size_t SamplerFamily::set_size() const {
  if (sets.empty()) return 0;
  auto c = sets.front().size();
  for (const auto& s : sets) {
    if (s.size() != c) return 0;
  }
  return c;
}

double chebyshev_lambda(const Rational& epsilon, const Rational& delta) {
  return 2.0 * to_double(epsilon) * std::sqrt(to_double(delta));
}

double analytic_lambda(const SamplerParams& params, FamilyKind kind) {
  double loss = kind == FamilyKind::halved ? 2.0 : 1.0;
  double lambda = 2.0 * to_double(params.epsilon) * std::sqrt(to_double(params.delta) / loss);
  if (params.gamma) {
    double g = to_double(*params.gamma);
    lambda = std::min(lambda, (1.0 - g) / (2.0 * std::sqrt(2.0 * loss)));
  }
  return lambda;
}

SamplerFamily family_from_graph(const RegularGraph& g, const SamplerParams& params, double lambda,
                                FamilyKind kind, std::optional<std::size_t> set_count) {
  std::size_t keep = set_count.value_or(kind == FamilyKind::halved ? g.size() / 2 : g.size());
  require(keep <= g.size(), ErrorKind::invalid_argument, "cannot keep more sets than vertices");
  SamplerFamily fam;
  fam.ground_size = g.size();
  fam.params = params;
  fam.lambda = lambda;
  fam.degree = g.degree();
  fam.provenance = Provenance::expander;
  fam.sets.reserve(keep);
  for (std::size_t v = 0; v < keep; ++v) fam.sets.push_back(g.neighbors(v));
  return fam;
}

SamplerFamily build_sampler_family(const SamplerParams& params, std::size_t n, std::uint64_t seed,
                                   FamilyKind kind, std::optional<std::size_t> set_count) {
  params.validate();
  require(n >= 4, ErrorKind::invalid_argument, "sampler families need N >= 4");
  bool simple = params.model == GraphModel::simple;
  std::size_t cap = params.max_degree != 0 ? params.max_degree : (simple ? n - 1 : 4 * n);
  if (simple) cap = std::min(cap, n - 1);
  auto valid = [&](std::size_t d) { return (n * d) % 2 == 0; };
  std::size_t lo = std::max<std::size_t>(3, params.min_degree);
  if (!valid(lo)) ++lo;
  while (cap > lo && !valid(cap)) --cap;
  if (lo > cap || !valid(cap)) {
    fail(ErrorKind::infeasible, "no admissible degree in [" + std::to_string(lo) + ", " + std::to_string(cap) + "]");
  }

  std::map<std::size_t, std::pair<double, RegularGraph>> tried;
  auto probe = [&](std::size_t d) -> double {
    if (auto it = tried.find(d); it != tried.end()) return it->second.first;
    auto g = build_expander(n, d, derive_seed(seed, d), {params.model, 200});
    EigenOptions eig;
    eig.tol = 1e-7;
    double lambda = second_eigenvalue(g, eig);
    tried.emplace(d, std::make_pair(lambda, std::move(g)));
    return lambda;
  };

  std::size_t pass = 0;
  std::size_t failed = 0;
  for (std::size_t d = lo;;) {
    if (probe(d) <= params.target_lambda) {
      pass = d;
      break;
    }
    failed = d;
    if (d == cap) {
      std::ostringstream os;
      os << "no degree up to " << cap << " reaches lambda <= " << params.target_lambda
         << " on " << n << " vertices (best " << tried.at(cap).first << ")";
      fail(ErrorKind::infeasible, os.str());
    }
    d = std::min(cap, 2 * d);
    if (!valid(d)) d = d == cap ? d : d + 1;
  }
  while (failed != 0 && pass > failed + 1) {
    std::size_t mid = failed + (pass - failed) / 2;
    if (!valid(mid)) ++mid;
    if (mid >= pass) break;
    if (probe(mid) <= params.target_lambda) {
      pass = mid;
    } else {
      failed = mid;
    }
  }
  const auto& [lambda, graph] = tried.at(pass);
  return family_from_graph(graph, params, lambda, kind, set_count);
}

std::size_t max_intersection_degree(const SamplerFamily& fam) {
  std::vector<std::vector<std::size_t>> containing(fam.ground_size);
  for (std::size_t i = 0; i < fam.sets.size(); ++i) {
    for (auto e : fam.sets[i]) {
      if (containing[e].empty() || containing[e].back() != i) containing[e].push_back(i);
    }
  }
  std::vector<std::size_t> mark(fam.sets.size(), SIZE_MAX);
  std::size_t best = 0;
  for (std::size_t i = 0; i < fam.sets.size(); ++i) {
    std::size_t count = 0;
    mark[i] = i;
    for (auto e : fam.sets[i]) {
      for (auto j : containing[e]) {
        if (mark[j] != i) {
          mark[j] = i;
          ++count;
        }
      }
    }
    best = std::max(best, count);
  }
  return best;
}

double mixing_bound(double lambda, double gamma, double eta) {
  require(lambda > 0 && lambda < 1, ErrorKind::invalid_argument, "lambda must lie in (0,1)");
  require(gamma > 0 && gamma < 1, ErrorKind::invalid_argument, "gamma must lie in (0,1)");
  require(eta >= 0 && eta < (1 - gamma) / 2, ErrorKind::invalid_argument, "eta must lie in [0, (1-gamma)/2)");
  return 4.0 * lambda * lambda / ((1 - gamma) * (1 - gamma)) * eta;
}

namespace {

StringReport certify_string(const SamplerFamily& fam, const BitString& x, std::size_t index) {
  auto n = static_cast<std::int64_t>(fam.ground_size);
  auto k = static_cast<std::int64_t>(x.count());
  StringReport r;
  r.index = index;
  r.mean = Rational(k, n);
  std::size_t low = 0;
  const auto& p = fam.params;
  bool low_applies = false;
  if (p.gamma) {
    r.eta = Rational(n - k, n);
    low_applies = *r.eta < (Rational(1) - *p.gamma) / 2;
    if (!low_applies) r.eta.reset();
  }
  for (const auto& s : fam.sets) {
    auto c = static_cast<std::int64_t>(s.size());
    std::int64_t ones = 0;
    for (auto e : s) ones += x[e] ? 1 : 0;
    auto gap = ones * n - k * c;
    if (Rational(gap < 0 ? -gap : gap, c * n) > p.epsilon) ++r.deviating;
    if (low_applies && Rational(ones, c) < *p.gamma) ++low;
  }
  auto total = static_cast<std::int64_t>(fam.sets.size());
  r.deviation_fraction = total == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(r.deviating), total);
  r.property1 = r.deviation_fraction <= p.delta;
  if (low_applies) {
    r.low_fraction = total == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(low), total);
    r.property2 = *r.low_fraction <= *r.eta / 2;
    if (fam.lambda && *fam.lambda > 0 && *fam.lambda < 1) {
      r.mixing_bound = mixing_bound(*fam.lambda, to_double(*p.gamma), to_double(*r.eta));
      r.mixing_ok = to_double(*r.low_fraction) <= *r.mixing_bound * (1 + 1e-12);
    }
  }
  return r;
}

}  // namespace

SamplerReport certify_sampler(const SamplerFamily& fam, std::span<const BitString> corpus, unsigned jobs) {
  for (const auto& x : corpus) {
    require(x.size() == fam.ground_size, ErrorKind::shape_mismatch,
            "corpus string length differs from the ground set");
  }
  SamplerReport report;
  report.strings.resize(corpus.size());
  parallel_ranges(corpus.size(), jobs, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) report.strings[i] = certify_string(fam, corpus[i], i);
  });
  for (const auto& r : report.strings) {
    report.worst_deviation = std::max(report.worst_deviation, r.deviation_fraction);
    if (r.low_fraction) report.worst_low = std::max(report.worst_low.value_or(Rational(0)), *r.low_fraction);
    report.property1_pass = report.property1_pass && r.property1;
    report.property2_pass = report.property2_pass && r.property2;
    report.mixing_pass = report.mixing_pass && r.mixing_ok;
  }
  return report;
}

namespace {

// Swap search over strings with a fixed number of zeros, maximizing the sum
// of a per-set score of the set's zero count.
class SwapSearch {
 public:
  SwapSearch(const SamplerFamily& fam, std::function<double(std::size_t, std::size_t)> score)
      : fam_(fam), score_(std::move(score)), containing_(fam.ground_size) {
    for (std::size_t i = 0; i < fam.sets.size(); ++i) {
      for (auto e : fam.sets[i]) containing_[e].push_back(i);
    }
  }

  BitString run(BitString x, std::size_t steps, Rng& rng) {
    std::vector<std::size_t> zeros_in(fam_.sets.size(), 0);
    for (std::size_t i = 0; i < fam_.sets.size(); ++i) {
      for (auto e : fam_.sets[i]) zeros_in[i] += x[e] ? 0 : 1;
    }
    std::vector<std::size_t> zeros, ones;
    for (std::size_t e = 0; e < x.size(); ++e) (x[e] ? ones : zeros).push_back(e);
    if (zeros.empty() || ones.empty()) return x;
    auto apply = [&](std::size_t e, bool to_zero) {
      double delta = 0;
      for (auto i : containing_[e]) {
        auto before = zeros_in[i];
        zeros_in[i] = to_zero ? before + 1 : before - 1;
        delta += score_(i, zeros_in[i]) - score_(i, before);
      }
      return delta;
    };
    for (std::size_t s = 0; s < steps; ++s) {
      auto zi = uniform_index(rng, zeros.size());
      auto oi = uniform_index(rng, ones.size());
      auto a = zeros[zi];
      auto b = ones[oi];
      double delta = apply(a, false) + apply(b, true);
      if (delta >= 0) {
        x.set(a, true);
        x.set(b, false);
        zeros[zi] = b;
        ones[oi] = a;
      } else {
        apply(b, false);
        apply(a, true);
      }
    }
    return x;
  }

 private:
  const SamplerFamily& fam_;
  std::function<double(std::size_t, std::size_t)> score_;
  std::vector<std::vector<std::size_t>> containing_;
};

BitString with_zero_prefix(std::size_t n, std::size_t zeros) {
  BitString x(n, true);
  for (std::size_t e = 0; e < zeros && e < n; ++e) x.set(e, false);
  return x;
}

BitString neighborhood_zeros(const SamplerFamily& fam, std::size_t zeros) {
  BitString x(fam.ground_size, true);
  std::size_t placed = 0;
  for (const auto& s : fam.sets) {
    for (auto e : s) {
      if (placed == zeros) return x;
      if (x[e]) {
        x.set(e, false);
        ++placed;
      }
    }
  }
  for (std::size_t e = 0; e < fam.ground_size && placed < zeros; ++e) {
    if (x[e]) {
      x.set(e, false);
      ++placed;
    }
  }
  return x;
}

}  // namespace

std::vector<BitString> adversarial_corpus(const SamplerFamily& fam, const CorpusOptions& options) {
  std::size_t n = fam.ground_size;
  std::size_t steps = options.search_steps != 0 ? options.search_steps : 20 * n;
  Rng rng(options.seed);
  std::vector<BitString> out;
  out.emplace_back(n, true);
  out.emplace_back(n, false);
  BitString alt(n), alt_shift(n);
  for (std::size_t e = 0; e < n; ++e) {
    alt.set(e, e % 2 == 1);
    alt_shift.set(e, e % 2 == 0);
  }
  out.push_back(alt);
  out.push_back(alt_shift);
  for (std::size_t i = 0; i < options.random_strings; ++i) {
    std::bernoulli_distribution bit(static_cast<double>(i + 1) / static_cast<double>(options.random_strings + 1));
    BitString x(n);
    for (std::size_t e = 0; e < n; ++e) x.set(e, bit(rng));
    out.push_back(std::move(x));
  }

  auto etas = options.etas;
  if (etas.empty()) {
    Rational base = fam.params.gamma ? (Rational(1) - *fam.params.gamma) / 2 : Rational(1, 2);
    for (auto f : {Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(15, 16)}) {
      etas.push_back(base * f);
    }
  }

  const auto& p = fam.params;
  for (const auto& eta : etas) {
    auto zeros = static_cast<std::size_t>(floor_times(eta, static_cast<std::int64_t>(n)));
    if (zeros == 0) zeros = 1;
    if (zeros >= n) continue;
    out.push_back(with_zero_prefix(n, zeros));
    auto clustered = neighborhood_zeros(fam, zeros);
    out.push_back(clustered);

    double mean = 1.0 - static_cast<double>(zeros) / static_cast<double>(n);
    double eps = to_double(p.epsilon);
    SwapSearch deviation(fam, [&](std::size_t i, std::size_t z) {
      double c = static_cast<double>(fam.sets[i].size());
      double ones_mean = 1.0 - static_cast<double>(z) / c;
      double gap = std::abs(ones_mean - mean);
      return (gap > eps ? 1.0 : 0.0) * (c + 1) + std::min(gap, eps) * c;
    });
    out.push_back(deviation.run(clustered, steps, rng));

    if (p.gamma) {
      double g = to_double(*p.gamma);
      SwapSearch low(fam, [&](std::size_t i, std::size_t z) {
        double c = static_cast<double>(fam.sets[i].size());
        auto needed = static_cast<std::size_t>(std::floor(c * (1 - g) + 1e-9)) + 1;
        return (z >= needed ? 1.0 : 0.0) * (c + 1) + static_cast<double>(std::min(z, needed));
      });
      out.push_back(low.run(clustered, steps, rng));
    }
  }
  return out;
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string serialize_family(const SamplerFamily& fam) {
  std::ostringstream os;
  const auto& p = fam.params;
  os << "sampler " << fam.ground_size << ' ' << fam.set_size() << ' ' << gapforge::to_string(p.epsilon) << ' '
     << gapforge::to_string(p.delta) << ' ' << (p.gamma ? gapforge::to_string(*p.gamma) : std::string("-")) << ' '
     << (fam.lambda ? format_double(*fam.lambda) : std::string("-")) << '\n';
  for (const auto& s : fam.sets) {
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
    os << '\n';
  }
  return os.str();
}

SamplerFamily parse_family(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  SamplerFamily fam;
  bool header = false;
  std::size_t c = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    if (!header) {
      std::string tag, eps, delta, gamma, lambda;
      if (!(ls >> tag >> fam.ground_size >> c >> eps >> delta >> gamma >> lambda) || tag != "sampler") {
        throw ParseError(ParseFailure::malformed_header, line_no, line);
      }
      try {
        fam.params.epsilon = parse_rational(eps);
        fam.params.delta = parse_rational(delta);
        if (gamma != "-") fam.params.gamma = parse_rational(gamma);
        if (lambda != "-") fam.lambda = std::stod(lambda);
      } catch (const std::exception& e) {
        throw ParseError(ParseFailure::malformed_header, line_no, e.what());
      }
      header = true;
      continue;
    }
    std::vector<std::size_t> set;
    std::string tok;
    while (ls >> tok) {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size()) throw ParseError(ParseFailure::bad_token, line_no, tok);
      if (v >= fam.ground_size) throw ParseError(ParseFailure::literal_out_of_range, line_no, tok);
      set.push_back(static_cast<std::size_t>(v));
    }
    if (set.empty()) continue;
    if (!std::is_sorted(set.begin(), set.end())) {
      throw ParseError(ParseFailure::bad_token, line_no, "set indices must be sorted");
    }
    if (c != 0 && set.size() != c) throw ParseError(ParseFailure::bad_token, line_no, "set size differs from header");
    fam.sets.push_back(std::move(set));
  }
  if (!header) throw ParseError(ParseFailure::missing_header, line_no, "no 'sampler' line");
  fam.degree = c;
  fam.provenance = fam.lambda ? Provenance::expander : Provenance::explicit_list;
  return fam;
}

}  // namespace gapforge::sampler
