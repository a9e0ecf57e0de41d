#include "collarb/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "collarb/arbitrage.hpp"
#include "collarb/fixtures.hpp"

namespace collarb {

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::generic: return "generic";
    case ModelFamily::deterministic_only: return "deterministic_only";
    case ModelFamily::twin_complete: return "twin_complete";
    case ModelFamily::identical_beliefs: return "identical_beliefs";
    case ModelFamily::arbitrage_free: return "arbitrage_free";
  }
  return "";
}

namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

RationalVector random_probability(Rng& rng, std::size_t n) {
  RationalVector p(n);
  long total = 0;
  std::vector<long> w(n);
  for (auto& x : w) total += (x = uniform_int(rng, 1, 9));
  for (std::size_t k = 0; k < n; ++k) p[k] = Rational(w[k], total);
  for (auto& x : p) x.canonicalize();
  return p;
}

Partition random_coarsening(Rng& rng, std::size_t n) {
  const std::size_t blocks = uniform(rng, 1, n);
  std::vector<std::size_t> label(n);
  for (auto& l : label) l = uniform(rng, 0, blocks - 1);
  Partition p;
  for (std::size_t b = 0; b < blocks; ++b) {
    Atom atom;
    for (std::size_t w = 0; w < n; ++w) {
      if (label[w] == b) atom.push_back(w);
    }
    if (!atom.empty()) p.push_back(std::move(atom));
  }
  return p;
}

Filtration random_filtration(Rng& rng, std::size_t n, std::size_t horizon) {
  Filtration f;
  f.partitions.push_back(trivial_partition(n));
  for (std::size_t t = 1; t < horizon; ++t) {
    // Refine the previous partition by splitting each atom at random.
    Partition next;
    for (const auto& atom : f.partitions.back()) {
      const std::size_t k = uniform(rng, 1, atom.size());
      std::vector<Atom> parts(k);
      for (std::size_t j = 0; j < atom.size(); ++j) parts[j < k ? j : uniform(rng, 0, k - 1)].push_back(atom[j]);
      for (auto& part : parts) {
        std::sort(part.begin(), part.end());
        next.push_back(std::move(part));
      }
    }
    std::sort(next.begin(), next.end());
    f.partitions.push_back(std::move(next));
  }
  f.partitions.push_back(point_partition(n));
  return f;
}

/// Martingale under q by construction; optionally nudged off it on one atom.
/// `distinct` redraws until sibling values differ, which keeps binomial trees complete.
AssetPath random_asset(Rng& rng, const Filtration& f, const RationalVector& q, bool perturb, bool distinct = false) {
  const std::size_t n = q.size();
  AssetPath path;
  path.push_back(constant_rv(uniform_int(rng, 5, 20), n));
  for (std::size_t t = 1; t < f.partitions.size(); ++t) {
    RandomVariable s(n);
    const auto& fine = f.at(t);
    const auto fine_of = atom_lookup(fine, n);
    for (const auto& atom : f.at(t - 1)) {
      std::vector<std::size_t> children;
      for (const auto w : atom) {
        if (std::find(children.begin(), children.end(), fine_of[w]) == children.end()) children.push_back(fine_of[w]);
      }
      Rational mass = 0, weighted = 0;
      std::vector<Rational> value(children.size());
      for (std::size_t c = 0; c < children.size(); ++c) {
        do {
          value[c] = uniform_int(rng, 1, 24);
        } while (distinct && std::find(value.begin(), value.begin() + static_cast<std::ptrdiff_t>(c), value[c]) !=
                                 value.begin() + static_cast<std::ptrdiff_t>(c));
        Rational m = 0;
        for (const auto w : fine[children[c]]) m += q[w];
        mass += m;
        weighted += m * value[c];
      }
      const Rational shift = path.back()[atom.front()] - weighted / mass;
      for (std::size_t c = 0; c < children.size(); ++c) {
        for (const auto w : fine[children[c]]) s[w] = value[c] + shift;
      }
    }
    path.push_back(std::move(s));
  }
  if (perturb && path.size() > 1) {
    const std::size_t t = uniform(rng, 1, path.size() - 1);
    const auto& atoms = f.at(t - 1);
    const auto& atom = atoms[uniform(rng, 0, atoms.size() - 1)];
    const long delta = uniform_int(rng, 1, 3) * (uniform(rng, 0, 1) ? 1 : -1);
    for (const auto w : atom) path[t][w] += delta;
  }
  return path;
}

UtilityFunction random_utility(Rng& rng, RandomVariable& endowment) {
  const std::size_t n = endowment.size();
  const Rational gammas[] = {Rational(1, 2), Rational(1), Rational(2)};
  switch (uniform(rng, 0, 3)) {
    case 0:
      for (auto& x : endowment) x = uniform_int(rng, -2, 2);
      return UtilityFunction::exponential(gammas[uniform(rng, 0, 2)]);
    case 1:
      // Negative wealth keeps the indirect utility below u(+∞) = 0.
      for (auto& x : endowment) x = uniform_int(rng, -4, -1);
      return UtilityFunction::truncated_quadratic(gammas[uniform(rng, 0, 2)]);
    case 2:
      for (auto& x : endowment) x = uniform_int(rng, -2, 2);
      return UtilityFunction::logarithmic(Rational(uniform_int(rng, 4, 8)));
    default:
      for (auto& x : endowment) x = uniform_int(rng, -2, 2);
      (void)n;
      return UtilityFunction::power(Rational(1, 2), Rational(uniform_int(rng, 4, 8)));
  }
}

/// Zero-sum transfers of 1_a between agent j and the last agent, a ∈ partition.
ExchangeSpace pair_exchange(const Partition& partition, std::size_t agents, std::size_t n) {
  ExchangeSpace ex;
  ex.kind = ExchangeKind::vector_space;
  for (const auto& atom : partition) {
    for (std::size_t j = 0; j + 1 < agents; ++j) {
      ExchangeVector y(agents, RandomVariable(n, Rational(0)));
      y[j] = indicator(atom, n);
      for (const auto w : atom) y[agents - 1][w] = -1;
      ex.basis.push_back(std::move(y));
    }
  }
  ex.measurability.assign(agents, partition);
  return ex;
}

ExchangeSpace deterministic_exchange_space(std::size_t agents, std::size_t n) {
  ExchangeSpace ex;
  for (std::size_t j = 0; j + 1 < agents; ++j) ex.basis.push_back(deterministic_exchange(j, agents, n));
  return ex;
}

ExchangeSpace random_cone(Rng& rng, std::size_t agents, std::size_t n) {
  ExchangeSpace ex;
  ex.kind = ExchangeKind::convex_cone;
  const std::size_t gens = uniform(rng, 1, 3);
  for (std::size_t g = 0; g < gens; ++g) {
    ExchangeVector y(agents, RandomVariable(n, Rational(0)));
    for (std::size_t w = 0; w < n; ++w) {
      Rational total = 0;
      for (std::size_t i = 0; i + 1 < agents; ++i) {
        y[i][w] = uniform_int(rng, -3, 3);
        total += y[i][w];
      }
      y[agents - 1][w] = -total;
    }
    ex.basis.push_back(std::move(y));
  }
  for (std::size_t j = 0; j + 1 < agents; ++j) {
    auto d = deterministic_exchange(j, agents, n);
    ex.basis.push_back(d);
    for (auto& leg : d) {
      for (auto& v : leg) v = -v;
    }
    ex.basis.push_back(std::move(d));
  }
  return ex;
}

ModelDocument twin_complete_model(Rng& rng, const RandomModelOptions& opts) {
  const std::size_t agents = std::max<std::size_t>(2, uniform(rng, 2, std::max<std::size_t>(2, opts.max_agents)));
  const std::size_t horizon = opts.max_horizon >= 2 && opts.max_outcomes >= 4 ? uniform(rng, 1, 2) : 1;
  const std::size_t n = horizon == 1 ? 2 : 4;
  ModelDocument doc;
  auto& m = doc.model;
  for (std::size_t w = 0; w < n; ++w) m.space.outcomes.push_back("w" + std::to_string(w + 1));
  m.space.reference_measure.assign(n, Rational(1, static_cast<long>(n)));
  m.horizon = horizon;
  Filtration f;
  f.partitions.push_back(trivial_partition(n));
  if (horizon == 2) f.partitions.push_back({{0, 1}, {2, 3}});
  f.partitions.push_back(point_partition(n));
  // Binomial: each atom splits in two with a random up/down pair around the parent.
  const auto q = random_probability(rng, n);
  auto asset = random_asset(rng, f, q, false, true);
  for (std::size_t i = 0; i < agents; ++i) {
    AgentSpec a;
    a.name = "agent" + std::to_string(i + 1);
    a.measure = random_probability(rng, n);
    a.filtration = f;
    a.assets = {asset};
    a.endowment = RandomVariable(n);
    a.utility = random_utility(rng, a.endowment);
    m.agents.push_back(std::move(a));
  }
  doc.exchange = pair_exchange(point_partition(n), agents, n);
  return doc;
}

}  // namespace

ModelDocument random_model(std::uint64_t seed, const RandomModelOptions& opts) {
  Rng rng(seed);
  if (opts.family == ModelFamily::twin_complete) return twin_complete_model(rng, opts);

  const std::size_t n = uniform(rng, 2, std::max<std::size_t>(2, opts.max_outcomes));
  const std::size_t horizon = uniform(rng, 1, std::max<std::size_t>(1, opts.max_horizon));
  const std::size_t lo_agents = opts.family == ModelFamily::identical_beliefs ? 2 : 1;
  const std::size_t agents = uniform(rng, lo_agents, std::max(lo_agents, opts.max_agents));
  ModelDocument doc;
  auto& m = doc.model;
  for (std::size_t w = 0; w < n; ++w) m.space.outcomes.push_back("w" + std::to_string(w + 1));
  m.space.reference_measure = random_probability(rng, n);
  m.horizon = horizon;
  const auto common_p = random_probability(rng, n);
  for (std::size_t i = 0; i < agents; ++i) {
    AgentSpec a;
    a.name = "agent" + std::to_string(i + 1);
    a.filtration = random_filtration(rng, n, horizon);
    a.endowment = RandomVariable(n);
    a.utility = random_utility(rng, a.endowment);
    if (opts.family == ModelFamily::identical_beliefs) {
      a.measure = common_p;
      const Rational c = a.endowment.front();
      a.endowment.assign(n, c);
    } else {
      a.measure = random_probability(rng, n);
      const auto q = random_probability(rng, n);
      const std::size_t d = uniform(rng, 0, 2);
      const bool perturb = opts.family == ModelFamily::generic && uniform(rng, 0, 2) == 0;
      for (std::size_t k = 0; k < d; ++k) a.assets.push_back(random_asset(rng, a.filtration, q, perturb && k == 0));
    }
    m.agents.push_back(std::move(a));
  }
  switch (opts.family) {
    case ModelFamily::deterministic_only: doc.exchange = deterministic_exchange_space(agents, n); break;
    case ModelFamily::identical_beliefs: doc.exchange = pair_exchange(random_coarsening(rng, n), agents, n); break;
    default:
      doc.exchange = uniform(rng, 0, 3) == 0 ? random_cone(rng, agents, n)
                                             : pair_exchange(random_coarsening(rng, n), agents, n);
  }
  return doc;
}

namespace {

FtapRecord ftap_one(std::uint64_t seed, const RandomModelOptions& opts) {
  FtapRecord rec;
  rec.seed = seed;
  try {
    const auto doc = random_model(seed, opts);
    const auto& m = doc.model;
    rec.agents = m.num_agents();
    for (std::size_t i = 0; i < m.num_agents(); ++i) {
      if (check_FTAP(m, i).no_arbitrage) ++rec.arbitrage_free_agents;
    }
    rec.collective_no_arbitrage = check_collective_FTAP(m, *doc.exchange).no_arbitrage;
    rec.agree = true;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::vector<double> leg_of(const RandomVariable& y, double scale) {
  std::vector<double> out(y.size());
  for (std::size_t w = 0; w < y.size(); ++w) out[w] = scale * y[w].get_d();
  return out;
}

TheoremRecord theorem_one(std::uint64_t seed, const RandomModelOptions& opts, const SearchOptions& search) {
  TheoremRecord rec;
  rec.seed = seed;
  rec.family = opts.family;
  try {
    const auto doc = random_model(seed, opts);
    const auto& m = doc.model;
    const auto& ex = *doc.exchange;
    for (std::size_t i = 0; i < m.num_agents(); ++i) {
      if (!check_NA(m, i).holds) {
        rec.skipped = true;
        return rec;
      }
    }
    BeneficialOutcome out;
    try {
      out = beneficial_pipeline(m, ex);
    } catch (const UnboundedUtility&) {
      rec.skipped = true;
      return rec;
    }
    for (const auto& s : out.minimax) rec.max_gap = std::max(rec.max_gap, s.gap);
    rec.violated = out.polarity.violated();
    rec.certificate = out.certificate.has_value();
    if (out.certificate) {
      rec.certificate_verified = out.certificate->strict && verify_certificate(m, ex, *out.certificate);
    } else {
      Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      rec.search_found_improvement = random_improvement_found(m, ex, rng, search);
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

template <class Record, class F>
std::vector<Record> run_parallel(const std::vector<std::uint64_t>& seeds, F&& one) {
  std::vector<Record> out(seeds.size());
  const auto count = static_cast<long>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = one(seeds[static_cast<std::size_t>(k)]);
  return out;
}

template <class Record, class F>
std::vector<Record> run_serial(const std::vector<std::uint64_t>& seeds, F&& one) {
  std::vector<Record> out;
  out.reserve(seeds.size());
  for (const auto s : seeds) out.push_back(one(s));
  return out;
}

}  // namespace

bool random_improvement_found(const MarketModel& model, const ExchangeSpace& exchange, std::mt19937_64& rng,
                              const SearchOptions& opts) {
  const std::size_t agents = model.num_agents();
  const std::size_t n = model.num_outcomes();
  const std::size_t dim = exchange.basis.size();
  if (dim == 0) return false;
  std::vector<double> base(agents);
  for (std::size_t i = 0; i < agents; ++i) base[i] = indirect_utility(model, i).value;
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_scale(std::log(1e-3), 0.0);
  for (int s = 0; s < opts.samples; ++s) {
    std::vector<double> c(dim);
    double norm = 0;
    for (auto& v : c) {
      v = normal(rng);
      if (exchange.kind == ExchangeKind::convex_cone) v = std::abs(v);
      norm += v * v;
    }
    const double scale = std::exp(log_scale(rng)) / std::sqrt(norm);
    bool all = true;
    for (std::size_t i = 0; i < agents && all; ++i) {
      std::vector<double> leg(n, 0.0);
      for (std::size_t l = 0; l < dim; ++l) {
        const auto part = leg_of(exchange.basis[l][i], c[l] * scale);
        for (std::size_t w = 0; w < n; ++w) leg[w] += part[w];
      }
      try {
        all = indirect_utility(model, i, leg).value > base[i] + opts.threshold;
      } catch (const InputError&) {
        all = false;
      }
    }
    if (all) return true;
  }
  return false;
}

std::vector<FtapRecord> ftap_sweep(const std::vector<std::uint64_t>& seeds, const RandomModelOptions& opts) {
  return run_parallel<FtapRecord>(seeds, [&](std::uint64_t s) { return ftap_one(s, opts); });
}

std::vector<FtapRecord> ftap_sweep_serial(const std::vector<std::uint64_t>& seeds, const RandomModelOptions& opts) {
  return run_serial<FtapRecord>(seeds, [&](std::uint64_t s) { return ftap_one(s, opts); });
}

std::vector<TheoremRecord> theorem_sweep(const std::vector<std::uint64_t>& seeds, const RandomModelOptions& opts,
                                         const SearchOptions& search) {
  return run_parallel<TheoremRecord>(seeds, [&](std::uint64_t s) { return theorem_one(s, opts, search); });
}

std::vector<TheoremRecord> theorem_sweep_serial(const std::vector<std::uint64_t>& seeds, const RandomModelOptions& opts,
                                                const SearchOptions& search) {
  return run_serial<TheoremRecord>(seeds, [&](std::uint64_t s) { return theorem_one(s, opts, search); });
}

}  // namespace collarb
