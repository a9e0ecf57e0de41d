#include "collarb/fixtures.hpp"

namespace collarb {

namespace {

RationalVector rv(std::initializer_list<const char*> values) {
  RationalVector out;
  for (const char* v : values) out.push_back(parse_rational(v));
  return out;
}

SampleSpace labelled_space(const std::vector<std::string>& labels) {
  SampleSpace s;
  s.outcomes = labels;
  s.reference_measure.assign(labels.size(), Rational(1, labels.size()));
  return s;
}

/// Path from per-atom values at each date.
AssetPath path_on(const Filtration& f, std::size_t n, const std::vector<RationalVector>& per_atom) {
  AssetPath path;
  for (std::size_t t = 0; t < per_atom.size(); ++t) {
    RandomVariable x(n);
    const auto& atoms = f.at(t);
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      for (const auto w : atoms[a]) x[w] = per_atom[t][a];
    }
    path.push_back(std::move(x));
  }
  return path;
}

Filtration one_period(std::size_t n) { return {{trivial_partition(n), point_partition(n)}}; }

}  // namespace

std::vector<std::string> fixture_names() { return {"fig1", "twin-complete", "ca-pair", "zero-market"}; }

ModelDocument make_fixture(const std::string& name) {
  if (name == "fig1") return fixture_fig1();
  if (name == "twin-complete") return fixture_twin_complete();
  if (name == "ca-pair") return fixture_ca_pair();
  if (name == "zero-market") return fixture_zero_market();
  throw InputError("unknown fixture '" + name + "'");
}

ExchangeSpace zero_sum_pairs(const Partition& partition, std::size_t n) {
  ExchangeSpace ex;
  ex.kind = ExchangeKind::vector_space;
  ex.zero_sum = true;
  ex.includes_deterministic = true;
  for (const auto& atom : partition) {
    auto up = indicator(atom, n);
    auto down = up;
    for (auto& v : down) v = -v;
    ex.basis.push_back({std::move(up), std::move(down)});
  }
  return ex;
}

ModelDocument fixture_fig1() {
  ModelDocument doc;
  doc.description =
      "Two-period, two-agent tree on eight outcomes with a common filtration (F1 atoms {w1,w2}, {w3,w4}, "
      "{w5,w6}, {w7,w8}), uniform subjective measures, truncated quadratic utilities (gamma = 1) and "
      "deterministic endowments -1. Exchanges: all F1-measurable zero-sum pairs, a 4-dimensional space "
      "(it is sometimes described as 3-dimensional; the set stored here is the one spanned by the four "
      "atom indicators).";
  const std::size_t n = 8;
  auto& m = doc.model;
  m.space = labelled_space({"w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8"});
  m.horizon = 2;
  const Partition f1 = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  const Filtration filt{{trivial_partition(n), f1, point_partition(n)}};

  AgentSpec a1;
  a1.name = "agent1";
  a1.measure = m.space.reference_measure;
  a1.filtration = filt;
  a1.assets.push_back(path_on(filt, n, {rv({"8"}), rv({"12", "4", "4", "4"}), rv({"24", "8", "6", "2", "5", "3", "6", "2"})}));
  a1.utility = UtilityFunction::truncated_quadratic(1);
  a1.endowment = constant_rv(-1, n);

  AgentSpec a2 = a1;
  a2.name = "agent2";
  a2.assets = {path_on(filt, n, {rv({"20"}), rv({"24", "16", "4", "20"}), rv({"16", "48", "20", "12", "6", "2", "24", "16"})})};

  m.agents = {a1, a2};
  auto ex = zero_sum_pairs(f1, n);
  ex.measurability = {f1, f1};
  ex.seed_hint = SeedHint{0, 1};
  doc.exchange = ex;
  return doc;
}

ModelDocument fixture_twin_complete() {
  ModelDocument doc;
  doc.description =
      "Both agents trade the same complete one-period binomial asset (1 -> 2 or 1/2) but hold different "
      "beliefs and risk aversions. Exchanges: all zero-sum pairs. No beneficial exchange exists.";
  const std::size_t n = 2;
  auto& m = doc.model;
  m.space = labelled_space({"u", "d"});
  m.horizon = 1;
  const auto filt = one_period(n);
  AgentSpec a1;
  a1.name = "agent1";
  a1.measure = rv({"1/2", "1/2"});
  a1.filtration = filt;
  a1.assets.push_back(path_on(filt, n, {rv({"1"}), rv({"2", "1/2"})}));
  a1.utility = UtilityFunction::exponential(1);
  a1.endowment = rv({"1", "0"});
  AgentSpec a2 = a1;
  a2.name = "agent2";
  a2.measure = rv({"1/4", "3/4"});
  a2.utility = UtilityFunction::exponential(2);
  a2.endowment = rv({"0", "0"});
  m.agents = {a1, a2};
  doc.exchange = zero_sum_pairs(point_partition(n), n);
  return doc;
}

ModelDocument fixture_ca_pair() {
  ModelDocument doc;
  doc.description =
      "Two one-period binomial markets on the same two outcomes whose risk-neutral probabilities differ "
      "(1/3 versus 2/3). Each market is arbitrage-free alone; together with zero-sum exchanges they admit "
      "a collective arbitrage.";
  const std::size_t n = 2;
  auto& m = doc.model;
  m.space = labelled_space({"u", "d"});
  m.horizon = 1;
  const auto filt = one_period(n);
  AgentSpec a1;
  a1.name = "agent1";
  a1.measure = rv({"1/2", "1/2"});
  a1.filtration = filt;
  a1.assets.push_back(path_on(filt, n, {rv({"1"}), rv({"2", "1/2"})}));
  a1.utility = UtilityFunction::exponential(1);
  a1.endowment = rv({"0", "0"});
  AgentSpec a2 = a1;
  a2.name = "agent2";
  a2.assets = {path_on(filt, n, {rv({"1"}), rv({"3/2", "0"})})};
  m.agents = {a1, a2};
  doc.exchange = zero_sum_pairs(point_partition(n), n);
  return doc;
}

ModelDocument fixture_zero_market() {
  ModelDocument doc;
  doc.description =
      "No traded assets; two agents with different beliefs on three outcomes, exponential utilities and "
      "zero endowments. Exchanges: all zero-sum pairs.";
  const std::size_t n = 3;
  auto& m = doc.model;
  m.space = labelled_space({"w1", "w2", "w3"});
  m.horizon = 1;
  AgentSpec a1;
  a1.name = "agent1";
  a1.measure = rv({"1/2", "1/4", "1/4"});
  a1.filtration = one_period(n);
  a1.utility = UtilityFunction::exponential(1);
  a1.endowment = rv({"0", "0", "0"});
  AgentSpec a2 = a1;
  a2.name = "agent2";
  a2.measure = rv({"1/4", "1/4", "1/2"});
  a2.utility = UtilityFunction::exponential(parse_rational("1/2"));
  m.agents = {a1, a2};
  doc.exchange = zero_sum_pairs(point_partition(n), n);
  return doc;
}

}  // namespace collarb
