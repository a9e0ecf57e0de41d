#include "collarb/report.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "collarb/arbitrage.hpp"

namespace collarb {

Json float_json(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json float_array(std::span<const double> v) {
  Json out = Json::array();
  for (const double x : v) out.push_back(float_json(x));
  return out;
}

namespace {

Json rv_array(const std::vector<RandomVariable>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rational_array(x));
  return out;
}

Json witness_json(const ArbitrageWitness& w) {
  Json j;
  Json agents = Json::array();
  for (const auto a : w.agents) agents.push_back(a + 1);
  j["agents"] = std::move(agents);
  j["strategy_coefficients"] = rv_array(w.strategy_coefficients);
  j["payoffs"] = rv_array(w.payoffs);
  if (!w.exchange_coefficients.empty()) j["exchange_coefficients"] = rational_array(w.exchange_coefficients);
  j["exchange"] = rv_array(w.exchange);
  j["totals"] = rv_array(w.totals);
  return j;
}

Json measure_json(const MinimaxSolution& s) {
  if (s.exact_measure) return rational_array(*s.exact_measure);
  return float_array(s.measure);
}

Report invalid_report(const std::string& verb, const ValidationReport& v) {
  Report r{verb, "invalid", Json::object(), 0};
  Json list = Json::array();
  for (const auto& x : v.violations) list.push_back(Json{{"code", x.code}, {"message", x.message}});
  r.payload["violations"] = std::move(list);
  return r;
}

const ExchangeSpace& require_exchange(const ModelDocument& doc) {
  if (!doc.exchange) throw InputError("model file has no exchange_space");
  return *doc.exchange;
}

}  // namespace

Report report_validate(const ModelDocument& doc) {
  const auto v = validate_model(doc.model, doc.exchange ? &*doc.exchange : nullptr);
  if (!v.ok()) return invalid_report("validate", v);
  Report r{"validate", "valid", Json::object(), 0};
  r.payload["outcomes"] = doc.model.num_outcomes();
  r.payload["agents"] = doc.model.num_agents();
  r.payload["horizon"] = doc.model.horizon;
  if (doc.exchange) r.payload["exchange_dimension"] = doc.exchange->basis.size();
  r.payload["violations"] = Json::array();
  return r;
}

Report report_arbitrage(const ModelDocument& doc) {
  const auto v = validate_model(doc.model, doc.exchange ? &*doc.exchange : nullptr);
  if (!v.ok()) return invalid_report("arbitrage", v);
  const auto& m = doc.model;
  Report r{"arbitrage", "ok", Json::object(), 0};
  Json agents = Json::array();
  for (std::size_t i = 0; i < m.num_agents(); ++i) {
    const auto f = check_FTAP(m, i);
    Json a;
    a["agent"] = i + 1;
    a["name"] = m.agents[i].name;
    a["payoff_dimension"] = payoff_space(m, i).dimension();
    a["no_arbitrage"] = f.no_arbitrage;
    a["equivalent_martingale_measure"] = f.equivalent_measure;
    if (f.measure) a["measure"] = rational_array(*f.measure);
    if (f.witness) a["witness"] = witness_json(*f.witness);
    if (f.no_arbitrage) a["complete"] = check_completeness(m, i);
    agents.push_back(std::move(a));
  }
  r.payload["agents"] = std::move(agents);
  const auto common = interior_point_exists(common_martingale_polytope(m).set);
  const auto* common_yes = std::get_if<InteriorPointYes>(&common);
  r.payload["common_equivalent_measure"] = common_yes != nullptr;
  if (doc.exchange) {
    const auto& ex = *doc.exchange;
    Json c;
    if (contains_deterministic(ex, m.num_agents(), m.num_outcomes())) {
      const auto f = check_collective_FTAP(m, ex);
      c["no_collective_arbitrage"] = f.no_arbitrage;
      c["equivalent_collective_measure"] = f.equivalent_measure;
      if (f.measure) c["measure"] = rational_array(*f.measure);
      if (f.witness) c["witness"] = witness_json(*f.witness);
    } else {
      const auto nca = check_NCA(m, ex);
      c["no_collective_arbitrage"] = nca.holds;
      if (nca.witness) c["witness"] = witness_json(*nca.witness);
    }
    r.payload["collective"] = std::move(c);
  }
  return r;
}

Report report_measures(const ModelDocument& doc, const VertexOptions& vopts) {
  const auto v = validate_model(doc.model, doc.exchange ? &*doc.exchange : nullptr);
  if (!v.ok()) return invalid_report("measures", v);
  const auto& m = doc.model;
  Report r{"measures", "ok", Json::object(), 0};
  auto polytope_json = [&](const MeasurePolytope& poly, const Partition* coarse) {
    Json j;
    j["set"] = poly.description();
    const auto ip = interior_point_exists(poly.set);
    if (const auto* yes = std::get_if<InteriorPointYes>(&ip)) {
      j["interior_point"] = rational_array(yes->point);
    } else {
      j["interior_point"] = nullptr;
    }
    try {
      const auto verts = vertex_enumerate(poly.set, vopts);
      Json vs = Json::array();
      Json restricted = Json::array();
      for (const auto& vert : verts) {
        vs.push_back(rational_array(vert));
        if (coarse != nullptr) {
          Json blocks = Json::array();
          for (std::size_t b = 0; b < poly.num_blocks; ++b) {
            const auto q = poly.block(vert, b);
            blocks.push_back(rational_array(restrict_measure<Rational>(q, *coarse)));
          }
          restricted.push_back(poly.num_blocks == 1 ? blocks[0] : blocks);
        }
      }
      j["vertices"] = std::move(vs);
      if (coarse != nullptr) j["vertex_restrictions_time1"] = std::move(restricted);
    } catch (const InputError& e) {
      j["vertices"] = e.what();
    }
    return j;
  };
  Json agents = Json::array();
  for (std::size_t i = 0; i < m.num_agents(); ++i) {
    const auto& f = m.agents[i].filtration;
    const Partition* coarse = f.partitions.size() > 2 ? &f.at(1) : nullptr;
    Json a = polytope_json(martingale_polytope(m, i), coarse);
    a["agent"] = i + 1;
    agents.push_back(std::move(a));
  }
  r.payload["agents"] = std::move(agents);
  if (doc.exchange) {
    const auto& f = m.agents.front().filtration;
    const Partition* coarse = f.partitions.size() > 2 ? &f.at(1) : nullptr;
    r.payload["collective"] = polytope_json(collective_martingale_polytope(m, *doc.exchange), coarse);
  }
  return r;
}

Report report_minimax(const ModelDocument& doc, const MinimaxOptions& opts) {
  const auto v = validate_model(doc.model, doc.exchange ? &*doc.exchange : nullptr);
  if (!v.ok()) return invalid_report("minimax", v);
  Report r{"minimax", "ok", Json::object(), 0};
  Json agents = Json::array();
  for (std::size_t i = 0; i < doc.model.num_agents(); ++i) {
    Json a;
    a["agent"] = i + 1;
    try {
      const auto s = solve_minimax(doc.model, i, opts);
      a["lambda"] = float_json(s.lambda);
      a["measure"] = measure_json(s);
      a["exact"] = s.exact_measure.has_value();
      const auto& coarse = doc.model.agents[i].filtration;
      if (s.exact_measure && coarse.partitions.size() > 2) {
        a["restriction_time1"] = rational_array(restrict_measure<Rational>(*s.exact_measure, coarse.at(1)));
      }
      a["equivalent"] = s.equivalent;
      a["boundary"] = s.boundary;
      a["dual_value"] = float_json(s.dual_value);
      a["primal_value"] = float_json(s.primal_value);
      a["duality_gap"] = float_json(s.gap);
      a["kkt_residual"] = float_json(s.kkt_residual);
    } catch (const UnboundedUtility& e) {
      a["status"] = "unbounded_utility";
      a["message"] = e.what();
      r.status = "unbounded_utility";
    }
    agents.push_back(std::move(a));
  }
  r.payload["agents"] = std::move(agents);
  return r;
}

Report report_beneficial(const ModelDocument& doc, const PolarityOptions& opts) {
  const auto v = validate_model(doc.model, doc.exchange ? &*doc.exchange : nullptr);
  if (!v.ok()) return invalid_report("beneficial", v);
  const auto& ex = require_exchange(doc);
  const auto out = beneficial_pipeline(doc.model, ex, opts);
  Report r{"beneficial", out.certificate ? "certificate" : "absent", Json::object(), 0};
  Json mm = Json::array();
  for (const auto& s : out.minimax) {
    mm.push_back(Json{{"agent", s.agent + 1}, {"lambda", float_json(s.lambda)}, {"measure", measure_json(s)}});
  }
  r.payload["minimax"] = std::move(mm);
  Json pol;
  pol["values"] = out.polarity.exact_values ? rational_array(*out.polarity.exact_values) : float_array(out.polarity.values);
  pol["max_violation"] = float_json(out.polarity.max_violation);
  pol["violated"] = out.polarity.violated();
  r.payload["polarity"] = std::move(pol);
  if (!out.certificate) {
    r.payload["reason"] = "the minimax vector prices every allowed exchange at most zero";
    return r;
  }
  const auto& c = *out.certificate;
  Json cj;
  cj["seed_index"] = c.seed_index + 1;
  cj["seed_sign"] = c.seed_sign;
  cj["seed"] = rv_array(c.y);
  cj["y_hat"] = rv_array(c.candidate.y_hat);
  cj["shifts"] = rational_array(c.candidate.shifts);
  if (c.candidate.exact_common_value) {
    cj["expectations"] = Json::array();
    for (std::size_t i = 0; i < c.candidate.y_hat.size(); ++i) cj["expectations"].push_back(rational_json(*c.candidate.exact_common_value));
  } else {
    cj["expectations"] = float_array(c.candidate.expectations);
  }
  char alpha[40];
  std::snprintf(alpha, sizeof alpha, "%.12e", c.alpha);
  cj["alpha"] = alpha;
  Json table = Json::array();
  for (std::size_t i = 0; i < c.before.size(); ++i) {
    table.push_back(Json{{"agent", i + 1},
                         {"before", float_json(c.before[i])},
                         {"after", float_json(c.after[i])},
                         {"gain", float_json(c.after[i] - c.before[i])},
                         {"derivative", float_json(c.derivatives[i])}});
  }
  cj["utilities"] = std::move(table);
  cj["strict"] = c.strict;
  r.payload["certificate"] = std::move(cj);
  return r;
}

Report report_cara(const CaraQuery& q) {
  check_spec(q.spec);
  Report r{"cara-region", "ok", Json::object(), 0};
  const double root = alpha_star(q.spec);
  r.payload["q1"] = float_json(q.spec.q1);
  r.payload["q2"] = float_json(q.spec.q2);
  r.payload["gamma1"] = float_json(q.spec.gamma1);
  r.payload["gamma2"] = float_json(q.spec.gamma2);
  r.payload["alpha_star"] = float_json(root);
  r.payload["residual"] = float_json(curve_U(q.spec, root) - curve_L(q.spec, root));
  Json table = Json::array();
  for (int k = 1; k <= q.boundary_samples; ++k) {
    const double a = root * k / (q.boundary_samples + 1);
    table.push_back(Json{{"alpha", float_json(a)}, {"L", float_json(curve_L(q.spec, a))}, {"U", float_json(curve_U(q.spec, a))}});
  }
  r.payload["boundary"] = std::move(table);
  if (q.random_points > 0) {
    std::mt19937_64 rng(q.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int satisfied = 0;
    for (int k = 0; k < q.random_points; ++k) {
      const double a = root * (0.001 + 0.998 * unit(rng));
      const double lo = curve_L(q.spec, a), hi = curve_U(q.spec, a);
      const double b = lo + (hi - lo) * (0.001 + 0.998 * unit(rng));
      const auto mem = region_membership(q.spec, a, b);
      if (mem.member && mem.expectation1 < 1 && mem.expectation2 < 1) ++satisfied;
    }
    r.payload["sampled_points"] = Json{{"count", q.random_points}, {"satisfied", satisfied}};
  }
  if (q.point) {
    const auto [a, b] = *q.point;
    const auto mem = region_membership(q.spec, a, b);
    Json p{{"alpha", float_json(a)}, {"beta", float_json(b)}, {"member", mem.member},
           {"expectation1", float_json(mem.expectation1)}, {"expectation2", float_json(mem.expectation2)}};
    if (mem.member) {
      const auto legs = emit_exchange(q.spec, a, b);
      p["exchange"] = Json{{"agent1", {float_json(legs.first.first), float_json(legs.first.second)}},
                           {"agent2", {float_json(legs.second.first), float_json(legs.second.second)}}};
    }
    r.payload["point"] = std::move(p);
  }
  return r;
}

std::string render_structured(const Report& report) {
  Json j;
  j["verb"] = report.verb;
  j["status"] = report.status;
  j["payload"] = report.payload;
  j["timing_seconds"] = float_json(report.seconds);
  return j.dump() + "\n";
}

namespace {

bool is_flat(const Json& j) {
  if (!j.is_array()) return !j.is_object();
  for (const auto& e : j) {
    if (e.is_object() || (e.is_array() && !is_flat(e))) return false;
  }
  return true;
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s = "(";
    for (std::size_t k = 0; k < j.size(); ++k) s += (k ? ", " : "") + scalar_text(j[k]);
    return s + ")";
  }
  return j.dump();
}

void render(std::ostringstream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (is_flat(value)) {
        out << pad << key << ": " << scalar_text(value) << "\n";
      } else {
        out << pad << key << ":\n";
        render(out, value, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (is_flat(j[k])) {
        out << pad << "- " << scalar_text(j[k]) << "\n";
      } else {
        out << pad << "[" << k + 1 << "]\n";
        render(out, j[k], indent + 2);
      }
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

}  // namespace

std::string render_table(const Report& report) {
  std::ostringstream out;
  out << report.verb << ": " << report.status << "\n";
  render(out, report.payload, 2);
  char buf[64];
  std::snprintf(buf, sizeof buf, "  (%.3f s)\n", report.seconds);
  out << buf;
  return out.str();
}

}  // namespace collarb
