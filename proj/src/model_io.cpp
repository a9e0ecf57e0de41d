#include "collarb/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace collarb {

namespace {

Rational read_rational(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InputError(where + ": expected a rational (\"p/q\" string or integer)");
}

RationalVector read_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  RationalVector out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(read_rational(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing key '" + key + "'");
  return j.at(key);
}

class Labels {
 public:
  explicit Labels(const std::vector<std::string>& outcomes) : outcomes_(outcomes) {
    for (std::size_t w = 0; w < outcomes.size(); ++w) {
      if (!index_.emplace(outcomes[w], w).second) throw InputError("outcomes: duplicate label '" + outcomes[w] + "'");
    }
  }

  Partition partition(const Json& j, const std::string& where) const {
    if (!j.is_array()) throw InputError(where + ": expected a list of atoms");
    Partition p;
    for (const auto& atom_json : j) {
      if (!atom_json.is_array()) throw InputError(where + ": an atom must be a list of outcome labels");
      Atom atom;
      for (const auto& label : atom_json) {
        const auto it = index_.find(label.get<std::string>());
        if (it == index_.end()) throw InputError(where + ": unknown outcome '" + label.get<std::string>() + "'");
        atom.push_back(it->second);
      }
      std::sort(atom.begin(), atom.end());
      p.push_back(std::move(atom));
    }
    return p;
  }

  Json partition_json(const Partition& p) const {
    Json out = Json::array();
    for (const auto& atom : p) {
      Json a = Json::array();
      for (const auto w : atom) a.push_back(outcomes_.at(w));
      out.push_back(std::move(a));
    }
    return out;
  }

 private:
  const std::vector<std::string>& outcomes_;
  std::map<std::string, std::size_t> index_;
};

/// Asset values at one date: one entry per atom, or one per outcome.
RandomVariable read_asset_date(const Json& j, const Partition& atoms, std::size_t n, const std::string& where) {
  const auto values = read_vector(j, where);
  if (values.size() == atoms.size()) {
    RandomVariable x(n, Rational(0));
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      for (const auto w : atoms[a]) {
        if (w < n) x[w] = values[a];
      }
    }
    return x;
  }
  if (values.size() == n) return values;
  throw InputError(where + ": expected one value per atom or per outcome");
}

UtilityFunction read_utility(const Json& j, const std::string& where) {
  const auto kind = parse_utility_kind(require(j, "kind", where).get<std::string>());
  switch (kind) {
    case UtilityKind::exponential: return UtilityFunction::exponential(read_rational(require(j, "gamma", where), where));
    case UtilityKind::truncated_quadratic:
      return UtilityFunction::truncated_quadratic(read_rational(require(j, "gamma", where), where));
    case UtilityKind::logarithmic: return UtilityFunction::logarithmic(read_rational(require(j, "shift", where), where));
    case UtilityKind::power:
      return UtilityFunction::power(read_rational(require(j, "exponent", where), where),
                                    read_rational(require(j, "shift", where), where));
  }
  throw InputError(where + ": unknown utility");
}

Json utility_json(const UtilityFunction& u) {
  Json j;
  j["kind"] = to_string(u.kind());
  switch (u.kind()) {
    case UtilityKind::exponential:
    case UtilityKind::truncated_quadratic: j["gamma"] = rational_json(u.gamma()); break;
    case UtilityKind::logarithmic: j["shift"] = rational_json(u.shift()); break;
    case UtilityKind::power:
      j["exponent"] = rational_json(u.exponent());
      j["shift"] = rational_json(u.shift());
      break;
  }
  return j;
}

ExchangeKind parse_exchange_kind(const std::string& s) {
  if (s == "vector_space") return ExchangeKind::vector_space;
  if (s == "convex_cone") return ExchangeKind::convex_cone;
  throw InputError("exchange_space.kind: expected vector_space or convex_cone, got '" + s + "'");
}

}  // namespace

Json rational_json(const Rational& r) { return to_string(r); }

Json rational_array(std::span<const Rational> v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(rational_json(r));
  return out;
}

ModelDocument parse_model(const Json& doc) {
  if (!doc.is_object()) throw InputError("model file: top level must be an object");
  ModelDocument out;
  if (doc.contains("description")) out.description = doc.at("description").get<std::string>();
  auto& model = out.model;
  try {
    for (const auto& label : require(doc, "outcomes", "model")) model.space.outcomes.push_back(label.get<std::string>());
    model.space.reference_measure = read_vector(require(doc, "reference_measure", "model"), "reference_measure");
    model.horizon = require(doc, "horizon", "model").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model file: ") + e.what());
  }
  const std::size_t n = model.space.size();
  const Labels labels(model.space.outcomes);

  const auto& agents = require(doc, "agents", "model");
  if (!agents.is_array()) throw InputError("agents: expected an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& aj = agents[i];
    const std::string where = "agents[" + std::to_string(i) + "]";
    AgentSpec agent;
    try {
      if (aj.contains("name")) agent.name = aj.at("name").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    agent.measure = read_vector(require(aj, "measure", where), where + ".measure");
    const auto& fj = require(aj, "filtration", where);
    if (!fj.is_array()) throw InputError(where + ".filtration: expected a list of partitions");
    for (std::size_t t = 0; t < fj.size(); ++t) {
      agent.filtration.partitions.push_back(labels.partition(fj[t], where + ".filtration[" + std::to_string(t) + "]"));
    }
    const auto& assets = require(aj, "assets", where);
    if (!assets.is_array()) throw InputError(where + ".assets: expected an array");
    for (std::size_t k = 0; k < assets.size(); ++k) {
      const std::string aw = where + ".assets[" + std::to_string(k) + "]";
      if (!assets[k].is_array() || assets[k].size() != agent.filtration.partitions.size()) {
        throw InputError(aw + ": expected one entry per date of the filtration");
      }
      AssetPath path;
      for (std::size_t t = 0; t < assets[k].size(); ++t) {
        path.push_back(read_asset_date(assets[k][t], agent.filtration.partitions[t], n, aw + "[" + std::to_string(t) + "]"));
      }
      agent.assets.push_back(std::move(path));
    }
    agent.utility = read_utility(require(aj, "utility", where), where + ".utility");
    agent.endowment = read_vector(require(aj, "endowment", where), where + ".endowment");
    model.agents.push_back(std::move(agent));
  }

  if (doc.contains("exchange_space")) {
    const auto& ej = doc.at("exchange_space");
    ExchangeSpace ex;
    try {
      ex.kind = parse_exchange_kind(require(ej, "kind", "exchange_space").get<std::string>());
      ex.zero_sum = require(ej, "zero_sum", "exchange_space").get<bool>();
      if (ej.contains("includes_deterministic")) ex.includes_deterministic = ej.at("includes_deterministic").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("exchange_space: ") + e.what());
    }
    if (ej.contains("measurability")) {
      const auto& mj = ej.at("measurability");
      for (std::size_t i = 0; i < mj.size(); ++i) {
        ex.measurability.push_back(mj[i].is_null() ? Partition{}
                                                   : labels.partition(mj[i], "exchange_space.measurability[" + std::to_string(i) + "]"));
      }
    }
    const auto& bj = require(ej, "basis", "exchange_space");
    for (std::size_t l = 0; l < bj.size(); ++l) {
      ExchangeVector y;
      for (std::size_t i = 0; i < bj[l].size(); ++i) {
        y.push_back(read_vector(bj[l][i], "exchange_space.basis[" + std::to_string(l) + "][" + std::to_string(i) + "]"));
      }
      ex.basis.push_back(std::move(y));
    }
    if (ej.contains("seed_hint")) {
      const auto& sj = ej.at("seed_hint");
      SeedHint hint;
      hint.basis_index = require(sj, "basis_index", "seed_hint").get<std::size_t>();
      hint.sign = require(sj, "sign", "seed_hint").get<int>();
      if (hint.sign != 1 && hint.sign != -1) throw InputError("seed_hint.sign: expected 1 or -1");
      ex.seed_hint = hint;
    }
    out.exchange = std::move(ex);
  }
  return out;
}

ModelDocument parse_model_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("model file: ") + e.what());
  }
  try {
    return parse_model(doc);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model file: ") + e.what());
  }
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_text(buf.str());
}

Json to_json(const ModelDocument& doc) {
  const auto& model = doc.model;
  const Labels labels(model.space.outcomes);
  Json j;
  if (!doc.description.empty()) j["description"] = doc.description;
  j["outcomes"] = model.space.outcomes;
  j["reference_measure"] = rational_array(model.space.reference_measure);
  j["horizon"] = model.horizon;
  Json agents = Json::array();
  for (const auto& agent : model.agents) {
    Json a;
    a["name"] = agent.name;
    a["measure"] = rational_array(agent.measure);
    Json filt = Json::array();
    for (const auto& p : agent.filtration.partitions) filt.push_back(labels.partition_json(p));
    a["filtration"] = std::move(filt);
    Json assets = Json::array();
    for (const auto& path : agent.assets) {
      Json pj = Json::array();
      for (std::size_t t = 0; t < path.size(); ++t) {
        const auto& atoms = agent.filtration.partitions.at(t);
        if (is_measurable(path[t], atoms)) {
          RationalVector per_atom;
          for (const auto& atom : atoms) per_atom.push_back(path[t][atom.front()]);
          pj.push_back(rational_array(per_atom));
        } else {
          pj.push_back(rational_array(path[t]));
        }
      }
      assets.push_back(std::move(pj));
    }
    a["assets"] = std::move(assets);
    a["utility"] = utility_json(agent.utility);
    a["endowment"] = rational_array(agent.endowment);
    agents.push_back(std::move(a));
  }
  j["agents"] = std::move(agents);
  if (doc.exchange) {
    const auto& ex = *doc.exchange;
    Json e;
    e["kind"] = to_string(ex.kind);
    e["zero_sum"] = ex.zero_sum;
    e["includes_deterministic"] = ex.includes_deterministic;
    if (!ex.measurability.empty()) {
      Json m = Json::array();
      for (const auto& p : ex.measurability) m.push_back(p.empty() ? Json() : labels.partition_json(p));
      e["measurability"] = std::move(m);
    }
    Json basis = Json::array();
    for (const auto& y : ex.basis) {
      Json yj = Json::array();
      for (const auto& leg : y) yj.push_back(rational_array(leg));
      basis.push_back(std::move(yj));
    }
    e["basis"] = std::move(basis);
    if (ex.seed_hint) e["seed_hint"] = Json{{"basis_index", ex.seed_hint->basis_index}, {"sign", ex.seed_hint->sign}};
    j["exchange_space"] = std::move(e);
  }
  return j;
}

std::string serialize_model(const ModelDocument& doc) { return to_json(doc).dump(2) + "\n"; }

}  // namespace collarb
