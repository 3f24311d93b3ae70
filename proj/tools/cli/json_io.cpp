#include "json_io.hpp"

#include "ef1po/error.hpp"

#include <fstream>
#include <limits>

namespace ef1po::cli {

Json rat_to_json(const Rat& value) {
  if (is_integer(value)) {
    const BigInt num = numerator(value);
    if (num >= std::numeric_limits<std::int64_t>::min() && num <= std::numeric_limits<std::int64_t>::max()) {
      return Json(num.convert_to<std::int64_t>());
    }
  }
  return Json(to_string(value));
}

Rat rat_from_json(const Json& value) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) return Rat(value.get<std::uint64_t>());
    return Rat(value.get<std::int64_t>());
  }
  if (value.is_string()) return parse_rat(value.get<std::string>());
  throw InvalidInput("expected an integer or a rational string, got " + value.dump());
}

namespace {

std::size_t read_count(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<std::int64_t>() < 0) {
    throw InvalidInput(std::string("field '") + key + "' must be a non-negative integer");
  }
  return doc[key].get<std::size_t>();
}

}  // namespace

Instance parse_instance(const Json& doc, bool allow_zero) {
  if (!doc.is_object()) throw InvalidInput("instance must be a JSON object");
  const std::size_t n = read_count(doc, "n");
  const std::size_t m = read_count(doc, "m");
  if (n == 0) throw InvalidInput("an instance needs at least one agent");
  if (!doc.contains("costs") || !doc["costs"].is_array() || doc["costs"].size() != n) {
    throw InvalidInput("'costs' must be an array of n rows");
  }
  CostMatrix costs(n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = doc["costs"][i];
    if (!row.is_array() || row.size() != m) {
      throw InvalidInput("cost row " + std::to_string(i + 1) + " must have m entries");
    }
    for (Index j = 0; j < m; ++j) {
      Rat c = rat_from_json(row[j]);
      if (c < 0 || (c == 0 && !allow_zero)) {
        throw InvalidInput("cost of agent " + std::to_string(i + 1) + " for chore " + std::to_string(j + 1) +
                           " must be positive" + (allow_zero ? "" : " (pass --allow-zero to preprocess zeros)"));
      }
      costs[i].push_back(std::move(c));
    }
  }
  std::vector<Rat> entitlements;
  if (doc.contains("entitlements") && !doc["entitlements"].is_null()) {
    const Json& ent = doc["entitlements"];
    if (!ent.is_array() || ent.size() != n) throw InvalidInput("'entitlements' must have n entries");
    for (const auto& e : ent) entitlements.push_back(rat_from_json(e));
  }
  if (m == 0) return Instance::empty(n, std::move(entitlements));
  return Instance(std::move(costs), std::move(entitlements));
}

Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["n"] = inst.agents();
  doc["m"] = inst.chores();
  Json costs = Json::array();
  for (Index i = 0; i < inst.agents(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < inst.chores(); ++j) row.push_back(rat_to_json(inst.cost(i, j)));
    costs.push_back(std::move(row));
  }
  doc["costs"] = std::move(costs);
  if (!inst.unit_entitlements()) {
    Json ent = Json::array();
    for (const auto& a : inst.entitlements()) ent.push_back(rat_to_json(a));
    doc["entitlements"] = std::move(ent);
  }
  return doc;
}

Allocation parse_bundles(const Json& doc, std::size_t agents, std::size_t chores) {
  if (!doc.is_object() || !doc.contains("bundles") || !doc["bundles"].is_array()) {
    throw InvalidInput("allocation must be an object with a 'bundles' array");
  }
  const Json& arr = doc["bundles"];
  if (arr.size() != agents) throw InvalidInput("'bundles' must have one entry per agent");
  std::vector<Bundle> bundles;
  for (const auto& b : arr) {
    if (!b.is_array()) throw InvalidInput("each bundle must be an array of chore indices");
    Bundle bundle;
    for (const auto& j : b) {
      if (!j.is_number_integer() || j.get<std::int64_t>() < 1 ||
          j.get<std::uint64_t>() > static_cast<std::uint64_t>(chores)) {
        throw InvalidInput("chore index " + j.dump() + " outside 1.." + std::to_string(chores));
      }
      bundle.push_back(j.get<std::size_t>() - 1);
    }
    bundles.push_back(std::move(bundle));
  }
  return Allocation::from_bundles(chores, bundles);
}

Json bundles_to_json(const Allocation& x) {
  Json out = Json::array();
  for (const auto& bundle : x.bundles()) {
    Json b = Json::array();
    for (Index j : bundle) b.push_back(j + 1);
    out.push_back(std::move(b));
  }
  return out;
}

Json witness_to_json(const Witness& witness) {
  struct Visitor {
    Json operator()(const EnvyPair& e) const { return Json{{"envious", e.envious + 1}, {"envied", e.envied + 1}}; }
    Json operator()(const Allocation& y) const { return Json{{"bundles", bundles_to_json(y)}}; }
    Json operator()(const ExchangeCycle& c) const {
      Json agents = Json::array();
      Json chores = Json::array();
      for (Index a : c.agents) agents.push_back(a + 1);
      for (Index j : c.chores) chores.push_back(j + 1);
      return Json{{"agents", agents}, {"chores", chores}, {"product", to_string(c.product)}};
    }
    Json operator()(const std::vector<Rat>& w) const {
      Json arr = Json::array();
      for (const auto& v : w) arr.push_back(rat_to_json(v));
      return Json{{"weights", arr}};
    }
  };
  return std::visit(Visitor{}, witness);
}

Json report_to_json(const CheckReport& report) {
  Json out;
  out["property"] = report.property;
  out["verdict"] = report.verdict;
  if (report.witness) out["witness"] = witness_to_json(*report.witness);
  return out;
}

namespace {

Json rat_array(const std::vector<Rat>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(rat_to_json(v));
  return arr;
}

}  // namespace

Json certificate_to_json(const Certificate& cert) {
  Json out;
  out["method"] = std::string(method_name(cert.method));
  out["fallback"] = cert.fallback;
  out["fallback_reason"] = cert.fallback_reason.empty() ? Json(nullptr) : Json(cert.fallback_reason);
  out["tau"] = cert.tau ? rat_to_json(*cert.tau) : Json(nullptr);
  out["weights"] = rat_array(cert.weights);
  out["prices"] = rat_array(cert.prices);
  out["perturbation_seed"] = cert.perturbation_seed;
  out["eta"] = rat_to_json(cert.eta);
  Json checks;
  checks["ef1"] = cert.ef1;
  checks["pef1"] = cert.pef1;
  checks["fpo_perturbed"] = cert.fpo_perturbed;
  checks["po_original"] = cert.po_original ? Json(*cert.po_original) : Json(nullptr);
  out["checks"] = std::move(checks);
  out["iterations"] = cert.iterations;
  out["phi_start"] = cert.phi_start;
  if (!cert.search_stage.empty()) {
    out["search"] = Json{{"stage", cert.search_stage}, {"candidates", cert.search_candidates}};
  }
  return out;
}

Json result_to_json(const SolveResult& result) {
  Json out;
  out["bundles"] = bundles_to_json(result.allocation);
  out["certificate"] = certificate_to_json(result.certificate);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace ef1po::cli
