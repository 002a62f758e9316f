#include "egedyn/config.hpp"

#include <fstream>
#include <sstream>

#include "egedyn/sha256.hpp"

namespace ege {

Json default_config() {
  Json cfg;
  cfg["seed"] = 12345;

  // Matrix path parameters shared by `simulate` and any single-path checks.
  cfg["sim"] = {
      {"n", 2},
      {"tau", 0.0},
      {"dt", 1e-3},
      {"steps", 100},
      {"replicas", 1},
      {"initial",
       {{"kind", "sampled"}, {"scale", 1.0}, {"diag_re", Json::array()},
        {"diag_im", Json::array()}}},
  };
  cfg["simulate"] = {{"record_full_overlaps", false}};

  // Full verification family; defaults pin the acceptance parameters.
  cfg["verify"] = {
      {"entry_covariance", {{"n", 3}, {"taus", {0.0, 0.7}}, {"draws", 1000000}, {"dt", 1.0}}},
      {"bridge", {{"matrices", 100}, {"max_n", 8}, {"tolerance", 1e-7}}},
      {"derivatives", {{"sizes", {2, 3, 4}}, {"taus", {0.0, 0.5, 1.0}}, {"states_per_case", 2}}},
      {"drift",
       {{"sizes", {2, 3, 5}},
        {"taus", {-1.0, -0.5, 0.0, 0.5, 1.0}},
        {"draws", 100000},
        {"dt", 1e-5}}},
      {"martingale",
       {{"sizes", {1, 2, 3}}, {"taus", {0.0, 0.5, 1.0}}, {"draws", 400}, {"dt", 1e-4}}},
      {"qv", {{"n", 3}, {"tau", 0.5}, {"replicas", 200}, {"horizon", 0.1}, {"dt", 1e-4}}},
      {"vandermonde",
       {{"n", 3},
        {"taus", {0.0, 0.8}},
        {"replicas", 10000},
        {"horizon", 0.05},
        {"dt", 1e-3},
        {"checkpoints", 5}}},
      {"non_collision",
       {{"sizes", {2, 4}},
        {"taus", {0.0, 0.5, 1.0}},
        {"replicas", 100},
        {"horizon", 1.0},
        {"dt", 1e-3}}},
  };

  cfg["identities"] = {
      {"sizes", {3, 4, 5, 6, 7, 8}}, {"matrices_per_size", 100}, {"tolerance", 1e-8}};

  cfg["two_by_two"] = {
      {"taus", {0.0, 0.5}},
      {"drift_draws", 100000},
      {"drift_dt", 1e-5},
      {"qv_draws", 100000},
      {"covariation_replicas", 500},
      {"covariation_horizon", 0.1},
      {"covariation_dt", 1e-3},
      {"exp_samples", 10000},
      {"exp_t", 1.0},
  };

  cfg["stats"] = {
      {"n", 200},
      {"t", 1.0},
      {"samples", 20},
      {"bins", 10},
      {"elliptic_taus", {0.0, 0.5}},
      {"semicircle_samples", 50},
      {"weak_nh", {{"alpha", 1.0}, {"sweep", {50, 100, 200}}, {"samples", 40}}},
      {"overlap_profile", {{"n", 100}, {"samples", 400}, {"bins", 5}}},
      {"export_cloud", false},
  };
  return cfg;
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file: " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw ArgumentError("config file " + path + " is not valid JSON: " + e.what());
  }
}

namespace {

const char* category_name(const Json& j) {
  if (j.is_object()) return "object";
  if (j.is_array()) return "array";
  if (j.is_string()) return "string";
  if (j.is_boolean()) return "boolean";
  if (j.is_number()) return "number";
  return "null";
}

bool same_category(const Json& a, const Json& b) {
  return std::string(category_name(a)) == category_name(b);
}

}  // namespace

void merge_config(Json& base, const Json& user, const std::string& path) {
  if (!user.is_object() || !base.is_object())
    throw ArgumentError("config node " + (path.empty() ? "<root>" : path) +
                        " must be an object");
  for (const auto& [key, value] : user.items()) {
    const std::string here = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw ArgumentError("unknown config key: " + here);
    Json& slot = base[key];
    if (slot.is_object()) {
      merge_config(slot, value, here);
    } else {
      if (!same_category(slot, value))
        throw ArgumentError("config key " + here + " expects " + category_name(slot) +
                            ", got " + category_name(value));
      slot = value;
    }
  }
}

void apply_override(Json& cfg, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ArgumentError("--set expects KEY=VALUE, got: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (...) {
    value = raw;  // bare strings need no quotes on the command line
  }

  Json* node = &cfg;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ArgumentError("--set key is empty");
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object() || !node->contains(parts[i]))
      throw ArgumentError("unknown config key: " + key);
    node = &(*node)[parts[i]];
  }
  const std::string& leaf = parts.back();
  if (!node->is_object() || !node->contains(leaf))
    throw ArgumentError("unknown config key: " + key);
  Json& slot = (*node)[leaf];
  if (slot.is_object()) throw ArgumentError("config key " + key + " is a section");
  if (!same_category(slot, value))
    throw ArgumentError("config key " + key + " expects " + category_name(slot) + ", got " +
                        category_name(value));
  slot = value;
}

std::string canonical_dump(const Json& cfg) {
  // Reparse through the key-sorting JSON type: insertion order is a
  // presentation detail and must not affect the hash.
  return nlohmann::json::parse(cfg.dump()).dump();
}

std::string config_hash(const Json& cfg) { return sha256_hex(canonical_dump(cfg)); }

SimConfig sim_config_from(const Json& cfg) {
  SimConfig sim;
  try {
    const Json& s = cfg.at("sim");
    sim.N = s.at("n").get<int>();
    sim.tau = Hermiticity(s.at("tau").get<double>());
    sim.dt = s.at("dt").get<double>();
    sim.steps = s.at("steps").get<long>();
    sim.replicas = s.at("replicas").get<int>();
    sim.seed = cfg.at("seed").get<uint64_t>();
    const Json& init = s.at("initial");
    const std::string kind = init.at("kind").get<std::string>();
    if (kind == "zero") {
      sim.initial.kind = Initial::Kind::Zero;
    } else if (kind == "diagonal") {
      sim.initial.kind = Initial::Kind::Diagonal;
      const auto re = init.at("diag_re").get<std::vector<double>>();
      const auto im = init.at("diag_im").get<std::vector<double>>();
      if (re.size() != im.size())
        throw ArgumentError("initial.diag_re and diag_im must have equal length");
      for (size_t i = 0; i < re.size(); ++i) sim.initial.diag.emplace_back(re[i], im[i]);
    } else if (kind == "sampled") {
      sim.initial.kind = Initial::Kind::SampledSimple;
      sim.initial.scale = init.at("scale").get<double>();
    } else {
      throw ArgumentError("initial.kind must be zero|diagonal|sampled, got: " + kind);
    }
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("config sim section: ") + e.what());
  }
  sim.validate();
  return sim;
}

StatsConfig stats_config_from(const Json& cfg) {
  StatsConfig st;
  try {
    const Json& s = cfg.at("stats");
    st.N = s.at("n").get<int>();
    st.t = s.at("t").get<double>();
    st.samples = s.at("samples").get<long>();
    st.bins = s.at("bins").get<int>();
    st.alpha = s.at("weak_nh").at("alpha").get<double>();
    st.seed = cfg.at("seed").get<uint64_t>();
    const auto taus = s.at("elliptic_taus").get<std::vector<double>>();
    if (!taus.empty()) st.tau = Hermiticity(taus.front());
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("config stats section: ") + e.what());
  }
  st.validate();
  return st;
}

}  // namespace ege
