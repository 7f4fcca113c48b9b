#include "harness.hpp"

#include <fstream>
#include <set>

namespace ogflow::harness {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback,
                      const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + ": expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

KernelSpec parse_kernel(const json& obj) {
  reject_unknown_keys(obj, {"bandwidth", "h"}, "sampler.kernel");
  const auto policy = get_or<std::string>(obj, "bandwidth", "median", "sampler.kernel");
  if (policy == "median") {
    if (obj.contains("h")) throw ConfigError("sampler.kernel: 'h' requires bandwidth 'fixed'");
    return KernelSpec::median();
  }
  if (policy != "fixed") {
    throw ConfigError("sampler.kernel.bandwidth: expected 'median' or 'fixed'");
  }
  if (!obj.contains("h")) throw ConfigError("sampler.kernel: fixed bandwidth needs 'h'");
  const double h = get_or<double>(obj, "h", 0.0, "sampler.kernel");
  if (!(h > 0.0)) throw ConfigError("sampler.kernel.h: must be positive");
  return KernelSpec::fixed(h);
}

AnnealingConfig parse_annealing(const json& obj) {
  reject_unknown_keys(obj, {"eta_schedule", "level", "normal_scale", "tangential_scale"},
                      "sampler.annealing");
  AnnealingConfig a;
  a.eta_schedule =
      get_or<std::vector<double>>(obj, "eta_schedule", a.eta_schedule, "sampler.annealing");
  a.level = get_or<double>(obj, "level", a.level, "sampler.annealing");
  a.normal_scale = get_or<double>(obj, "normal_scale", a.normal_scale, "sampler.annealing");
  a.tangential_scale =
      get_or<double>(obj, "tangential_scale", a.tangential_scale, "sampler.annealing");
  return a;
}

SamplerConfig parse_sampler(const json& obj) {
  reject_unknown_keys(obj,
                      {"method", "eta", "alpha", "beta", "n_particles", "n_iters", "seed",
                       "record_every", "second_order_free", "kernel", "annealing"},
                      "sampler");
  SamplerConfig s;
  if (!obj.contains("method")) throw ConfigError("sampler.method: required");
  try {
    s.method = parse_method(get_or<std::string>(obj, "method", "", "sampler"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("sampler.method: ") + e.what());
  }
  s.eta = get_or<double>(obj, "eta", s.eta, "sampler");
  s.psi.alpha = get_or<double>(obj, "alpha", s.psi.alpha, "sampler");
  s.psi.beta = get_or<double>(obj, "beta", s.psi.beta, "sampler");
  s.n_particles = get_count(obj, "n_particles", s.n_particles, "sampler");
  s.n_iters = get_count(obj, "n_iters", s.n_iters, "sampler");
  s.seed = get_count(obj, "seed", 0, "sampler");
  s.record_every = get_count(obj, "record_every", s.record_every, "sampler");
  s.second_order_free = get_or<bool>(obj, "second_order_free", false, "sampler");
  if (obj.contains("kernel")) s.kernel = parse_kernel(obj.at("kernel"));
  if (obj.contains("annealing")) s.annealing = parse_annealing(obj.at("annealing"));
  return s;
}

InitSpec parse_init(const json& obj) {
  reject_unknown_keys(obj, {"kind", "center", "scale"}, "init");
  InitSpec init;
  const auto kind = get_or<std::string>(obj, "kind", "on_manifold", "init");
  if (kind == "on_manifold") {
    if (obj.contains("center") || obj.contains("scale")) {
      throw ConfigError("init: center/scale only apply to off_manifold");
    }
    return init;
  }
  if (kind != "off_manifold") throw ConfigError("init.kind: expected on_manifold or off_manifold");
  init.kind = InitSpec::Kind::off_manifold;
  const auto center = get_or<std::vector<double>>(obj, "center", {1.5, 1.5}, "init");
  init.center = Eigen::Map<const Vector>(center.data(), static_cast<Eigen::Index>(center.size()));
  init.scale = get_or<double>(obj, "scale", init.scale, "init");
  if (!(init.scale >= 0.0)) throw ConfigError("init.scale: must be nonnegative");
  return init;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc) {
  reject_unknown_keys(doc,
                      {"schema_version", "target", "sampler", "init", "ground_truth_n",
                       "ground_truth_seed", "output_dir"},
                      "config");
  if (!doc.contains("schema_version") || doc.at("schema_version") != kSchemaVersion) {
    throw ConfigError("config: schema_version must be " + std::to_string(kSchemaVersion));
  }
  ExperimentConfig cfg;
  cfg.target = get_or<std::string>(doc, "target", cfg.target, "config");
  if (cfg.target != "synthetic") throw ConfigError("config.target: only 'synthetic' is supported");
  if (!doc.contains("sampler")) throw ConfigError("config.sampler: required");
  cfg.sampler = parse_sampler(doc.at("sampler"));
  if (doc.contains("init")) cfg.init = parse_init(doc.at("init"));
  if (cfg.init.kind == InitSpec::Kind::off_manifold && cfg.init.center.size() != 2) {
    throw ConfigError("init.center: the synthetic target is two-dimensional");
  }
  cfg.ground_truth_n = get_count(doc, "ground_truth_n", cfg.ground_truth_n, "config");
  if (cfg.ground_truth_n < 100) throw ConfigError("config.ground_truth_n: must be at least 100");
  cfg.ground_truth_seed = doc.contains("ground_truth_seed")
                              ? get_count(doc, "ground_truth_seed", 0, "config")
                              : derive_seed(cfg.sampler.seed, 2);
  cfg.output_dir = get_or<std::string>(doc, "output_dir", cfg.output_dir.string(), "config");

  try {
    cfg.sampler.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config.sampler: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_experiment_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  const SamplerConfig& s = cfg.sampler;
  json kernel = s.kernel.policy == KernelSpec::Bandwidth::fixed
                    ? json{{"bandwidth", "fixed"}, {"h", s.kernel.fixed_h}}
                    : json{{"bandwidth", "median"}};
  json sampler = {
      {"method", std::string(method_name(s.method))},
      {"eta", s.eta},
      {"alpha", s.psi.alpha},
      {"beta", s.psi.beta},
      {"n_particles", s.n_particles},
      {"n_iters", s.n_iters},
      {"seed", s.seed},
      {"record_every", s.record_every},
      {"second_order_free", s.second_order_free},
      {"kernel", kernel},
      {"annealing",
       {{"eta_schedule", s.annealing.eta_schedule},
        {"level", s.annealing.level},
        {"normal_scale", s.annealing.normal_scale},
        {"tangential_scale", s.annealing.tangential_scale}}},
  };
  json init = {{"kind", cfg.init.kind == InitSpec::Kind::on_manifold ? "on_manifold"
                                                                      : "off_manifold"}};
  if (cfg.init.kind == InitSpec::Kind::off_manifold) {
    init["center"] = std::vector<double>(cfg.init.center.data(),
                                         cfg.init.center.data() + cfg.init.center.size());
    init["scale"] = cfg.init.scale;
  }
  return {
      {"schema_version", kSchemaVersion},
      {"target", cfg.target},
      {"sampler", sampler},
      {"init", init},
      {"ground_truth_n", cfg.ground_truth_n},
      {"ground_truth_seed", cfg.ground_truth_seed},
      {"output_dir", cfg.output_dir.generic_string()},
  };
}

}  // namespace ogflow::harness
