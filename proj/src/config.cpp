#include "harper/config.hpp"

#include <cmath>

namespace harper {

Frequency FrequencySpec::realize() const {
  switch (kind) {
    case Kind::value:
      return continued_fraction(value, depth);
    case Kind::coefficients:
      return frequency_from_coefficients(coeffs);
    case Kind::liouville:
      return liouville_frequency(target_beta, depth);
  }
  throw config_error("frequency: unknown kind");
}

void RunConfig::validate() const {
  if (!(coupling.l1 >= 0.0 && coupling.l2 >= 0.0 && coupling.l3 >= 0.0))
    throw config_error("coupling: components must be nonnegative");
  if (coupling.l2 == 0.0 && !(coupling.l1 > 0.0 || coupling.l3 > 0.0))
    throw config_error("coupling: at least one component must be positive");
  if (n < 1) throw config_error("n: must be >= 1");
  if (phase_count < 1) throw config_error("phase_count: must be >= 1");
  if (static_cast<long long>(n) * phase_count > 100'000'000LL)
    throw numeric_guard_error("n * phase_count exceeds the 1e8 guard");
  if (fourier_cutoff < 1) throw config_error("fourier_cutoff: must be >= 1");
  if (M < 2) throw config_error("M: must be >= 2");
  if (workers < 0) throw config_error("workers: must be >= 0");
  switch (frequency.kind) {
    case FrequencySpec::Kind::value:
      if (!(frequency.value > 0.0 && frequency.value < 1.0))
        throw config_error("frequency.value: must lie in (0,1)");
      break;
    case FrequencySpec::Kind::coefficients:
      if (frequency.coeffs.empty()) throw config_error("frequency.cf_coeffs: empty");
      for (long long a : frequency.coeffs)
        if (a < 1) throw config_error("frequency.cf_coeffs: entries must be positive");
      break;
    case FrequencySpec::Kind::liouville:
      if (!(frequency.target_beta > 0.0 && frequency.target_beta <= 5.0))
        throw config_error("frequency.liouville.target_beta: must lie in (0, 5]");
      if (frequency.depth < 1 || frequency.depth > 12)
        throw config_error("frequency.liouville.depth: must lie in [1, 12]");
      break;
  }
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (j.contains("coupling")) {
      auto v = j.at("coupling");
      if (!v.is_array() || v.size() != 3) throw config_error("coupling: expected [l1, l2, l3]");
      c.coupling = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
    if (j.contains("frequency")) {
      const auto& f = j.at("frequency");
      if (f.contains("value")) {
        c.frequency.kind = FrequencySpec::Kind::value;
        c.frequency.value = f.at("value").get<double>();
        if (f.contains("depth")) c.frequency.depth = f.at("depth").get<int>();
      } else if (f.contains("cf_coeffs")) {
        c.frequency.kind = FrequencySpec::Kind::coefficients;
        c.frequency.coeffs = f.at("cf_coeffs").get<std::vector<long long>>();
      } else if (f.contains("liouville")) {
        c.frequency.kind = FrequencySpec::Kind::liouville;
        c.frequency.target_beta = f.at("liouville").at("target_beta").get<double>();
        c.frequency.depth = f.at("liouville").at("depth").get<int>();
      } else {
        throw config_error("frequency: expected one of value, cf_coeffs, liouville");
      }
    }
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("phase_count")) c.phase_count = j.at("phase_count").get<int>();
    if (j.contains("fourier_cutoff")) c.fourier_cutoff = j.at("fourier_cutoff").get<int>();
    if (j.contains("M")) c.M = j.at("M").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("cache")) c.cache = j.at("cache").get<bool>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["coupling"] = {coupling.l1, coupling.l2, coupling.l3};
  switch (frequency.kind) {
    case FrequencySpec::Kind::value:
      j["frequency"] = {{"value", frequency.value}, {"depth", frequency.depth}};
      break;
    case FrequencySpec::Kind::coefficients:
      j["frequency"] = {{"cf_coeffs", frequency.coeffs}};
      break;
    case FrequencySpec::Kind::liouville:
      j["frequency"] = {
          {"liouville", {{"target_beta", frequency.target_beta}, {"depth", frequency.depth}}}};
      break;
  }
  j["n"] = n;
  j["phase_count"] = phase_count;
  j["fourier_cutoff"] = fourier_cutoff;
  j["M"] = M;
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["cache"] = cache;
  j["workers"] = workers;
  return j;
}

std::string RunConfig::cloud_cache_key() const {
  nlohmann::json k;
  k["coupling"] = {coupling.l1, coupling.l2, coupling.l3};
  switch (frequency.kind) {
    case FrequencySpec::Kind::value:
      k["frequency"] = {{"value", frequency.value}, {"depth", frequency.depth}};
      break;
    case FrequencySpec::Kind::coefficients:
      k["frequency"] = {{"cf_coeffs", frequency.coeffs}};
      break;
    case FrequencySpec::Kind::liouville:
      k["frequency"] = {
          {"liouville", {{"target_beta", frequency.target_beta}, {"depth", frequency.depth}}}};
      break;
  }
  k["n"] = n;
  k["phase_count"] = phase_count;
  // stable FNV-1a 64 over the canonical dump
  std::string dump = k.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace harper
