#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "harper/arithmetic.hpp"
#include "harper/model.hpp"

namespace harper {

/// Invalid configuration input; the CLI maps it to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numeric guard tripped (desk-scale limits); the CLI maps it to exit code 3.
struct numeric_guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FrequencySpec {
  enum class Kind { value, coefficients, liouville };
  Kind kind = Kind::value;
  double value = 0.61803398874989484820;  // golden mean default
  std::vector<long long> coeffs;
  double target_beta = 0.0;
  int depth = 32;

  Frequency realize() const;
};

struct RunConfig {
  Coupling coupling{0.0, 2.0, 0.0};
  FrequencySpec frequency;
  int n = 1000;
  int phase_count = 64;
  int fourier_cutoff = 48;
  int M = 400;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  bool cache = false;
  int workers = 0;

  /// Throws config_error naming the offending key.
  void validate() const;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  /// Stable content key over (coupling, frequency spec, n, phase_count).
  std::string cloud_cache_key() const;
};

}  // namespace harper
