#include <doctest.h>

#include <json.hpp>

#include "harper/config.hpp"
#include "harper/io.hpp"
#include "harper/spectrum.hpp"

using namespace harper;

TEST_CASE("config round trip is lossless") {
  RunConfig c;
  c.coupling = {0.1, 2.0, 0.2};
  c.frequency.kind = FrequencySpec::Kind::liouville;
  c.frequency.target_beta = 0.5;
  c.frequency.depth = 6;
  c.n = 1234;
  c.phase_count = 77;
  c.fourier_cutoff = 31;
  c.M = 222;
  c.seed = 987654321;
  c.output_dir = "/tmp/x";
  c.cache = true;
  c.workers = 3;

  RunConfig back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.cloud_cache_key() == c.cloud_cache_key());
}

TEST_CASE("config errors name the offending key") {
  nlohmann::json j;
  j["coupling"] = {-1.0, 2.0, 0.0};
  bool threw = false;
  try {
    RunConfig::from_json(j);
  } catch (const config_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("coupling") != std::string::npos);
  }
  CHECK(threw);

  nlohmann::json j2;
  j2["n"] = 0;
  threw = false;
  try {
    RunConfig::from_json(j2);
  } catch (const config_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("n") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("numeric guard trips on oversized grids") {
  nlohmann::json j;
  j["n"] = 100000;
  j["phase_count"] = 10000;
  CHECK_THROWS_AS(RunConfig::from_json(j), numeric_guard_error);
}

TEST_CASE("cache key depends only on cloud-relevant fields") {
  RunConfig a;
  a.seed = 1;
  RunConfig b = a;
  b.seed = 99;               // not part of the cloud key
  b.output_dir = "/elsewhere";
  CHECK(a.cloud_cache_key() == b.cloud_cache_key());
  RunConfig c = a;
  c.n = a.n + 1;
  CHECK(a.cloud_cache_key() != c.cloud_cache_key());
}

TEST_CASE("report envelope carries schema and a stable content hash") {
  nlohmann::json body;
  body["x"] = 1.25;
  nlohmann::json r1 = finalize_report(body);
  nlohmann::json r2 = finalize_report(body);
  CHECK(r1["schema"] == "v1");
  CHECK(r1["content_hash"] == r2["content_hash"]);
  CHECK(report_content_hash(r1) == report_content_hash(r2));
}

TEST_CASE("frequency serialization shape") {
  Frequency f = liouville_frequency(0.5, 4);
  nlohmann::json j = frequency_to_json(f);
  CHECK(j.contains("value"));
  CHECK(j.contains("cf_coeffs"));
  CHECK(j.contains("convergents"));
  CHECK(j.contains("beta_hat"));
  CHECK(j.contains("truncated"));
  CHECK(j["convergents"].size() == f.convergents.size());
}

TEST_CASE("cached cloud retrieval equals recomputation") {
  Frequency g = golden_mean();
  SpectrumCloud cloud = build_cloud({0.0, 2.0, 0.0}, g, 60, 6);
  std::string dir = "/tmp/harper_cache_test";
  cache_store_cloud(dir, "kx", cloud);
  SpectrumCloud back;
  REQUIRE(cache_load_cloud(dir, "kx", cloud.params(), back));
  REQUIRE(back.samples().size() == cloud.samples().size());
  for (size_t i = 0; i < cloud.samples().size(); ++i)
    CHECK(back.samples()[i] == cloud.samples()[i]);
  REQUIRE(back.per_phase().size() == cloud.per_phase().size());
  for (size_t j = 0; j < cloud.per_phase().size(); ++j)
    CHECK(back.per_phase()[j] == cloud.per_phase()[j]);
}

TEST_CASE("eigenvalue and fourier serialization formats") {
  write_eigenvalues_csv("/tmp/harper_eig_test.csv", {1.5, -0.25});
  std::string csv = read_text("/tmp/harper_eig_test.csv");
  CHECK(csv.find("index,value") == 0);
  CHECK(csv.find("0,1.5") != std::string::npos);

  FourierSeries f(2);
  f.set(-1, cdouble{0.5, -0.25});
  f.set(2, cdouble{1.0, 0.0});
  nlohmann::json j = fourier_series_to_json(f);
  CHECK(j["cutoff"] == 2);
  CHECK(j["coeffs"].size() == 2);
  CHECK(j["coeffs"][0][0] == -1);
}
