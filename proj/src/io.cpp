#include "harper/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace harper {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t report_content_hash(const nlohmann::json& report) {
  nlohmann::json r = report;
  r.erase("timestamp");
  r.erase("content_hash");
  return fnv1a64(r.dump());
}

nlohmann::json finalize_report(nlohmann::json body) {
  body["schema"] = "v1";
  body["content_hash"] = hex64(report_content_hash(body));
  auto now = std::chrono::system_clock::now().time_since_epoch();
  body["timestamp"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  return body;
}

void write_text(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_text: cannot open " + path);
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_text: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_cloud_csv(const std::string& path, const SpectrumCloud& cloud) {
  std::ostringstream ss;
  ss << "phase_index,eigenvalue\n";
  const auto& pp = cloud.per_phase();
  if (!pp.empty()) {
    for (size_t j = 0; j < pp.size(); ++j)
      for (double e : pp[j]) ss << j << "," << fmt(e) << "\n";
  } else {
    for (double e : cloud.samples()) ss << -1 << "," << fmt(e) << "\n";
  }
  write_text(path, ss.str());
}

void write_eigenvalues_csv(const std::string& path, const std::vector<double>& values) {
  std::ostringstream ss;
  ss << "index,value\n";
  for (size_t i = 0; i < values.size(); ++i) ss << i << "," << fmt(values[i]) << "\n";
  write_text(path, ss.str());
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream ss;
  ss << header << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) ss << (i ? "," : "") << fmt(r[i]);
    ss << "\n";
  }
  write_text(path, ss.str());
}

std::string cache_dir(const std::string& output_dir) {
  if (const char* env = std::getenv("HARPER_CACHE_DIR"); env && *env) return env;
  return (fs::path(output_dir) / "cache").string();
}

bool cache_load_cloud(const std::string& dir, const std::string& key, const CloudParams& params,
                      SpectrumCloud& out) {
  fs::path base = fs::path(dir) / key;
  fs::path csv = base / "cloud.csv";
  if (!fs::exists(csv)) return false;
  std::ifstream f(csv);
  if (!f) return false;
  std::string line;
  std::getline(f, line);  // header
  std::vector<std::vector<double>> per_phase(static_cast<size_t>(params.phase_count));
  std::vector<double> all;
  all.reserve(static_cast<size_t>(params.total()));
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) return false;
    long phase = std::strtol(line.c_str(), nullptr, 10);
    double e = std::strtod(line.c_str() + comma + 1, nullptr);
    if (phase < 0 || phase >= params.phase_count) return false;
    per_phase[static_cast<size_t>(phase)].push_back(e);
    all.push_back(e);
  }
  if (static_cast<long long>(all.size()) != params.total()) return false;
  std::sort(all.begin(), all.end());
  out = SpectrumCloud::from_samples(params, std::move(all), std::move(per_phase));
  return true;
}

void cache_store_cloud(const std::string& dir, const std::string& key, const SpectrumCloud& cloud) {
  fs::path base = fs::path(dir) / key;
  fs::create_directories(base);
  write_cloud_csv((base / "cloud.csv").string(), cloud);
  nlohmann::json params;
  const auto& p = cloud.params();
  params["coupling"] = {p.lam.l1, p.lam.l2, p.lam.l3};
  params["n"] = p.n;
  params["phase_count"] = p.phase_count;
  params["alpha"] = p.freq.value;
  write_text((base / "params.json").string(), finalize_report(params).dump(2) + "\n");
}

nlohmann::json frequency_to_json(const Frequency& f) {
  nlohmann::json j;
  j["value"] = f.value;
  j["cf_coeffs"] = f.cf_coeffs;
  nlohmann::json conv = nlohmann::json::array();
  for (const auto& c : f.convergents) conv.push_back({c.p, c.q});
  j["convergents"] = conv;
  j["beta_hat"] = f.beta_hat;
  j["truncated"] = f.truncated;
  return j;
}

nlohmann::json fourier_series_to_json(const FourierSeries& f) {
  nlohmann::json j;
  j["cutoff"] = f.cutoff();
  nlohmann::json coeffs = nlohmann::json::array();
  for (int k = -f.cutoff(); k <= f.cutoff(); ++k) {
    cdouble c = f.coeff(k);
    if (c == cdouble{0.0, 0.0}) continue;
    coeffs.push_back({k, c.real(), c.imag()});
  }
  j["coeffs"] = coeffs;
  return j;
}

nlohmann::json gap_report_to_json(const GapReport& rep) {
  nlohmann::json j;
  j["plateau_tol"] = rep.plateau_tol;
  j["max_label"] = rep.max_label;
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& g : rep.gaps) {
    gaps.push_back({{"label", g.label},
                    {"lower", g.lower},
                    {"upper", g.upper},
                    {"length", g.length()},
                    {"ids_value", g.ids_value},
                    {"label_residual", g.label_residual}});
  }
  j["gaps"] = gaps;
  nlohmann::json un = nlohmann::json::array();
  for (const auto& p : rep.unlabeled)
    un.push_back({{"lower", p.lower}, {"upper", p.upper}, {"ids_value", p.ids_value},
                  {"best_residual", p.best_residual}});
  j["unlabeled"] = un;
  return j;
}

}  // namespace harper
