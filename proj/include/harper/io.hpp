#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "harper/spectrum.hpp"

namespace harper {

/// FNV-1a 64-bit hash, used for content addressing.
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

/// Canonical report envelope: adds "schema": "v1", a timestamp, and a
/// content_hash over the canonical dump with timestamp and content_hash
/// excluded.
nlohmann::json finalize_report(nlohmann::json body);

/// Hash of a report with the volatile fields stripped (what two runs of the
/// same config must agree on).
std::uint64_t report_content_hash(const nlohmann::json& report);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// Cloud persistence: CSV rows (phase_index, eigenvalue), header mandatory.
void write_cloud_csv(const std::string& path, const SpectrumCloud& cloud);
/// Eigenvalue lists: CSV rows (index, value).
void write_eigenvalues_csv(const std::string& path, const std::vector<double>& values);
/// Generic two-column CSV.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

/// Content-addressed cloud cache.  Directory resolution order:
/// HARPER_CACHE_DIR, then <output_dir>/cache.
std::string cache_dir(const std::string& output_dir);
bool cache_load_cloud(const std::string& dir, const std::string& key, const CloudParams& params,
                      SpectrumCloud& out);
void cache_store_cloud(const std::string& dir, const std::string& key, const SpectrumCloud& cloud);

nlohmann::json frequency_to_json(const Frequency& f);
nlohmann::json gap_report_to_json(const GapReport& rep);
/// {cutoff, coeffs: [[k, re, im], ...]}, nonzero coefficients only.
nlohmann::json fourier_series_to_json(const FourierSeries& f);

}  // namespace harper
