#pragma once

// Result files: 17-digit CSV, JSON, and the run manifest with SHA-256 digests.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dcres::tools {

namespace fs = std::filesystem;
using nlohmann::json;

/// Shortest text that round-trips: "%.17g".
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);
  void row(std::initializer_list<double> values);

 private:
  std::FILE* f_ = nullptr;
  fs::path path_;
};

/// JSON with two-space indent and a trailing newline.
void write_json(const fs::path& path, const json& j);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

struct Manifest {
  std::string command;
  json parameters = json::object();
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;  ///< relative to the output directory
};

/// Writes manifest.json (deterministic: no clock data) and run_time.json
/// (UTC timestamps) into dir.
void write_manifest(const fs::path& dir, const Manifest& m, const std::string& started_utc);

/// Flag value, else $DCRES_OUTPUT_DIR, else "dcres_out". Created if missing.
fs::path resolve_output_dir(const std::optional<std::string>& flag);

/// Current UTC time as ISO 8601.
std::string utc_now();

inline constexpr const char* kToolVersion = "0.3.0";

}  // namespace dcres::tools
