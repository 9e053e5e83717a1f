#include "dcres_tools/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace dcres::tools {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header) : path_(path) {
  f_ = std::fopen(path.c_str(), "w");
  if (!f_) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
  row(header);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) std::fputc(',', f_);
    std::fputs(cells[i].c_str(), f_);
  }
  std::fputc('\n', f_);
}

void CsvWriter::row(std::initializer_list<double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << j.dump(2) << '\n';
}

std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (is) {
    is.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_manifest(const fs::path& dir, const Manifest& m, const std::string& started_utc) {
  json j;
  j["command"] = m.command;
  j["tool_version"] = kToolVersion;
  j["parameters"] = m.parameters;
  j["inputs"] = json::array();
  for (const auto& p : m.inputs) j["inputs"].push_back({{"file", p.filename().string()}, {"sha256", sha256_file(p)}});
  j["outputs"] = json::array();
  for (const auto& p : m.outputs) j["outputs"].push_back({{"file", p.string()}, {"sha256", sha256_file(dir / p)}});
  write_json(dir / "manifest.json", j);
  write_json(dir / "run_time.json",
             {{"manifest", "manifest.json"}, {"started_utc", started_utc}, {"finished_utc", utc_now()}});
}

fs::path resolve_output_dir(const std::optional<std::string>& flag) {
  fs::path p;
  if (flag) {
    p = *flag;
  } else if (const char* env = std::getenv("DCRES_OUTPUT_DIR"); env && *env) {
    p = env;
  } else {
    p = "dcres_out";
  }
  fs::create_directories(p);
  return p;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace dcres::tools
