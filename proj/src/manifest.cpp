#include "mslab/manifest.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mslab/config.hpp"
#include "mslab/error.hpp"

namespace fs = std::filesystem;

namespace mslab {

void RunManifest::add_file(const std::string& out_dir, const std::string& rel_path) {
  const fs::path full = fs::path(out_dir) / rel_path;
  FileEntry e;
  e.path = rel_path;
  e.checksum = fnv1a_file(full.string());
  e.bytes = fs::file_size(full);
  files.push_back(std::move(e));
}

void RunManifest::write(const std::string& out_dir) const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["tool_version"] = tool_version;
  j["stages"] = stages;
  j["files"] = nlohmann::json::array();
  for (const auto& f : files)
    j["files"].push_back({{"path", f.path}, {"checksum", f.checksum}, {"bytes", f.bytes}});
  std::ofstream out(fs::path(out_dir) / "manifest.json");
  if (!out) throw NumericalError("manifest: cannot write to " + out_dir);
  out << j.dump(2) << '\n';
}

std::optional<RunManifest> RunManifest::load(const std::string& out_dir) {
  std::ifstream in(fs::path(out_dir) / "manifest.json");
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (...) {
    return std::nullopt;
  }
  RunManifest m;
  m.config_hash = j.value("config_hash", 0ull);
  m.tool_version = j.value("tool_version", "");
  if (j.contains("stages"))
    for (auto it = j["stages"].begin(); it != j["stages"].end(); ++it)
      m.stages[it.key()] = it.value().get<std::string>();
  if (j.contains("files"))
    for (const auto& f : j["files"])
      m.files.push_back({f.value("path", ""), f.value("checksum", 0ull), f.value("bytes", 0ull)});
  return m;
}

bool RunManifest::intact(const std::string& out_dir) const {
  for (const auto& f : files) {
    const fs::path full = fs::path(out_dir) / f.path;
    std::error_code ec;
    if (!fs::exists(full, ec)) return false;
    if (fnv1a_file(full.string()) != f.checksum) return false;
  }
  return true;
}

}  // namespace mslab
