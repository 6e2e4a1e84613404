#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mslab {

inline constexpr const char* kToolVersion = "0.1.0";

// Records what a run produced: config hash, per-stage status and the output
// file inventory with checksums. Re-running an identical config against an
// intact inventory is a no-op unless forced.
struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string tool_version = kToolVersion;
  std::map<std::string, std::string> stages;

  struct FileEntry {
    std::string path;  // relative to the output directory
    std::uint64_t checksum = 0;
    std::uint64_t bytes = 0;
  };
  std::vector<FileEntry> files;

  void add_file(const std::string& out_dir, const std::string& rel_path);
  void write(const std::string& out_dir) const;
  static std::optional<RunManifest> load(const std::string& out_dir);

  // true when every recorded file still exists with the recorded checksum
  bool intact(const std::string& out_dir) const;
};

}  // namespace mslab
