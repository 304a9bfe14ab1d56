#pragma once

#include <string>
#include <vector>

#include "renorm2/config.hpp"

namespace renorm2 {

struct TableRecord {
  std::string file;
  std::size_t rows = 0;
  std::string checksum;  // fnv1a-64 over the emitted bytes
};

struct RunResult {
  std::string manifest_path;
  std::vector<TableRecord> tables;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// FNV-1a 64 of the byte string, rendered as 0x + 16 hex digits.
std::string fnv1a64(const std::string& bytes);

/// Executes the configured mode and writes the CSV tables plus one
/// manifest.json into cfg.out_dir.  Tables are buffered in memory and only
/// reach disk after the whole computation succeeded; when a module throws,
/// the manifest alone is written carrying the error context, and the
/// exception continues to the caller.
RunResult run_experiment(const ExperimentConfig& cfg);

}
