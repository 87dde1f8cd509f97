#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace hyp {

/// CSV emitter for the CLI: a comment line with the tool version and config
/// hash, a header row, then rows with floats at 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& config_hash);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace hyp
