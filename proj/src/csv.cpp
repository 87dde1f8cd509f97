#include "hyp/csv.hpp"

#include <filesystem>

#include "hyp/errors.hpp"
#include "hyp/version.hpp"

namespace hyp {

CsvWriter::CsvWriter(const std::string& path, const std::string& config_hash)
    : path_(path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  out_.open(path, std::ios::trunc);
  if (!out_) throw Error(ErrorKind::Resource, "cannot open output file " + path);
  out_ << "# " << kToolName << " " << kVersion << " config=" << config_hash << "\n";
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    out_ << (i ? "," : "") << names[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i)
    out_ << (i ? "," : "") << fields[i];
  out_ << "\n";
}

}  // namespace hyp
