// writers.hpp — deterministic CSV/JSON emission for run artifacts

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace darc::cli {

// Full-precision decimal rendering (17 significant digits, '.' separator).
std::string format_double(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);
  void write(const std::filesystem::path& path) const;

  static std::string cell(double value) { return format_double(value); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_json(const nlohmann::ordered_json& doc, const std::filesystem::path& path);

}  // namespace darc::cli
