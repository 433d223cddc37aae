#include "writers.hpp"

#include <cstdio>
#include <fstream>

#include "darc/errors.hpp"

namespace darc::cli {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size())
    throw Error("cli", "CSV row width does not match the header");
  rows_.push_back(cells);
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cli", "cannot write " + path.string());
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(header_);
  for (const auto& row : rows_) emit(row);
}

void write_json(const nlohmann::ordered_json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cli", "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace darc::cli
