#include <cmath>
#include <cstdio>

#include "diamag/errors.hpp"
#include "diamag/harness.hpp"

namespace diamag::harness {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string provenance_line(std::uint64_t seed, std::uint64_t hash) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# provenance version=%s seed=%llu config_hash=%016llx", kVersion,
                static_cast<unsigned long long>(seed), static_cast<unsigned long long>(hash));
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, std::uint64_t seed, std::uint64_t hash) : os_(os) {
  os_ << provenance_line(seed, hash) << '\n';
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  ncols_ = cols.size();
  row(cols);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  require(ncols_ == 0 || cells.size() == ncols_, "CSV row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      os_ << '"';
      for (char ch : c) {
        if (ch == '"') os_ << '"';
        os_ << (ch == '\n' ? ' ' : ch);
      }
      os_ << '"';
    } else {
      os_ << c;
    }
  }
  os_ << '\n';
  os_.flush();
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(fmt17(v));
  row(cells);
}

void CsvWriter::comment(const std::string& text) {
  os_ << "# " << text << '\n';
  os_.flush();
}

}  // namespace diamag::harness
