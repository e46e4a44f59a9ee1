#include "nvmix/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace nvmix {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

bool parse_number(const std::string& field, double& out) {
  const char* b = field.data();
  const char* e = b + field.size();
  if (b != e && *b == '+') ++b;  // from_chars rejects a leading plus
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e && b != e;
}

[[noreturn]] void line_error(const std::string& path, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw std::invalid_argument(os.str());
}

}  // namespace

Sample ingest_observations(const std::string& path, bool log_transform) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);

  Sample s;
  s.provenance = path + (log_transform ? " (log)" : "");
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    std::string field = trim(line);
    if (field.empty()) continue;

    // Single-column CSV rows may carry a trailing comma; anything beyond one
    // populated column is a format error.
    if (const std::size_t comma = field.find(','); comma != std::string::npos) {
      if (!trim(field.substr(comma + 1)).empty())
        line_error(path, line_no, "expected a single column, found more");
      field = trim(field.substr(0, comma));
    }

    double v = 0.0;
    if (!parse_number(field, v)) {
      if (first_content) {  // header row
        first_content = false;
        continue;
      }
      line_error(path, line_no, "cannot parse '" + field + "' as a number");
    }
    first_content = false;
    if (!std::isfinite(v)) line_error(path, line_no, "value is not finite");
    if (log_transform) {
      if (!(v > 0.0)) line_error(path, line_no, "log transform needs positive values");
      v = std::log(v);
    }
    s.values.push_back(v);
  }
  if (s.values.empty()) throw std::invalid_argument("no observations in " + path);
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

void csv_field(std::ostream& out, const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void csv_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    csv_field(out, row[i]);
  }
  out << "\r\n";
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (path != "-") {
    file.open(path, std::ios::binary);  // binary keeps CRLF as written
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    out = &file;
  }
  csv_row(*out, header);
  for (const auto& row : rows) csv_row(*out, row);
  out->flush();
  if (out->fail()) throw std::runtime_error("failed writing " + path);
}

}  // namespace nvmix
