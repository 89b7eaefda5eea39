#include "shide/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>

namespace shide::io {

namespace {

bool parse_double(const std::string& text, double& out)
{
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin)
    return false;
  while (*end == ' ' || *end == '\t' || *end == '\r')
    ++end;
  return *end == '\0' && std::isfinite(out);
}

std::string trim(const std::string& line)
{
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
}

} // namespace

std::vector<double> read_data(std::istream& in, const std::string& source_name)
{
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string token = trim(line);
    if (token.empty())
      continue;
    double v = 0.0;
    if (!parse_double(token, v)) {
      if (first_content_line) {
        first_content_line = false; // header line
        continue;
      }
      throw std::runtime_error(source_name + ": non-numeric value on line " +
                               std::to_string(line_no));
    }
    first_content_line = false;
    values.push_back(v);
  }
  if (values.size() < 2)
    throw std::runtime_error(source_name + ": need at least 2 values, got " +
                             std::to_string(values.size()));
  return values;
}

std::vector<double> read_data_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open input file: " + path);
  return read_data(in, path);
}

std::string format_g17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write_file(const std::string& path, const std::string& content)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open output file: " + tmp);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("failed writing output file: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("failed to move output into place: " + path);
  }
}

} // namespace shide::io
