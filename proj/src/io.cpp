#include "gibbsinit/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gibbsinit/error.hpp"

// SSDS is little-endian on disk; the readers below rely on a matching host.
static_assert(std::endian::native == std::endian::little);

namespace gibbsinit {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc())
    throw Error("parse-error", "not a number: '" + s + "'");
  return v;
}

std::string join_csv_row(const std::vector<double>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += format_double(row[i]);
  }
  return out;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io-error", "cannot open for writing: " + path);
  f << content;
  if (!f) throw Error("io-error", "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("io-error", "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Dataset read_dataset_csv(const std::string& path, bool header) {
  std::ifstream f(path);
  if (!f) throw Error("io-error", "cannot open for reading: " + path);
  Dataset d;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (first && header) {
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) continue;
    auto cells = split_csv_row(line);
    if (d.dim == 0) d.dim = (int)cells.size();
    if ((int)cells.size() != d.dim)
      throw Error("dim-mismatch",
                  path + " line " + std::to_string(lineno) + ": expected " +
                      std::to_string(d.dim) + " columns, got " + std::to_string(cells.size()));
    for (auto& c : cells) d.values.push_back(parse_double(c));
  }
  return d;
}

void write_dataset_csv(const std::string& path, const Dataset& d, bool header) {
  std::string out;
  if (header) {
    for (int i = 0; i < d.dim; ++i) {
      if (i) out += ',';
      out += "coord_" + std::to_string(i);
    }
    out += '\n';
  }
  std::vector<double> row(d.dim);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double* r = d.row(i);
    row.assign(r, r + d.dim);
    out += join_csv_row(row);
    out += '\n';
  }
  write_text_file(path, out);
}

Dataset read_dataset_ssds(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("io-error", "cannot open for reading: " + path);
  char magic[4];
  if (!f.read(magic, 4) || std::memcmp(magic, "SSDS", 4) != 0)
    throw Error("bad-magic", path + " is not an SSDS file");
  std::uint32_t n = 0, dim = 0;
  if (!f.read(reinterpret_cast<char*>(&n), 4) || !f.read(reinterpret_cast<char*>(&dim), 4))
    throw Error("truncated-file", path + ": missing header counts");
  Dataset d;
  d.dim = (int)dim;
  d.values.resize((std::size_t)n * dim);
  if (!d.values.empty() &&
      !f.read(reinterpret_cast<char*>(d.values.data()), (std::streamsize)(d.values.size() * 8)))
    throw Error("truncated-file", path + ": expected " + std::to_string((std::size_t)n * dim) +
                                      " float64 values");
  return d;
}

void write_dataset_ssds(const std::string& path, const Dataset& d) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io-error", "cannot open for writing: " + path);
  f.write("SSDS", 4);
  std::uint32_t n = (std::uint32_t)d.size(), dim = (std::uint32_t)d.dim;
  f.write(reinterpret_cast<const char*>(&n), 4);
  f.write(reinterpret_cast<const char*>(&dim), 4);
  if (!d.values.empty())
    f.write(reinterpret_cast<const char*>(d.values.data()),
            (std::streamsize)(d.values.size() * 8));
  if (!f) throw Error("io-error", "write failed: " + path);
}

}  // namespace gibbsinit
