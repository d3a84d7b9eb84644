#ifndef L1PCA_IO_HPP
#define L1PCA_IO_HPP

// File formats: CSV matrices (one matrix row per line, '#' comments),
// 8-bit PGM images (P2 and P5), and CSV report tables.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "l1pca/numerics.hpp"

namespace l1pca::io {

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// 17 significant digits, enough for an exact text round trip.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_cell(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value))
    throw FormatError("line " + std::to_string(line) + ": cannot parse '" + std::string(cell) + "' as a finite number");
  return value;
}

}  // namespace detail

/// Reads a D x N matrix: one row per line, comma separated, blank lines and
/// lines starting with '#' ignored.
inline Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = t.find(',', start);
      row.push_back(detail::parse_cell(t.substr(start, comma - start), line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                        " columns, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("matrix file contains no rows");
  Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return M;
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_matrix_csv(in);
}

inline void write_matrix_csv(std::ostream& out, const Matrix& M) {
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
}

inline void write_matrix_csv(const std::string& path, const Matrix& M) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_matrix_csv(out, M);
}

/// CSV table with a header row; cells are strings or doubles.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
    rows_.push_back(cells);
    return *this;
  }
  CsvTable& row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    for (double c : cells) s.push_back(format_double(c));
    return row(s);
  }

  void write(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }
  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    write(out);
  }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// 8-bit grayscale image, row-major.
struct GrayImage {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t& at(Index r, Index c) { return pixels[static_cast<std::size_t>(r * cols + c)]; }
  std::uint8_t at(Index r, Index c) const { return pixels[static_cast<std::size_t>(r * cols + c)]; }
};

namespace detail {

// Next whitespace-separated PGM header token, skipping '#' comments.
inline std::string pgm_token(std::istream& in) {
  std::string tok;
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string rest;
      std::getline(in, rest);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(ch);
  }
  if (tok.empty()) throw FormatError("PGM: unexpected end of header");
  return tok;
}

inline long pgm_number(std::istream& in) {
  const std::string tok = pgm_token(in);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0) throw FormatError("PGM: bad number '" + tok + "'");
  return v;
}

}  // namespace detail

inline GrayImage read_pgm(std::istream& in) {
  const std::string magic = detail::pgm_token(in);
  if (magic != "P2" && magic != "P5") throw FormatError("PGM: unsupported magic '" + magic + "'");
  GrayImage img;
  img.cols = detail::pgm_number(in);
  img.rows = detail::pgm_number(in);
  const long maxval = detail::pgm_number(in);
  if (maxval != 255) throw FormatError("PGM: only maxval 255 is supported");
  if (img.rows <= 0 || img.cols <= 0) throw FormatError("PGM: empty image");
  img.pixels.resize(static_cast<std::size_t>(img.rows * img.cols));
  if (magic == "P5") {
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) throw FormatError("PGM: truncated pixel data");
  } else {
    for (auto& p : img.pixels) {
      const long v = detail::pgm_number(in);
      if (v > 255) throw FormatError("PGM: pixel value above maxval");
      p = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

inline GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_pgm(in);
}

inline void write_pgm(std::ostream& out, const GrayImage& img, bool binary = true) {
  out << (binary ? "P5" : "P2") << '\n' << img.cols << ' ' << img.rows << "\n255\n";
  if (binary) {
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    return;
  }
  for (Index r = 0; r < img.rows; ++r) {
    for (Index c = 0; c < img.cols; ++c) out << (c ? " " : "") << static_cast<int>(img.at(r, c));
    out << '\n';
  }
}

inline void write_pgm(const std::string& path, const GrayImage& img, bool binary = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  write_pgm(out, img, binary);
}

}  // namespace l1pca::io

#endif  // L1PCA_IO_HPP
