#include "niid/io.hpp"

#include <unistd.h>

#include <bit>
#include <cmath>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "niid/errors.hpp"

namespace niid {
namespace {

constexpr char kMagic[4] = {'N', 'I', 'I', 'D'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 1 + 8 + 8;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_cell(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return res.ec == std::errc{} && res.ptr == cell.data() + cell.size();
}

// Returns false at the first cell that is not a number.
bool parse_line(std::string_view line, std::vector<double>& cells, std::size_t& bad_column) {
  cells.clear();
  std::size_t col = 0;
  for (;;) {
    const auto comma = line.find(',');
    double value;
    if (!parse_cell(line.substr(0, comma), value)) {
      bad_column = col;
      return false;
    }
    cells.push_back(value);
    if (comma == std::string_view::npos) return true;
    line.remove_prefix(comma + 1);
    ++col;
  }
}

std::uint64_t read_u64_le(const std::byte* p) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | std::to_integer<std::uint64_t>(p[b]);
  return v;
}

void push_u64_le(std::vector<std::byte>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::byte>((v >> (8 * b)) & 0xff));
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

}  // namespace

MatrixFormat parse_format(std::string_view name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "fbin") return MatrixFormat::Fbin;
  throw InvalidArgument("unknown format '" + std::string(name) + "' (expected csv or fbin)");
}

std::string_view to_string(MatrixFormat format) noexcept {
  return format == MatrixFormat::Fbin ? "fbin" : "csv";
}

FeatureMatrix parse_csv(std::string_view text) {
  std::vector<double> values;
  std::vector<double> cells;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first_content_line = true;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty()) continue;

    std::size_t bad_column = 0;
    const bool numeric = parse_line(line, cells, bad_column);
    if (first_content_line) {
      first_content_line = false;
      if (!numeric) continue;  // header
    }
    if (!numeric) {
      throw DataError("non-numeric cell at line " + std::to_string(line_no) + ", column " +
                      std::to_string(bad_column + 1));
    }
    if (rows == 0) {
      cols = cells.size();
    } else if (cells.size() != cols) {
      throw DataError("ragged rows: line " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " values, expected " + std::to_string(cols));
    }
    values.insert(values.end(), cells.begin(), cells.end());
    ++rows;
  }
  return FeatureMatrix(rows, cols, std::move(values));
}

std::string format_csv(const FeatureMatrix& data) {
  std::string out;
  out.reserve(data.rows() * data.cols() * 12);
  char buf[32];
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (j > 0) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, data(i, j));
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

FeatureMatrix parse_fbin(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderBytes) throw DataError("short FBIN file: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw DataError("bad FBIN magic (expected NIID)");
  const auto version = std::to_integer<std::uint8_t>(bytes[4]);
  if (version != kVersion) {
    throw DataError("unsupported FBIN version " + std::to_string(version));
  }
  const std::uint64_t n = read_u64_le(bytes.data() + 5);
  const std::uint64_t f = read_u64_le(bytes.data() + 13);
  if (n == 0) throw DataError("empty dataset");
  if (f == 0) throw DataError("datapoints need at least one feature");
  const std::uint64_t payload_limit = (bytes.size() - kHeaderBytes) / 4;
  if (n > payload_limit || f > payload_limit / n) throw DataError("short FBIN file: truncated payload");
  const std::size_t count = n * f;
  if (bytes.size() != kHeaderBytes + 4 * count) {
    throw DataError("FBIN payload size does not match header (" + std::to_string(n) + " x " +
                    std::to_string(f) + ")");
  }
  std::vector<double> values(count);
  const std::byte* p = bytes.data() + kHeaderBytes;
  for (std::size_t idx = 0; idx < count; ++idx, p += 4) {
    std::uint32_t raw = 0;
    for (int b = 3; b >= 0; --b) raw = (raw << 8) | std::to_integer<std::uint32_t>(p[b]);
    values[idx] = static_cast<double>(std::bit_cast<float>(raw));
  }
  return FeatureMatrix(n, f, std::move(values));
}

std::vector<std::byte> encode_fbin(const FeatureMatrix& data) {
  std::vector<std::byte> out;
  out.reserve(kHeaderBytes + 4 * data.values().size());
  for (const char c : kMagic) out.push_back(static_cast<std::byte>(c));
  out.push_back(static_cast<std::byte>(kVersion));
  push_u64_le(out, data.rows());
  push_u64_le(out, data.cols());
  for (const double v : data.values()) {
    const auto narrowed = static_cast<float>(v);
    if (!std::isfinite(narrowed)) throw DataError("value does not fit in float32");
    const auto raw = std::bit_cast<std::uint32_t>(narrowed);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::byte>((raw >> (8 * b)) & 0xff));
  }
  return out;
}

FeatureMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  const auto bytes = read_file(path);
  if (format == MatrixFormat::Fbin) return parse_fbin(bytes);
  return parse_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_matrix(const FeatureMatrix& data, const std::filesystem::path& path,
                  MatrixFormat format) {
  if (format == MatrixFormat::Fbin) {
    write_file_atomic(path, encode_fbin(data));
  } else {
    write_file_atomic(path, format_csv(data));
  }
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::byte> contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(contents.data()),
              static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  write_file_atomic(path, std::as_bytes(std::span<const char>(contents.data(), contents.size())));
}

}  // namespace niid
