#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "niid/matrix.hpp"

namespace niid {

enum class MatrixFormat { Csv, Fbin };

[[nodiscard]] MatrixFormat parse_format(std::string_view name);
[[nodiscard]] std::string_view to_string(MatrixFormat format) noexcept;

/// CSV: one datapoint per line, comma separated. A first line containing a
/// non-numeric cell is treated as a header.
[[nodiscard]] FeatureMatrix parse_csv(std::string_view text);
/// Shortest round-trip representation of every value.
[[nodiscard]] std::string format_csv(const FeatureMatrix& data);

/**
 * FBIN layout, all little-endian:
 *   "NIID" | version u8 = 1 | N u64 | F u64 | N*F float32, row-major
 */
[[nodiscard]] FeatureMatrix parse_fbin(std::span<const std::byte> bytes);
/// Values are narrowed to float32.
[[nodiscard]] std::vector<std::byte> encode_fbin(const FeatureMatrix& data);

[[nodiscard]] FeatureMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
void write_matrix(const FeatureMatrix& data, const std::filesystem::path& path,
                  MatrixFormat format);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::byte> contents);
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace niid
