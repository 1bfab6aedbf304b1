#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace camp::csv {

/// One data row and the 1-based line number it came from.
struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// Splits one line on commas. Fields may be double-quoted; "" inside quotes is a
/// literal quote. A trailing '\r' is dropped.
[[nodiscard]] std::vector<std::string> split_line(std::string_view line);

/// Reads a header-led CSV document. The header must equal `expected_header`
/// exactly; every data row must have `expected_header.size()` fields unless
/// `min_fields` allows shorter rows (missing trailing fields become empty).
/// Blank lines are skipped.
[[nodiscard]] std::vector<Row> read(std::istream& in, const std::string& source,
                                    const std::vector<std::string>& expected_header,
                                    std::size_t min_fields = 0);

[[nodiscard]] std::string join(const std::vector<std::string>& fields);

/// Opens `path` for reading or throws IoError.
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace camp::csv
