#pragma once

#include "lexo/conjugate_model.hpp"
#include "lexo/forward_filter.hpp"
#include "lexo/hazard.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lexo {

struct StreamRecord {
    std::string label; // first column when the value is not in it, else empty
    double value = 0.0;
};

/// Line-oriented CSV reader. The value is taken from the last column unless
/// a 1-based column is given. A first line whose value field is not numeric
/// is treated as a header; later malformed lines raise DataError carrying the
/// line number. Blank lines are skipped.
class RecordReader {
public:
    explicit RecordReader(std::istream& in, std::optional<std::size_t> column = std::nullopt);

    std::optional<StreamRecord> next();
    std::size_t line_number() const noexcept { return line_; }

private:
    std::istream& in_;
    std::optional<std::size_t> column_;
    std::size_t line_ = 0;
    std::string buffer_;
};

std::vector<StreamRecord> read_records(std::istream& in, std::optional<std::size_t> column = std::nullopt);

// R_t = p_t / p_{t-1} - 1. Needs at least two prices, all positive; a bad
// price raises DataError with its 1-based index.
std::vector<double> returns_transform(std::span<const double> closing_prices);

// Streaming form of returns_transform: yields nothing for the first price.
class ReturnsStream {
public:
    std::optional<double> push(double price);

private:
    std::optional<double> previous_;
    std::size_t index_ = 0;
};

// Shortest round-trip decimal representation.
std::string format_double(double value);

// Parses "1,2.5,3" style lists.
std::vector<double> parse_number_list(std::string_view text);

// Bundled coal-mining disaster counts (1851..1962), located relative to the
// source tree or through LEXO_DATA_DIR.
std::filesystem::path bundled_data_path(std::string_view file_name);
std::vector<double> load_coal_mine_counts();

} // namespace lexo
