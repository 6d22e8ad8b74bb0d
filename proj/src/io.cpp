#include "lexo/io.hpp"

#include "lexo/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <stdexcept>

#ifndef LEXO_SOURCE_DATA_DIR
#define LEXO_SOURCE_DATA_DIR "data"
#endif

namespace lexo {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

} // namespace

RecordReader::RecordReader(std::istream& in, std::optional<std::size_t> column) : in_(in), column_(column) {
    if (column_ && *column_ == 0) throw std::invalid_argument("columns are numbered from 1");
}

std::optional<StreamRecord> RecordReader::next() {
    while (std::getline(in_, buffer_)) {
        ++line_;
        const std::string_view line = trim(buffer_);
        if (line.empty()) continue;

        const auto fields = split(line, ',');
        const std::size_t index = column_ ? *column_ - 1 : fields.size() - 1;
        if (index >= fields.size()) {
            throw DataError("record has " + std::to_string(fields.size()) + " columns", line_);
        }
        const auto value = parse_double(fields[index]);
        if (!value) {
            if (line_ == 1) continue; // header
            throw DataError("malformed value '" + std::string(trim(fields[index])) + "'", line_);
        }
        if (!std::isfinite(*value)) throw DataError("non-finite value", line_);

        StreamRecord record;
        record.value = *value;
        if (index != 0) record.label = std::string(trim(fields.front()));
        return record;
    }
    return std::nullopt;
}

std::vector<StreamRecord> read_records(std::istream& in, std::optional<std::size_t> column) {
    RecordReader reader(in, column);
    std::vector<StreamRecord> records;
    while (auto r = reader.next()) records.push_back(std::move(*r));
    return records;
}

std::vector<double> returns_transform(std::span<const double> closing_prices) {
    if (closing_prices.size() < 2) throw DataError("returns need at least two prices", closing_prices.size());
    ReturnsStream stream;
    std::vector<double> out;
    out.reserve(closing_prices.size() - 1);
    for (double p : closing_prices) {
        if (auto r = stream.push(p)) out.push_back(*r);
    }
    return out;
}

std::optional<double> ReturnsStream::push(double price) {
    ++index_;
    if (!(price > 0.0) || !std::isfinite(price)) throw DataError("closing price must be positive", index_);
    std::optional<double> out;
    if (previous_) out = price / *previous_ - 1.0;
    previous_ = price;
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    std::size_t position = 0;
    for (const auto field : split(text, ',')) {
        ++position;
        const auto v = parse_double(field);
        if (!v) throw DataError("malformed number '" + std::string(trim(field)) + "'", position);
        out.push_back(*v);
    }
    return out;
}

std::filesystem::path bundled_data_path(std::string_view file_name) {
    if (const char* dir = std::getenv("LEXO_DATA_DIR"); dir && *dir) return std::filesystem::path(dir) / file_name;
    return std::filesystem::path(LEXO_SOURCE_DATA_DIR) / file_name;
}

std::vector<double> load_coal_mine_counts() {
    const auto path = bundled_data_path("coal_mine.csv");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<double> counts;
    for (const auto& r : read_records(in)) counts.push_back(r.value);
    return counts;
}

} // namespace lexo
