#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace awgsim {

/// Comma-separated table with a provenance comment line and a header row.
/// LF line endings, '.' decimal separator, undefined values as empty fields.
class CsvTable {
public:
    CsvTable(std::string provenance, std::vector<std::string> columns);

    CsvTable& row();
    CsvTable& add(std::string_view text);
    CsvTable& add(const char* text) { return add(std::string_view(text)); }
    CsvTable& add(std::int64_t v);
    CsvTable& add(int v) { return add(static_cast<std::int64_t>(v)); }
    CsvTable& add(double v);
    CsvTable& add(const std::optional<double>& v);
    CsvTable& add(const std::optional<int>& v);
    CsvTable& add(bool v);

    std::size_t rows() const noexcept { return rows_.size(); }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    std::string str() const;

private:
    std::string provenance_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Ten significant digits in %g style, independent of the C locale.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);

} // namespace awgsim
