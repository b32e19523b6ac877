#include "awgsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace awgsim {

CsvTable::CsvTable(std::string provenance, std::vector<std::string> columns)
    : provenance_(std::move(provenance)), columns_(std::move(columns))
{
}

CsvTable& CsvTable::row()
{
    if (!rows_.empty() && rows_.back().size() != columns_.size())
        throw std::logic_error("CSV row has " + std::to_string(rows_.back().size()) + " fields, expected "
                               + std::to_string(columns_.size()));
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::add(std::string_view text)
{
    if (rows_.empty())
        throw std::logic_error("CSV field added before row()");
    rows_.back().emplace_back(text);
    return *this;
}

CsvTable& CsvTable::add(std::int64_t v)
{
    return add(std::string_view(std::to_string(v)));
}

CsvTable& CsvTable::add(double v)
{
    return add(std::string_view(format_double(v)));
}

CsvTable& CsvTable::add(const std::optional<double>& v)
{
    return v ? add(*v) : add(std::string_view{});
}

CsvTable& CsvTable::add(const std::optional<int>& v)
{
    return v ? add(static_cast<std::int64_t>(*v)) : add(std::string_view{});
}

CsvTable& CsvTable::add(bool v)
{
    return add(std::string_view(v ? "1" : "0"));
}

std::string CsvTable::str() const
{
    std::string out;
    if (!provenance_.empty())
        out += "# " + provenance_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i)
            out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
        if (r.size() != columns_.size())
            throw std::logic_error("incomplete CSV row");
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i)
                out += ',';
            out += r[i];
        }
        out += '\n';
    }
    return out;
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (v == 0.0)
        return "0";  // no "-0"
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace awgsim
