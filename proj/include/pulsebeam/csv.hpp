#pragma once

#include "pulsebeam/error.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

namespace pulsebeam::csv {

/// Empty cells stand for values that are not emitted (guarded points).
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal that round-trips to the same double. '.' separator,
/// independent of locale.
inline std::string format_double(double v)
{
    if (!std::isfinite(v))
        throw Error(Errc::validation, "non-finite value cannot be written to CSV");
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        throw Error(Errc::validation, "failed to format double");
    return std::string(buf, ptr);
}

inline std::string to_string(const Table& table)
{
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i)
            out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw Error(Errc::validation, "CSV row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            if (const auto* d = std::get_if<double>(&row[i]))
                out += format_double(*d);
            else if (const auto* s = std::get_if<std::string>(&row[i]))
                out += *s;
        }
        out += '\n';
    }
    return out;
}

/// Writes to a sibling temporary file and renames it over `path`.
inline void write_atomic(const std::string& text, const std::filesystem::path& path)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::io, "cannot open '" + tmp.string() + "' for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out)
            throw Error(Errc::io, "failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(Errc::io, "cannot move output into place at '" + path.string() + "'");
    }
}

inline void write_csv(const Table& table, const std::filesystem::path& path)
{
    write_atomic(to_string(table), path);
}

} // namespace pulsebeam::csv
