#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mogpsa/errors.hpp"

namespace mogpsa::csv {

/// Shortest representation that parses back to the same double.
inline std::string format(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidInput("not a number: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string> split(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

/// Accumulates rows in memory; `save` writes them in one go.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row)
    {
        if (row.size() != header_.size())
            throw InvalidInput("csv row has " + std::to_string(row.size()) + " fields, header has " +
                               std::to_string(header_.size()));
        rows_.push_back(std::move(row));
    }

    std::string str() const
    {
        std::ostringstream os;
        write_line(os, header_);
        for (const auto& r : rows_) write_line(os, r);
        return os.str();
    }

    void save(const std::string& path) const
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open '" + path + "' for writing");
        out << str();
        if (!out) throw IoError("write failed for '" + path + "'");
    }

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    static Table load(const std::string& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open '" + path + "' for reading");
        std::string line;
        if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
        Table t(split(line));
        while (std::getline(in, line)) {
            if (line.empty() || line == "\r") continue;
            try {
                t.add_row(split(line));
            } catch (const InvalidInput& e) {
                throw IoError("'" + path + "': " + e.what());
            }
        }
        return t;
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << fields[i];
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace mogpsa::csv
