#include "lmpivot/csv.hpp"

#include <charconv>
#include <cmath>

#include "lmpivot/errors.hpp"

namespace lmpivot::csv {

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_header_comments(std::ostream& os,
                           const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) os << "# " << k << '=' << v << "\r\n";
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << quote(fields[i]);
    }
    // RFC 4180 record terminator
    os << "\r\n";
}

std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r' && c != '\n') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<double> read_series(std::istream& is, std::string_view column) {
    std::string line;
    std::vector<std::string> header;
    std::size_t col = 0;
    std::vector<double> values;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_record(line);
        if (header.empty()) {
            header = fields;
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == column) col = i;
            continue;
        }
        if (col >= fields.size())
            throw ParameterDomainError("missing column on line " + std::to_string(line_no));
        const auto& f = fields[col];
        double v = 0.0;
        const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
        if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || !std::isfinite(v))
            throw ParameterDomainError("non-numeric value '" + f + "' on line " + std::to_string(line_no));
        values.push_back(v);
    }
    return values;
}

}  // namespace lmpivot::csv
