#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lmpivot::csv {

/// RFC 4180 field quoting: quoted only when it contains a comma, quote, CR or LF.
std::string quote(std::string_view field);

/// Shortest decimal form that round-trips the double.
std::string format_double(double v);

void write_header_comments(std::ostream& os,
                           const std::vector<std::pair<std::string, std::string>>& kv);
void write_row(std::ostream& os, const std::vector<std::string>& fields);

/// Splits one CSV record, honouring quoted fields.
std::vector<std::string> split_record(std::string_view line);

/// Reads a numeric column from a CSV stream. Lines starting with '#' and blank lines
/// are skipped; the first remaining line is the header. Uses column `column` when
/// present, otherwise the first column. Throws ParameterDomainError on bad input.
std::vector<double> read_series(std::istream& is, std::string_view column = "x");

}  // namespace lmpivot::csv
