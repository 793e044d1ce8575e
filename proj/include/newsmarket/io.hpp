#pragma once

#include "newsmarket/series.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace newsmarket {

// Full-string parse; accepts nan/inf spellings so callers can report them.
bool parse_double(const std::string& text, double& out);

// Shortest round-trip decimal form. Byte-stable for equal doubles.
std::string format_double(double v);

// Two-column `date_index,value` CSV. Blank lines and `#` comments are
// skipped, a non-numeric first row is taken as a header. Indices must be
// consecutive integers. Errors cite the source line.
Series read_series_csv(std::istream& in, const std::string& source);
Series read_series_csv(const std::string& path);

// Named columns from a CSV with a header row.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};
Table read_table_csv(std::istream& in, const std::string& source);
Table read_table_csv(const std::string& path);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void comment(const std::string& text);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);

private:
    std::ostream& out_;
};

void write_series_csv(std::ostream& out, const Series& s, const std::string& value_name,
                      const std::vector<std::string>& comments);

}  // namespace newsmarket
