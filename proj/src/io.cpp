#include "newsmarket/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace newsmarket {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string at_line(const std::string& source, int line) { return source + ":" + std::to_string(line) + ": "; }

}  // namespace

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Series read_series_csv(std::istream& in, const std::string& source) {
    Series s;
    std::string raw;
    int line_no = 0;
    bool have_first = false;
    bool header_allowed = true;
    long expected = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line);
        double idx = 0.0, value = 0.0;
        const bool idx_ok = cells.size() >= 1 && parse_double(cells[0], idx);
        if (!idx_ok && header_allowed) {
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        if (cells.size() != 2) throw std::invalid_argument(at_line(source, line_no) + "expected 2 columns, found " + std::to_string(cells.size()));
        if (!idx_ok || std::floor(idx) != idx) throw std::invalid_argument(at_line(source, line_no) + "date_index must be an integer");
        if (!parse_double(cells[1], value)) throw std::invalid_argument(at_line(source, line_no) + "malformed value '" + cells[1] + "'");
        if (!std::isfinite(value)) throw std::invalid_argument(at_line(source, line_no) + "non-finite value");
        const long index = static_cast<long>(idx);
        if (!have_first) {
            s.start_index = index;
            expected = index;
            have_first = true;
        }
        if (index != expected) throw std::invalid_argument(at_line(source, line_no) + "date_index " + std::to_string(index) + " breaks the daily grid (expected " + std::to_string(expected) + ")");
        ++expected;
        s.values.push_back(value);
    }
    if (s.values.empty()) throw std::invalid_argument(source + ": no data rows");
    return s;
}

Series read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_series_csv(in, path);
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::invalid_argument("no column named '" + name + "'");
}

std::vector<double> Table::column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
}

Table read_table_csv(std::istream& in, const std::string& source) {
    Table t;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line);
        if (t.columns.empty()) {
            t.columns = cells;
            continue;
        }
        if (cells.size() != t.columns.size()) throw std::invalid_argument(at_line(source, line_no) + "expected " + std::to_string(t.columns.size()) + " columns, found " + std::to_string(cells.size()));
        std::vector<double> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!parse_double(cells[i], row[i])) throw std::invalid_argument(at_line(source, line_no) + "malformed value '" + cells[i] + "'");
            if (!std::isfinite(row[i])) throw std::invalid_argument(at_line(source, line_no) + "non-finite value");
        }
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw std::invalid_argument(source + ": missing header row");
    return t;
}

Table read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_table_csv(in, path);
}

void CsvWriter::comment(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out_ << "# " << line << '\n';
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
}

void write_series_csv(std::ostream& out, const Series& s, const std::string& value_name,
                      const std::vector<std::string>& comments) {
    CsvWriter w(out);
    for (const auto& c : comments) w.comment(c);
    w.header({"date_index", value_name});
    for (std::size_t i = 0; i < s.size(); ++i) w.row({s.time(i), s[i]});
}

}  // namespace newsmarket
