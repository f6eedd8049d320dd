#pragma once

#include <charconv>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace levylab {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Minimal CSV row builder. Fields are never quoted: every column written by
/// this library is numeric or a fixed identifier.
class CsvRow {
public:
    CsvRow& add(double v) { return add_text(format_number(v)); }
    CsvRow& add(std::size_t v) { return add_text(std::to_string(v)); }
    CsvRow& add(int v) { return add_text(std::to_string(v)); }
    CsvRow& add(bool v) { return add_text(v ? "1" : "0"); }
    CsvRow& add(std::string_view v) { return add_text(std::string(v)); }
    CsvRow& add(const char* v) { return add_text(v); }

    std::string str() const { return line_; }

private:
    CsvRow& add_text(const std::string& s) {
        if (!first_) line_ += ',';
        line_ += s;
        first_ = false;
        return *this;
    }
    std::string line_;
    bool first_ = true;
};

inline void write_csv_header(std::ostream& out, const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
}

}  // namespace levylab
