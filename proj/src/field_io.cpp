#include "levylab/field_io.hpp"

#include "levylab/csv.hpp"

namespace levylab {

void write_field_coefficients(std::ostream& out, const FieldPath& path) {
    std::vector<std::string> header{"t"};
    for (std::size_t j = 0; j < path.components; ++j) header.push_back("X" + std::to_string(j + 1));
    write_csv_header(out, header);
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        CsvRow row;
        row.add(path.times[i]);
        for (const double v : path.row(i)) row.add(v);
        out << row.str() << '\n';
    }
}

void write_jump_ledger(std::ostream& out, const FieldPath& path) {
    write_csv_header(out, {"component", "time", "size", "left_limit"});
    for (const auto& jump : path.jumps) {
        out << CsvRow().add(jump.component + 1).add(jump.time).add(jump.size).add(jump.left_limit).str() << '\n';
    }
}

}  // namespace levylab
