#include "rodimpact/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "rodimpact/errors.hpp"

namespace rodimpact {

std::string format_double(double value) {
    // std::to_chars with no precision argument emits the shortest decimal
    // that parses back to exactly this binary64 value.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void CsvTable::validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != header.size())
            throw ValidationError("CSV row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " cells, header has " +
                                  std::to_string(header.size()));
    }
}

void write_csv(std::ostream& os, const CsvTable& table) {
    table.validate();
    os << "# " << table.schema << '\n';
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) os << ',';
        os << table.header[c];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << row[c].text;
        }
        os << '\n';
    }
}

std::string to_csv_string(const CsvTable& table) {
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
}

std::string to_aligned_text(const CsvTable& table) {
    table.validate();
    const std::size_t n_cols = table.header.size();
    std::vector<std::size_t> width(n_cols, 1);
    auto cell_text = [](const std::string& s) -> const std::string& {
        static const std::string dash = "-";
        return s.empty() ? dash : s;
    };
    for (std::size_t c = 0; c < n_cols; ++c)
        width[c] = std::max(width[c], table.header[c].size());
    for (const auto& row : table.rows)
        for (std::size_t c = 0; c < n_cols; ++c)
            width[c] = std::max(width[c], cell_text(row[c].text).size());

    std::ostringstream os;
    auto emit_row = [&](auto&& get) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            const std::string& s = get(c);
            os << s << std::string(width[c] - s.size(), ' ');
            os << (c + 1 < n_cols ? "  " : "\n");
        }
    };
    emit_row([&](std::size_t c) -> const std::string& { return table.header[c]; });
    for (const auto& row : table.rows)
        emit_row([&](std::size_t c) -> const std::string& { return cell_text(row[c].text); });
    return os.str();
}

}  // namespace rodimpact
