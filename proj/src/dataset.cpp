#include "nngof/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "nngof/errors.hpp"

namespace nngof {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_na_marker(const std::string& cell) {
    static const std::unordered_set<std::string> markers = {"",   "NA",   "N/A", "NaN",
                                                            "nan", "na", "null", "NULL"};
    return markers.count(cell) > 0;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"') {
            in_quotes = !in_quotes;
        } else if (c == ',' && !in_quotes) {
            cells.push_back(trim(cell));
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

Dataset ingest_csv(const std::string& path, const std::vector<std::string>& columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("ingest_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("ingest_csv: empty file " + path);
    const std::vector<std::string> header = split_csv_line(line);

    std::vector<Index> selected;
    std::vector<std::string> names = columns;
    if (names.empty()) names = header;
    for (const auto& name : names) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw DataError("ingest_csv: unknown column '" + name + "' in " + path);
        selected.push_back(static_cast<Index>(it - header.begin()));
    }

    std::vector<std::vector<double>> rows;
    Index dropped = 0;
    Index line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        std::vector<double> row(selected.size());
        bool has_na = false;
        for (std::size_t k = 0; k < selected.size(); ++k) {
            const Index col = selected[k];
            if (col >= static_cast<Index>(cells.size())) {
                has_na = true;  // ragged short row: treat trailing cells as missing
                break;
            }
            const std::string& cell = cells[static_cast<std::size_t>(col)];
            if (is_na_marker(cell)) {
                has_na = true;
                break;
            }
            try {
                std::size_t pos = 0;
                row[k] = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw DataError("ingest_csv: non-numeric cell '" + cell + "' at line " +
                                std::to_string(line_no) + " column '" + names[k] + "'");
            }
        }
        if (has_na) {
            ++dropped;
            continue;
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw DataError("ingest_csv: no usable rows in " + path);

    Dataset ds;
    ds.column_names = names;
    ds.source_path = path;
    ds.dropped_rows = dropped;
    ds.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(names.size()));
    for (Index i = 0; i < ds.values.rows(); ++i)
        for (Index j = 0; j < ds.values.cols(); ++j)
            ds.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return ds;
}

}  // namespace nngof
