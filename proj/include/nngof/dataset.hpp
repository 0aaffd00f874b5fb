#pragma once

#include <string>
#include <vector>

#include "nngof/sample.hpp"

namespace nngof {

// Numeric dataset parsed from a CSV file with a header row. Rows containing
// missing values in the selected columns are dropped (and counted); any other
// non-numeric cell is an error.
struct Dataset {
    std::vector<std::string> column_names;
    Matrix values;  // n x m
    std::string source_path;
    Index dropped_rows = 0;

    Index n() const { return values.rows(); }
    Index m() const { return values.cols(); }

    Sample as_sample() const { return Sample(values); }
};

// Parse `path`, keeping `columns` (all columns when empty) in the order
// given. Recognized missing-value markers: empty cell, NA, N/A, NaN, nan,
// na, null, NULL.
Dataset ingest_csv(const std::string& path, const std::vector<std::string>& columns = {});

// Split a comma-separated CSV line, honoring double quotes.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace nngof
