#pragma once

#include <string>
#include <vector>

#include "gibbsinit/objective.hpp"

namespace gibbsinit {

// Shortest decimal that round-trips to the same double; all persisted numbers
// go through this so repeated runs are byte-identical.
std::string format_double(double v);
double parse_double(const std::string& s);

// CSV: one row per point, comma separated; header presence is flag-controlled
// (written header is coord_0..coord_{d-1}).
Dataset read_dataset_csv(const std::string& path, bool header);
void write_dataset_csv(const std::string& path, const Dataset& d, bool header);

// Binary column format: little-endian, magic "SSDS", u32 n, u32 dim, then
// n*dim float64 values.
Dataset read_dataset_ssds(const std::string& path);
void write_dataset_ssds(const std::string& path, const Dataset& d);

// Small shared helpers for the CSV writers elsewhere in the artifact.
std::string join_csv_row(const std::vector<double>& row);
std::vector<std::string> split_csv_row(const std::string& line);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gibbsinit
