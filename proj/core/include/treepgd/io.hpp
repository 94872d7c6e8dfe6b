#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "treepgd/loss.hpp"

namespace treepgd {

// Plain decimal text, one value per line. Written with enough digits to
// round-trip doubles exactly.
std::vector<double> read_vector(std::istream& in);
std::vector<double> read_vector_file(const std::string& path);
void write_vector(const std::vector<double>& v, std::ostream& out);
void write_vector_file(const std::vector<double>& v, const std::string& path);

// CSV design matrix (one comma-separated row per line) plus a response file.
std::vector<std::vector<double>> read_csv_matrix(std::istream& in);
Dataset read_dataset(const std::string& x_path, const std::string& y_path);

std::string format_double(double x);

}  // namespace treepgd
