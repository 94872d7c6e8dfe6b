#include "treepgd/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "treepgd/errors.hpp"

namespace treepgd {

std::vector<double> read_vector(std::istream& in) {
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw DataError("bad numeric line: '" + line + "'");
    }
  }
  return out;
}

std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vector file: " + path);
  return read_vector(in);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_vector(const std::vector<double>& v, std::ostream& out) {
  for (double x : v) out << format_double(x) << '\n';
}

void write_vector_file(const std::vector<double>& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  write_vector(v, out);
}

std::vector<std::vector<double>> read_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DataError("bad CSV cell: '" + cell + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

Dataset read_dataset(const std::string& x_path, const std::string& y_path) {
  std::ifstream xin(x_path);
  if (!xin) throw DataError("cannot open design file: " + x_path);
  auto rows = read_csv_matrix(xin);
  if (rows.empty()) throw DataError("design file is empty: " + x_path);
  const std::size_t p = rows[0].size();
  std::vector<double> X;
  X.reserve(rows.size() * p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != p)
      throw DataError("design row " + std::to_string(i) + " has " +
                      std::to_string(rows[i].size()) + " columns, expected " + std::to_string(p));
    X.insert(X.end(), rows[i].begin(), rows[i].end());
  }
  std::vector<double> y = read_vector_file(y_path);
  if (y.size() != rows.size())
    throw DataError("design has " + std::to_string(rows.size()) + " rows but response has " +
                    std::to_string(y.size()));
  return Dataset(static_cast<int>(rows.size()), static_cast<int>(p), std::move(X), std::move(y));
}

}  // namespace treepgd
