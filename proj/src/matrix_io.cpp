#include "linscreen/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace linscreen {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  if (first < last && *first == '+') ++first;  // from_chars rejects a leading +
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc()) {
    throw BadParams("cannot parse numeric field '" + field + "'");
  }
  return v;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadParams("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw BadParams("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw BadParams("ragged rows in '" + path + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw BadParams("empty matrix file '" + path + "'");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
  auto out = open_output(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Vector read_vector_csv(const std::string& path) {
  Matrix m = read_matrix_csv(path);
  if (m.cols() != 1) throw BadParams("'" + path + "' is not a single-column file");
  return m.col(0);
}

void write_vector_csv(const Vector& v, const std::string& path) {
  auto out = open_output(path);
  for (int i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
}

SparseCoefficients read_coefficients_csv(const std::string& path, int p) {
  auto in = open_input(path);
  std::vector<int> support;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2) throw BadParams("coefficient rows must be index,value");
    support.push_back(static_cast<int>(parse_double(fields[0])));
    values.push_back(parse_double(fields[1]));
  }
  return SparseCoefficients(p, std::move(support), std::move(values));
}

void write_coefficients_csv(const SparseCoefficients& beta, const std::string& path) {
  auto out = open_output(path);
  for (std::size_t i = 0; i < beta.support().size(); ++i) {
    out << beta.support()[i] << ',' << format_double(beta.values()[i]) << '\n';
  }
}

}  // namespace linscreen
