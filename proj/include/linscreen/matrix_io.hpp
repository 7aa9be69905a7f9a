#pragma once

#include <string>

#include "linscreen/model.hpp"

namespace linscreen {

// CSV conventions: header-free, comma-separated, one matrix row per line.
// Values are written with 17 significant digits so a read-back reproduces
// every double exactly. Coefficient files have two columns `index,value`
// with 1-based indices.

Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const Matrix& m, const std::string& path);

Vector read_vector_csv(const std::string& path);  // single column
void write_vector_csv(const Vector& v, const std::string& path);

SparseCoefficients read_coefficients_csv(const std::string& path, int p);
void write_coefficients_csv(const SparseCoefficients& beta, const std::string& path);

std::string format_double(double v);
double parse_double(const std::string& field);

}  // namespace linscreen
