#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacobi/specfun.hpp"

namespace jacobi::cli {

struct Table {
    std::string x_name;  // "t" or "lambda"
    std::vector<double> x;
    std::vector<cplx> y;
};

// Reads `<x_name>,re,im` data; '#' lines are comments. Throws SchemaError.
Table read_samples(const std::filesystem::path& path, const std::string& x_name);

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_number(double v);

// Values at `nodes` from samples of an even function on the half-line: exact
// copy when the abscissae coincide, cubic Lagrange otherwise, zero beyond the
// last sample.
std::vector<cplx> resample(const Table& t, const std::vector<double>& nodes);

// Writes through a temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string hex64(std::uint64_t v);

}  // namespace jacobi::cli
