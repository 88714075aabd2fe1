#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddgeo/lti.hpp"

namespace ddgeo::io {

// One row per line, comma separated, '.' decimal. Blank lines are skipped.
// Values are written with round-trip precision.
Mat parse_csv(const std::string& text);
std::string format_csv(const Mat& m);

Mat read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Mat& m);

// {rows, cols, data: flat row-major}
nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

// {ambient_dim, dim, basis: flat row-major}
nlohmann::json subspace_to_json(const Subspace& s);

// [{re, im}, ...]
nlohmann::json zeros_to_json(const std::vector<std::complex<double>>& zeros);

// Directory layout: X.csv, X0.csv, Y.csv, U.csv and manifest.json with
// {n, m, p, T, N, seed}. Files are staged and renamed into place, so a failed
// save leaves no partial directory behind.
void save_experiment(const std::filesystem::path& dir, const ExperimentData& data);
ExperimentData load_experiment(const std::filesystem::path& dir, const Tolerances& tol = {});

// A.csv, B.csv, C.csv
LtiSystem load_system(const std::filesystem::path& dir);
void save_system(const std::filesystem::path& dir, const LtiSystem& sys);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ddgeo::io
