#pragma once

#include <filesystem>
#include <string>

#include "adag/graphs.hpp"
#include "adag/sem.hpp"
#include "adag/types.hpp"

namespace adag::io {

/// Shortest decimal text that round-trips a double exactly.
std::string format_double(double v);

/// Header-less CSV, one row per line, comma separated, full precision.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const BinMatrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// One "i,j,w" line per edge, zero-based indices.
void write_edge_list(const std::filesystem::path& path, const graphs::WeightedAdjacency& adj);

/// Dataset CSV plus a sidecar JSON with noise family, seed and normalized flag.
void write_dataset(const std::filesystem::path& csv_path, const sem::SemDataset& ds);
sem::SemDataset read_dataset(const std::filesystem::path& csv_path);

}  // namespace adag::io
