#include "adag/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace adag::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  // round-trippable: try increasing precision until the value reads back
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const BinMatrix& m) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged CSV: " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty CSV: " + path.string());
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_edge_list(const std::filesystem::path& path,
                     const graphs::WeightedAdjacency& adj) {
  auto out = open_out(path);
  for (int i = 0; i < adj.d; ++i)
    for (int j = 0; j < adj.d; ++j)
      if (adj.data(i, j) != 0.0)
        out << i << ',' << j << ',' << format_double(adj.data(i, j)) << '\n';
}

void write_dataset(const std::filesystem::path& csv_path, const sem::SemDataset& ds) {
  write_matrix_csv(csv_path, ds.X);
  nlohmann::json meta = {
      {"noise", sem::to_string(ds.noise)},
      {"seed", ds.seed},
      {"normalized", ds.normalized},
      {"n", ds.n},
  };
  auto meta_path = csv_path;
  meta_path.replace_extension(".json");
  auto out = open_out(meta_path);
  out << meta.dump(2) << '\n';
}

sem::SemDataset read_dataset(const std::filesystem::path& csv_path) {
  sem::SemDataset ds;
  ds.X = read_matrix_csv(csv_path);
  ds.n = static_cast<int>(ds.X.rows());
  auto meta_path = csv_path;
  meta_path.replace_extension(".json");
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    nlohmann::json meta = nlohmann::json::parse(in);
    if (meta.contains("noise")) ds.noise = sem::noise_from_string(meta["noise"]);
    if (meta.contains("seed")) ds.seed = meta["seed"].get<std::uint64_t>();
    if (meta.contains("normalized")) ds.normalized = meta["normalized"].get<bool>();
  }
  return ds;
}

}  // namespace adag::io
