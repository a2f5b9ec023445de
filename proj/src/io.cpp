#include "specdiff/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace specdiff::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_gridfn_csv(const GridFn& f, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << "x,value\n";
  for (int i = 0; i < f.size(); ++i)
    out << fmt(f.grid().point(i)) << ',' << fmt(f[i]) << '\n';
}

GridFn read_gridfn_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  const int M = static_cast<int>(values.size());
  int m = 0;
  while ((1 << m) + 1 < M) ++m;
  if ((1 << m) + 1 != M)
    throw std::runtime_error("read_gridfn_csv: not a dyadic grid in " + file.string());
  return GridFn(Grid{m}, std::move(values));
}

void write_path_csv(const SamplePath& path, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << "index,time,value\n";
  for (size_t i = 0; i < path.values.size(); ++i)
    out << i << ',' << fmt(i * path.delta) << ',' << fmt(path.values[i]) << '\n';
}

SamplePath read_path_csv(const std::filesystem::path& file, double delta) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::getline(in, line);
  SamplePath p;
  p.delta = delta;
  p.sampler = "file";
  while (std::getline(in, line)) {
    const auto last = line.rfind(',');
    if (last == std::string::npos) continue;
    p.values.push_back(std::stod(line.substr(last + 1)));
  }
  return p;
}

void write_matrix_csv(const Eigen::MatrixXd& mat, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    for (Eigen::Index j = 0; j < mat.cols(); ++j)
      out << (j ? "," : "") << fmt(mat(i, j));
    out << '\n';
  }
}

void write_basis(const WaveletBasis& basis, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  for (int l = basis.coarsest_level() - 1; l <= basis.finest_level(); ++l)
    for (int k = 0; k < basis.count(l); ++k) {
      std::ostringstream name;
      name << "psi_" << l << "_" << k << ".csv";
      write_gridfn_csv(basis.fn(l, k), dir / name.str());
      const auto [lo, hi] = basis.support(l, k);
      manifest.push_back({{"l", l},
                          {"k", k},
                          {"support_lo", lo},
                          {"support_hi", hi},
                          {"file", name.str()}});
    }
  std::ofstream out(dir / "index.json");
  out << manifest.dump(2) << '\n';
}

void write_chain_csv(const Chain& chain, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << "state,log_post";
  if (!chain.states.empty()) {
    for (size_t j = 0; j < chain.states[0].u.size(); ++j) out << ",u" << j;
    for (size_t j = 0; j < chain.states[0].u_bar.size(); ++j) out << ",ubar" << j;
  }
  out << '\n';
  for (size_t i = 0; i < chain.states.size(); ++i) {
    out << i << ',' << fmt(chain.log_posts[i]);
    for (double v : chain.states[i].u) out << ',' << fmt(v);
    for (double v : chain.states[i].u_bar) out << ',' << fmt(v);
    out << '\n';
  }
}

}  // namespace specdiff::io
