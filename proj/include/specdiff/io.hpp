#pragma once

#include <filesystem>
#include <string>

#include "specdiff/bayes.hpp"
#include "specdiff/generator.hpp"
#include "specdiff/simulate.hpp"
#include "specdiff/wavelets.hpp"

namespace specdiff::io {

/// shortest 17-significant-digit decimal
std::string fmt(double v);

void write_gridfn_csv(const GridFn& f, const std::filesystem::path& file);
GridFn read_gridfn_csv(const std::filesystem::path& file);

void write_path_csv(const SamplePath& path, const std::filesystem::path& file);
SamplePath read_path_csv(const std::filesystem::path& file, double delta);

void write_matrix_csv(const Eigen::MatrixXd& mat, const std::filesystem::path& file);

/// one CSV per (l,k) plus a JSON manifest listing (l, k, support_lo, support_hi)
void write_basis(const WaveletBasis& basis, const std::filesystem::path& dir);

void write_chain_csv(const Chain& chain, const std::filesystem::path& file);

}  // namespace specdiff::io
