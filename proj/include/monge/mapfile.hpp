#ifndef MONGE_MAPFILE_HPP
#define MONGE_MAPFILE_HPP

#include <filesystem>
#include <string>
#include <variant>

#include "monge/convmap.hpp"
#include "monge/mapping.hpp"

namespace monge {

// Binary map files, all integers and doubles little-endian:
//   linear:   "LMM1" u64 dim, f64 alpha, m1[dim], m2[dim], A[dim*dim] row-major
//   spectral: "SMM1" u64 rows, u64 cols, f64 alpha, response[N], mean1[N], mean2[N]

using AnyMap = std::variant<LinearMongeMap, SpectralMongeMap>;

std::string encode_map(const LinearMongeMap& map);
std::string encode_map(const SpectralMongeMap& map);
AnyMap decode_map(const std::string& bytes);

void save_map(const AnyMap& map, const std::filesystem::path& path);
AnyMap load_map(const std::filesystem::path& path);

}  // namespace monge

#endif  // MONGE_MAPFILE_HPP
