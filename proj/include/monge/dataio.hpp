#ifndef MONGE_DATAIO_HPP
#define MONGE_DATAIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "monge/convmap.hpp"
#include "monge/result.hpp"

namespace monge {

/// Images with pixels scaled to [0, 1].
using ImageStack = SignalStack;

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// IDX image file: big-endian magic 0x00000803, count, rows, cols, then
/// unsigned bytes. Gzip-compressed files (1F 8B) are inflated transparently.
ImageStack read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

/// Writes pixels (clamped to [0, 1], scaled by 255 and rounded) as an
/// uncompressed IDX image file.
void write_idx_images(const ImageStack& images, const std::filesystem::path& path);
void write_idx_labels(const std::vector<std::uint8_t>& labels, const std::filesystem::path& path);

inline constexpr const char* kCsvHeader = "experiment,d,n,n_l,trial,metric,value";

/// 17 significant digits with '.' as decimal separator, independent of the
/// global locale.
std::string format_double(double value);

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::string to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

/// Headerless comma-separated samples, one per line.
Matrix read_sample_csv(const std::filesystem::path& path);
void write_sample_csv(const Matrix& rows, const std::filesystem::path& path);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  bool log_x = false;
  bool log_y = false;
  std::string title;
  std::string x_label;
  std::string y_label;
};

std::string render_svg_lines(const std::vector<PlotSeries>& series, const PlotOptions& options);
void write_svg_lines(const std::vector<PlotSeries>& series, const PlotOptions& options,
                     const std::filesystem::path& path);

/// Grid exports for filters: CSV with one image row per line, and plain
/// PGM (P2) with values min-max scaled to 0..255.
void write_grid_csv(const Vector& values, const Shape& shape, const std::filesystem::path& path);
void write_pgm(const Vector& values, const Shape& shape, const std::filesystem::path& path);

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace monge

#endif  // MONGE_DATAIO_HPP
