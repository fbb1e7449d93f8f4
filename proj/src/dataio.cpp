#include "monge/dataio.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "monge/error.hpp"

namespace monge {
namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  // gzread passes uncompressed files through unchanged.
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<unsigned char> bytes;
  unsigned char buffer[1 << 16];
  for (;;) {
    const int got = gzread(file, buffer, sizeof(buffer));
    if (got < 0) {
      gzclose(file);
      throw Error(ErrorCode::IoError, "read error in " + path.string());
    }
    if (got == 0) break;
    bytes.insert(bytes.end(), buffer, buffer + got);
  }
  gzclose(file);
  return bytes;
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (bytes.size() < offset + 4) {
    throw Error(ErrorCode::TruncatedFile, path.string() + " ends inside the header");
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void append_be32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>(v & 0xFF));
}

void check_magic(std::uint32_t magic, std::uint32_t expected, const std::filesystem::path& path) {
  if (magic != expected) {
    std::ostringstream msg;
    msg << path.string() << ": magic 0x" << std::hex << magic << ", expected 0x" << expected;
    throw Error(ErrorCode::BadMagic, msg.str());
  }
}

std::string optional_field(const std::optional<long>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& context) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(ErrorCode::BadFormat, context + ": cannot parse '" + text + "' as a number");
  }
  return value;
}

long parse_long(const std::string& text, const std::string& context) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::BadFormat, context + ": cannot parse '" + text + "' as an integer");
  }
  return value;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed2(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, ptr);
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move output into " + path.string());
  }
}

ImageStack read_idx_images(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_all(path);
  check_magic(read_be32(bytes, 0, path), kIdxImageMagic, path);
  const std::uint64_t count = read_be32(bytes, 4, path);
  const std::uint64_t rows = read_be32(bytes, 8, path);
  const std::uint64_t cols = read_be32(bytes, 12, path);
  if (count == 0 || rows == 0 || cols == 0) {
    throw Error(ErrorCode::BadFormat, path.string() + " declares an empty image stack");
  }
  const std::uint64_t pixels = count * rows * cols;
  if (bytes.size() < 16 + pixels) {
    throw Error(ErrorCode::TruncatedFile, path.string() + " declares " + std::to_string(count) +
                                              " images but holds fewer pixels");
  }
  Matrix data(static_cast<Index>(count), static_cast<Index>(rows * cols));
  std::size_t offset = 16;
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) data(i, j) = bytes[offset++] / 255.0;
  }
  return ImageStack(Shape{static_cast<Index>(rows), static_cast<Index>(cols)}, std::move(data));
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_all(path);
  check_magic(read_be32(bytes, 0, path), kIdxLabelMagic, path);
  const std::uint64_t count = read_be32(bytes, 4, path);
  if (bytes.size() < 8 + count) {
    throw Error(ErrorCode::TruncatedFile, path.string() + " declares " + std::to_string(count) +
                                              " labels but holds fewer");
  }
  return std::vector<std::uint8_t>(bytes.begin() + 8, bytes.begin() + 8 + static_cast<long>(count));
}

void write_idx_images(const ImageStack& images, const std::filesystem::path& path) {
  std::string out;
  append_be32(out, kIdxImageMagic);
  append_be32(out, static_cast<std::uint32_t>(images.n()));
  append_be32(out, static_cast<std::uint32_t>(images.shape().rows));
  append_be32(out, static_cast<std::uint32_t>(images.shape().cols));
  for (Index i = 0; i < images.data().rows(); ++i) {
    for (Index j = 0; j < images.data().cols(); ++j) {
      const double v = std::clamp(images.data()(i, j), 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  }
  write_file_atomic(path, out);
}

void write_idx_labels(const std::vector<std::uint8_t>& labels, const std::filesystem::path& path) {
  std::string out;
  append_be32(out, kIdxLabelMagic);
  append_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (std::uint8_t label : labels) out.push_back(static_cast<char>(label));
  write_file_atomic(path, out);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = kCsvHeader;
  out.push_back('\n');
  for (const ResultRow& row : rows) {
    if (!std::isfinite(row.value)) {
      throw Error(ErrorCode::NonFinite, "result " + row.metric + " is not finite");
    }
    out += row.experiment + ',' + std::to_string(row.d) + ',' + std::to_string(row.n) + ',' +
           optional_field(row.n_l) + ',' + optional_field(row.trial) + ',' + row.metric + ',' +
           format_double(row.value) + '\n';
  }
  return out;
}

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  write_file_atomic(path, to_csv(rows));
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::BadFormat, path.string() + " does not start with the result header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 7) throw Error(ErrorCode::BadFormat, "result row needs 7 fields: " + line);
    ResultRow row;
    row.experiment = f[0];
    row.d = parse_long(f[1], "d");
    row.n = parse_long(f[2], "n");
    if (!f[3].empty()) row.n_l = parse_long(f[3], "n_l");
    if (!f[4].empty()) row.trial = parse_long(f[4], "trial");
    row.metric = f[5];
    row.value = parse_double(f[6], "value");
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> values;
    for (const std::string& field : split(line, ',')) {
      values.push_back(parse_double(field, path.string() + ":" + std::to_string(line_no)));
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw Error(ErrorCode::BadFormat,
                  path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::BadFormat, path.string() + " holds no samples");
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return out;
}

void write_sample_csv(const Matrix& rows, const std::filesystem::path& path) {
  std::string out;
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index j = 0; j < rows.cols(); ++j) {
      if (j > 0) out.push_back(',');
      out += format_double(rows(i, j));
    }
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

std::string render_svg_lines(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 480.0;
  constexpr double kLeft = 80.0;
  constexpr double kRight = 160.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 60.0;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw Error(ErrorCode::DimMismatch, "series " + s.name + " has unequal x and y lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i > 0 && !(s.x[i] > s.x[i - 1])) {
        throw Error(ErrorCode::InvalidArgument, "series " + s.name + " x is not increasing");
      }
      if ((options.log_x && !(s.x[i] > 0.0)) || (options.log_y && !(s.y[i] > 0.0))) {
        throw Error(ErrorCode::NonPositiveOnLogAxis,
                    "series " + s.name + " has a non-positive value on a log axis");
      }
      const double x = options.log_x ? std::log10(s.x[i]) : s.x[i];
      const double y = options.log_y ? std::log10(s.y[i]) : s.y[i];
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double v) { return kTop + (y_hi - v) / (y_hi - y_lo) * plot_h; };
  auto tick_text = [](double v, bool log) {
    if (log) return "1e" + std::to_string(static_cast<long>(std::lround(v)));
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 4);
    return std::string(buf, ptr);
  };
  auto ticks = [](double lo, double hi, bool log) {
    std::vector<double> out;
    if (log) {
      for (double t = std::ceil(lo); t <= std::floor(hi) + 1e-12; t += 1.0) out.push_back(t);
      if (out.size() < 2) out = {lo, hi};
    } else {
      for (int i = 0; i <= 4; ++i) out.push_back(lo + (hi - lo) * i / 4.0);
    }
    return out;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << fixed2(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(options.title)
        << "</text>\n";
  }
  svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\"/>\n"
      << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ticks(x_lo, x_hi, options.log_x)) {
    const std::string x = fixed2(px(t));
    svg << "<line x1=\"" << x << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << x << "\" y2=\""
        << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">"
        << tick_text(t, options.log_x) << "</text>\n";
  }
  for (double t : ticks(y_lo, y_hi, options.log_y)) {
    const std::string y = fixed2(py(t));
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\""
        << y << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << y << "\" text-anchor=\"end\" "
        << "dominant-baseline=\"middle\">" << tick_text(t, options.log_y) << "</text>\n";
  }
  svg << "</g>\n";
  if (!options.x_label.empty()) {
    svg << "<text x=\"" << fixed2(kLeft + plot_w / 2) << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(options.x_label) << "</text>\n";
  }
  if (!options.y_label.empty()) {
    svg << "<text x=\"18\" y=\"" << fixed2(kTop + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << fixed2(kTop + plot_h / 2) << ")\">"
        << xml_escape(options.y_label) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % (sizeof(kColors) / sizeof(kColors[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double x = options.log_x ? std::log10(series[s].x[i]) : series[s].x[i];
      const double y = options.log_y ? std::log10(series[s].y[i]) : series[s].y[i];
      if (i > 0) svg << ' ';
      svg << fixed2(px(x)) << ',' << fixed2(py(y));
    }
    svg << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(s);
    svg << "<line x1=\"" << kLeft + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + plot_w + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kLeft + plot_w + 45 << "\" y=\"" << ly
        << "\" dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(series[s].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg_lines(const std::vector<PlotSeries>& series, const PlotOptions& options,
                     const std::filesystem::path& path) {
  write_file_atomic(path, render_svg_lines(series, options));
}

void write_grid_csv(const Vector& values, const Shape& shape, const std::filesystem::path& path) {
  if (values.size() != shape.size()) throw Error(ErrorCode::ShapeMismatch, "grid size mismatch");
  std::string out;
  for (Index r = 0; r < shape.rows; ++r) {
    for (Index c = 0; c < shape.cols; ++c) {
      if (c > 0) out.push_back(',');
      out += format_double(values(r * shape.cols + c));
    }
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

void write_pgm(const Vector& values, const Shape& shape, const std::filesystem::path& path) {
  if (values.size() != shape.size()) throw Error(ErrorCode::ShapeMismatch, "grid size mismatch");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  std::string out = "P2\n" + std::to_string(shape.cols) + ' ' + std::to_string(shape.rows) +
                    "\n255\n";
  for (Index r = 0; r < shape.rows; ++r) {
    for (Index c = 0; c < shape.cols; ++c) {
      if (c > 0) out.push_back(' ');
      out += std::to_string(std::lround(255.0 * (values(r * shape.cols + c) - lo) / span));
    }
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

}  // namespace monge
