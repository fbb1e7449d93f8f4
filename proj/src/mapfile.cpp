#include "monge/mapfile.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "monge/dataio.hpp"
#include "monge/error.hpp"

namespace monge {
namespace {

constexpr char kLinearTag[4] = {'L', 'M', 'M', '1'};
constexpr char kSpectralTag[4] = {'S', 'M', 'M', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_vector(std::string& out, const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) put_f64(out, v(i));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t u64() {
    if (pos_ + 8 > bytes_.size()) throw Error(ErrorCode::TruncatedFile, "map file is truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  Vector vector(std::uint64_t count) {
    if (count > (bytes_.size() - pos_) / 8) {
      throw Error(ErrorCode::TruncatedFile, "map file is truncated");
    }
    Vector v(static_cast<Index>(count));
    for (Index i = 0; i < v.size(); ++i) v(i) = f64();
    return v;
  }

  void expect_end() const {
    if (pos_ != bytes_.size()) throw Error(ErrorCode::BadFormat, "trailing bytes in map file");
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 4;
};

}  // namespace

std::string encode_map(const LinearMongeMap& map) {
  std::string out(kLinearTag, 4);
  put_u64(out, static_cast<std::uint64_t>(map.dim()));
  put_f64(out, map.alpha());
  put_vector(out, map.m1());
  put_vector(out, map.m2());
  const Matrix& a = map.a().matrix();
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) put_f64(out, a(r, c));
  }
  return out;
}

std::string encode_map(const SpectralMongeMap& map) {
  std::string out(kSpectralTag, 4);
  put_u64(out, static_cast<std::uint64_t>(map.shape().rows));
  put_u64(out, static_cast<std::uint64_t>(map.shape().cols));
  put_f64(out, map.alpha());
  put_vector(out, map.response());
  put_vector(out, map.mean1());
  put_vector(out, map.mean2());
  return out;
}

AnyMap decode_map(const std::string& bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::BadMagic, "map file is too short for a tag");
  Reader in(bytes);
  if (std::memcmp(bytes.data(), kLinearTag, 4) == 0) {
    const std::uint64_t dim = in.u64();
    if (dim == 0 || dim > (1u << 20)) throw Error(ErrorCode::BadFormat, "implausible map dimension");
    const double alpha = in.f64();
    Vector m1 = in.vector(dim);
    Vector m2 = in.vector(dim);
    const Vector flat = in.vector(dim * dim);
    in.expect_end();
    Matrix a(static_cast<Index>(dim), static_cast<Index>(dim));
    for (Index r = 0; r < a.rows(); ++r) {
      for (Index c = 0; c < a.cols(); ++c) a(r, c) = flat(r * a.cols() + c);
    }
    return LinearMongeMap(std::move(m1), std::move(m2), SpdMatrix::from(a), alpha);
  }
  if (std::memcmp(bytes.data(), kSpectralTag, 4) == 0) {
    const std::uint64_t rows = in.u64();
    const std::uint64_t cols = in.u64();
    if (rows == 0 || cols == 0 || rows > (1u << 16) || cols > (1u << 16)) {
      throw Error(ErrorCode::BadFormat, "implausible spectral map shape");
    }
    const double alpha = in.f64();
    const std::uint64_t size = rows * cols;
    Vector response = in.vector(size);
    Vector mean1 = in.vector(size);
    Vector mean2 = in.vector(size);
    in.expect_end();
    return SpectralMongeMap(Shape{static_cast<Index>(rows), static_cast<Index>(cols)},
                            std::move(response), std::move(mean1), std::move(mean2), alpha);
  }
  throw Error(ErrorCode::BadMagic, "unknown map file tag");
}

void save_map(const AnyMap& map, const std::filesystem::path& path) {
  write_file_atomic(path, std::visit([](const auto& m) { return encode_map(m); }, map));
}

AnyMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_map(bytes);
}

}  // namespace monge
