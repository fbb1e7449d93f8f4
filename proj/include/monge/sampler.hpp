#ifndef MONGE_SAMPLER_HPP
#define MONGE_SAMPLER_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "monge/convmap.hpp"
#include "monge/mapping.hpp"

namespace monge {

/// Seeded generator on top of std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. Uniform and normal variates are derived here rather
/// than through <random> distributions, which are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Marsaglia polar method).
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

  /// Independent generator for trial `index`: seed xor splitmix64(index).
  Rng substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// n x d matrix of independent standard normals, filled row by row.
Matrix standard_normal(Rng& rng, Index n, Index d);

struct LabeledDataset {
  LabeledDataset(SampleSet x_, std::vector<int> y_);

  SampleSet x;
  std::vector<int> y;
};

/// n draws of N(m, s): rows m + s^{1/2} z.
SampleSet gaussian(Rng& rng, const Vector& m, const SpdMatrix& s, Index n);

/// G G^T with G a d x d standard normal matrix, i.e. Wishart W_d(I, d).
/// Redrawn while lambda_min <= 1e-12 lambda_max.
SpdMatrix wishart_identity(Rng& rng, Index d);

struct GaussianPair {
  Vector m1;
  SpdMatrix s1;
  Vector m2;
  SpdMatrix s2;
};

/// Means from N(0, 10 I) (variance 10), covariances from W_d(I, d).
GaussianPair make_gaussian_pair(Rng& rng, Index d);

/// Two-class source law (class 0 ~ N(0, sigma0), class 1 ~ N(1, sigma0),
/// equal priors) and target law T(x) = B x + c with c = 10 on the first
/// ceil(d/2) coordinates.
struct DaProblem {
  SpdMatrix sigma0;
  SpdMatrix b;
  Vector c;
  Matrix sigma0_root;
  LabeledDataset source;
  SampleSet source_unlab;
  SampleSet target_unlab;

  Index dim() const { return c.size(); }
  Vector class_mean(int label) const;
  /// The true transport map: mixture mean -> B mixture mean + c, matrix B.
  LinearMongeMap truth() const;
};

DaProblem make_da_problem(Rng& rng, Index d, Index n_labeled, Index n_unsup);
LabeledDataset draw_da_source(Rng& rng, const DaProblem& problem, Index n);
LabeledDataset draw_da_target(Rng& rng, const DaProblem& problem, Index n);

/// Line segment of `length_px` pixels at `angle_deg` (counter-clockwise from
/// the column axis), sampled at unit spacing and rounded to the nearest pixel
/// of the smallest odd square canvas holding it. Entries sum to 1.
Matrix motion_blur_kernel(int length_px, double angle_deg);

/// DFT of the kernel placed on a grid of `shape` with its centre at the origin.
ComplexVector kernel_transfer(const Matrix& kernel, const Shape& shape);

/// Circular 2D convolution of every image with the kernel (centred).
SignalStack blur_stack(const SignalStack& x, const Matrix& kernel);

/// Stationary Gaussian images idft(sqrt(spectrum) . dft(white noise)); the
/// spectrum must be nonnegative and even (spectrum[k] == spectrum[-k]).
SignalStack stationary_image_stack(Rng& rng, Shape shape, const Vector& spectrum, Index n);

}  // namespace monge

#endif  // MONGE_SAMPLER_HPP
