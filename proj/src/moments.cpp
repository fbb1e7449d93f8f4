#include "monge/moments.hpp"

#include <string>

#include "monge/error.hpp"

namespace monge {

SampleSet::SampleSet(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "a sample set needs at least one row and column");
  }
  if (!rows_.allFinite()) throw Error(ErrorCode::NonFinite, "sample set has non-finite entries");
}

SampleSet SampleSet::head(Index count) const {
  if (count < 1 || count > n()) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot take " + std::to_string(count) + " of " + std::to_string(n()) + " rows");
  }
  return SampleSet(rows_.topRows(count));
}

MomentEstimate estimate_moments(const SampleSet& x) {
  MomentEstimate out;
  out.n = x.n();
  out.mean = x.rows().colwise().mean().transpose();
  const Matrix centered = x.rows().rowwise() - out.mean.transpose();
  out.cov = (centered.transpose() * centered) / static_cast<double>(x.n());
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  return out;
}

double effective_rank(const Matrix& s) {
  const SymEig e = sym_eig(s);
  const double lambda_max = e.values(0);
  if (!(lambda_max > 0.0)) throw Error(ErrorCode::ZeroMatrix, "effective rank of a zero matrix");
  return s.trace() / lambda_max;
}

double condition_number(const SpdMatrix& s) {
  const SymEig e = s.eig();
  return e.values(0) / e.values(e.values.size() - 1);
}

}  // namespace monge
