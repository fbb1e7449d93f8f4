#ifndef MONGE_RESULT_HPP
#define MONGE_RESULT_HPP

#include <optional>
#include <string>
#include <tuple>

namespace monge {

/// One CSV record of an experiment. Aggregates over trials leave `trial`
/// empty; rows outside a labeled-size sweep leave `n_l` empty.
struct ResultRow {
  std::string experiment;
  long d = 0;
  long n = 0;
  std::optional<long> n_l;
  std::optional<long> trial;
  std::string metric;
  double value = 0.0;

  friend bool operator<(const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.d, a.n, a.n_l, a.trial, a.metric) <
           std::tie(b.experiment, b.d, b.n, b.n_l, b.trial, b.metric);
  }
  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

}  // namespace monge

#endif  // MONGE_RESULT_HPP
