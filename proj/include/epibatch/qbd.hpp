#ifndef EPIBATCH_QBD_HPP
#define EPIBATCH_QBD_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "epibatch/errors.hpp"

namespace epibatch {

// Partition of the state space into levels
//   L_0 = [0, k),  L_n = [k(d+1)^{n-1}, k(d+1)^n)  for n >= 1.
struct LevelPartition {
  std::int64_t k = 1;
  int d = 1;
  // Half-open [lo, hi) ranges, index 0 = Level 0.
  std::vector<std::pair<std::int64_t, std::int64_t>> levels;
};

LevelPartition build_levels(std::int64_t k, int d, int n_levels);

// What happens to a batch jump that would leave the truncated state space:
// redirect it to n_max (conserves probability) or drop it.
enum class BoundaryPolicy { redirect, drop };

// Finite truncation of the batch birth-death generator. Row n carries
// rate n*lambda to n+d and rate n*mu to n-1; row 0 carries rate tau to d.
class TruncatedGenerator {
public:
  TruncatedGenerator(double lambda_event, double mu, double tau, int d,
                     std::int64_t n_max, BoundaryPolicy policy);

  struct Entry {
    std::int64_t col;
    double rate;
  };

  std::int64_t n_max() const { return n_max_; }
  BoundaryPolicy policy() const { return policy_; }
  double lambda_event() const { return lambda_; }
  double mu() const { return mu_; }
  double tau() const { return tau_; }
  int batch_size() const { return d_; }

  std::span<const Entry> off_diagonal(std::int64_t row) const;
  double diagonal(std::int64_t row) const { return diag_[static_cast<std::size_t>(row)]; }
  double max_exit_rate() const { return max_exit_; }

  // Rate from one state to another, 0 when there is no transition.
  double rate(std::int64_t from, std::int64_t to) const;

private:
  double lambda_, mu_, tau_;
  int d_;
  std::int64_t n_max_;
  BoundaryPolicy policy_;
  std::vector<std::int64_t> row_ptr_;
  std::vector<Entry> entries_;
  std::vector<double> diag_;
  double max_exit_ = 0.0;
};

// Dense sub-matrix of the generator restricted to (L_i rows, L_j columns).
std::vector<std::vector<double>> block_of(const TruncatedGenerator& gen,
                                          const LevelPartition& part, int i, int j);

}  // namespace epibatch

#endif
