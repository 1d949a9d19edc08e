#include "epibatch/qbd.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace epibatch {

LevelPartition build_levels(std::int64_t k, int d, int n_levels) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (d < 1) throw ValidationError("d must be >= 1");
  if (n_levels < 1) throw ValidationError("n_levels must be >= 1");
  LevelPartition part{k, d, {}};
  part.levels.emplace_back(0, k);  // Level 0 = [0, k)
  std::int64_t lo = k;
  const std::int64_t base = static_cast<std::int64_t>(d) + 1;
  constexpr std::int64_t safe_max = std::int64_t{1} << 62;
  for (int n = 1; n <= n_levels; ++n) {
    if (lo > safe_max / base) {
      throw NumericsError("level overflow: k(d+1)^n exceeds the safe integer range");
    }
    const std::int64_t hi = lo * base;  // k(d+1)^n
    part.levels.emplace_back(lo, hi);
    lo = hi;
  }
  return part;
}

TruncatedGenerator::TruncatedGenerator(double lambda_event, double mu, double tau,
                                       int d, std::int64_t n_max,
                                       BoundaryPolicy policy)
    : lambda_(lambda_event), mu_(mu), tau_(tau), d_(d), n_max_(n_max),
      policy_(policy) {
  if (!(lambda_ >= 0.0) || !(mu_ >= 0.0) || !(tau_ >= 0.0)) {
    throw ValidationError("rates must be nonnegative");
  }
  if (d_ < 0) throw ValidationError("batch size d must be >= 0");
  if (n_max_ < 1) throw ValidationError("n_max must be >= 1");

  const std::size_t rows = static_cast<std::size_t>(n_max_) + 1;
  row_ptr_.assign(rows + 1, 0);
  diag_.assign(rows, 0.0);
  entries_.reserve(2 * rows);

  for (std::int64_t n = 0; n <= n_max_; ++n) {
    row_ptr_[static_cast<std::size_t>(n)] =
        static_cast<std::int64_t>(entries_.size());
    double exit = 0.0;
    if (n == 0) {
      if (tau_ > 0.0 && d_ >= 1) {
        const std::int64_t target = std::min<std::int64_t>(d_, n_max_);
        entries_.push_back({target, tau_});
        exit += tau_;
      }
    } else {
      // Death n -> n-1 at rate n*mu.
      if (mu_ > 0.0) {
        entries_.push_back({n - 1, static_cast<double>(n) * mu_});
        exit += static_cast<double>(n) * mu_;
      }
      // Batch birth n -> n+d at rate n*lambda; jumps past n_max are
      // redirected to n_max or dropped. A redirect onto the row's own state
      // cancels against the diagonal and is omitted.
      if (lambda_ > 0.0 && d_ >= 1) {
        std::int64_t target = n + d_;
        bool keep = true;
        if (target > n_max_) {
          if (policy_ == BoundaryPolicy::redirect) {
            target = n_max_;
            keep = target != n;
          } else {
            keep = false;
          }
        }
        const double rate = static_cast<double>(n) * lambda_;
        if (keep) entries_.push_back({target, rate});
        // Dropped mass still leaves the row under the drop policy; a
        // self-redirect does not.
        if (keep || policy_ == BoundaryPolicy::drop) exit += rate;
      }
    }
    diag_[static_cast<std::size_t>(n)] = -exit;
    max_exit_ = std::max(max_exit_, exit);
  }
  row_ptr_[rows] = static_cast<std::int64_t>(entries_.size());
}

std::span<const TruncatedGenerator::Entry> TruncatedGenerator::off_diagonal(
    std::int64_t row) const {
  const auto lo = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(row)]);
  const auto hi =
      static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(row) + 1]);
  return {entries_.data() + lo, hi - lo};
}

double TruncatedGenerator::rate(std::int64_t from, std::int64_t to) const {
  if (from < 0 || from > n_max_ || to < 0 || to > n_max_) return 0.0;
  if (from == to) return diagonal(from);
  for (const auto& e : off_diagonal(from)) {
    if (e.col == to) return e.rate;
  }
  return 0.0;
}

std::vector<std::vector<double>> block_of(const TruncatedGenerator& gen,
                                          const LevelPartition& part, int i, int j) {
  const auto check = [&](int level) {
    if (level < 0 || level >= static_cast<int>(part.levels.size())) {
      throw ValidationError("block outside truncation: level " +
                            std::to_string(level) + " not in the partition");
    }
    if (part.levels[static_cast<std::size_t>(level)].second - 1 > gen.n_max()) {
      throw ValidationError("block outside truncation: level " +
                            std::to_string(level) + " exceeds n_max");
    }
  };
  check(i);
  check(j);
  const auto [rlo, rhi] = part.levels[static_cast<std::size_t>(i)];
  const auto [clo, chi] = part.levels[static_cast<std::size_t>(j)];
  std::vector<std::vector<double>> block(
      static_cast<std::size_t>(rhi - rlo),
      std::vector<double>(static_cast<std::size_t>(chi - clo), 0.0));
  for (std::int64_t r = rlo; r < rhi; ++r) {
    auto& row = block[static_cast<std::size_t>(r - rlo)];
    if (r >= clo && r < chi) row[static_cast<std::size_t>(r - clo)] = gen.diagonal(r);
    for (const auto& e : gen.off_diagonal(r)) {
      if (e.col >= clo && e.col < chi) {
        row[static_cast<std::size_t>(e.col - clo)] += e.rate;
      }
    }
  }
  return block;
}

}  // namespace epibatch
