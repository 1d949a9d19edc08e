#include <doctest.h>

#include <cmath>

#include "epibatch/qbd.hpp"

using namespace epibatch;

TEST_CASE("level partition follows k(d+1)^n boundaries") {
  const auto p1 = build_levels(1, 1, 3);
  REQUIRE(p1.levels.size() == 4);
  CHECK(p1.levels[0] == std::pair<std::int64_t, std::int64_t>{0, 1});
  CHECK(p1.levels[1] == std::pair<std::int64_t, std::int64_t>{1, 2});
  CHECK(p1.levels[2] == std::pair<std::int64_t, std::int64_t>{2, 4});
  CHECK(p1.levels[3] == std::pair<std::int64_t, std::int64_t>{4, 8});

  const auto p2 = build_levels(2, 1, 2);
  CHECK(p2.levels[0] == std::pair<std::int64_t, std::int64_t>{0, 2});
  CHECK(p2.levels[1] == std::pair<std::int64_t, std::int64_t>{2, 4});
  CHECK(p2.levels[2] == std::pair<std::int64_t, std::int64_t>{4, 8});

  const auto p3 = build_levels(1, 2, 2);
  CHECK(p3.levels[1] == std::pair<std::int64_t, std::int64_t>{1, 3});
  CHECK(p3.levels[2] == std::pair<std::int64_t, std::int64_t>{3, 9});

  // Contiguous cover of [0, upper bound).
  for (const auto& part : {p1, p2, p3}) {
    for (std::size_t i = 1; i < part.levels.size(); ++i) {
      CHECK(part.levels[i].first == part.levels[i - 1].second);
    }
  }
}

TEST_CASE("level construction rejects overflow and bad input") {
  CHECK_THROWS_WITH_AS(build_levels(1, 2, 45), doctest::Contains("level overflow"),
                       NumericsError);
  CHECK_THROWS_AS(build_levels(0, 1, 1), ValidationError);
  CHECK_THROWS_AS(build_levels(1, 0, 1), ValidationError);
}

TEST_CASE("generator rows carry n*lambda up and n*mu down") {
  const TruncatedGenerator gen(1.0, 1.0, 0.0, 1, 3, BoundaryPolicy::redirect);
  CHECK(gen.rate(2, 3) == doctest::Approx(2.0));
  CHECK(gen.rate(2, 1) == doctest::Approx(2.0));
  CHECK(gen.diagonal(2) == doctest::Approx(-4.0));
  // tau = 0 leaves state 0 absorbing.
  CHECK(gen.diagonal(0) == 0.0);
  CHECK(gen.off_diagonal(0).empty());
}

TEST_CASE("redirect clips the batch jump at the boundary") {
  const TruncatedGenerator gen(0.5, 0.0, 0.0, 2, 10, BoundaryPolicy::redirect);
  CHECK(gen.rate(9, 10) == doctest::Approx(4.5));  // 9 -> 11 clipped to 10
  CHECK(gen.diagonal(9) == doctest::Approx(-4.5));
  // The top state's self-redirect cancels; nothing moves out of it.
  CHECK(gen.diagonal(10) == 0.0);
  CHECK(gen.off_diagonal(10).empty());
}

TEST_CASE("drop policy lets boundary mass leak") {
  const TruncatedGenerator gen(0.5, 0.0, 0.0, 2, 10, BoundaryPolicy::drop);
  CHECK(gen.rate(9, 10) == 0.0);
  CHECK(gen.diagonal(9) == doctest::Approx(-4.5));  // row sums to -4.5
  CHECK(gen.diagonal(10) == doctest::Approx(-5.0));
}

TEST_CASE("tau feeds state 0 into state d") {
  const TruncatedGenerator gen(0.2, 0.1, 0.7, 2, 10, BoundaryPolicy::redirect);
  CHECK(gen.rate(0, 2) == doctest::Approx(0.7));
  CHECK(gen.diagonal(0) == doctest::Approx(-0.7));
}

TEST_CASE("blocks expose the QBD structure") {
  const auto part = build_levels(1, 1, 3);
  const TruncatedGenerator gen(0.3, 0.2, 0.0, 1, 7, BoundaryPolicy::redirect);

  // L_2 = {2,3}: the only jump into L_3 = {4..7} is 3 -> 4 at rate 3*lambda.
  const auto up = block_of(gen, part, 2, 3);
  double nonzero_sum = 0.0;
  int nonzero_count = 0;
  for (const auto& row : up) {
    for (double v : row) {
      if (v != 0.0) {
        ++nonzero_count;
        nonzero_sum = v;
      }
    }
  }
  CHECK(nonzero_count == 1);
  CHECK(up[1][0] == doctest::Approx(3 * 0.3));
  CHECK(nonzero_sum == doctest::Approx(0.9));

  // A death from L_2's minimum state 2 lands in L_1, never L_0.
  const auto down_two = block_of(gen, part, 2, 0);
  for (const auto& row : down_two) {
    for (double v : row) CHECK(v == 0.0);
  }

  // Diagonal block rows balance the off-diagonal blocks.
  for (int level = 0; level <= 3; ++level) {
    const auto diag = block_of(gen, part, level, level);
    for (std::size_t r = 0; r < diag.size(); ++r) {
      double row_sum = 0.0;
      for (double v : diag[r]) row_sum += v;
      double off_sum = 0.0;
      for (int other = 0; other <= 3; ++other) {
        if (other == level) continue;
        const auto block = block_of(gen, part, level, other);
        for (double v : block[r]) off_sum += v;
      }
      CHECK(row_sum == doctest::Approx(-off_sum).epsilon(1e-12));
    }
  }

  CHECK_THROWS_WITH_AS(block_of(gen, part, 0, 9),
                       doctest::Contains("block outside truncation"),
                       ValidationError);
}

TEST_CASE("block tridiagonality across k and d") {
  for (std::int64_t k : {1, 2, 3}) {
    for (int d : {1, 2}) {
      const int n_levels = 3;
      const auto part = build_levels(k, d, n_levels);
      const std::int64_t n_max = part.levels.back().second - 1;
      const TruncatedGenerator gen(0.4, 0.3, 0.1, d, n_max,
                                   BoundaryPolicy::redirect);
      for (int i = 0; i <= n_levels; ++i) {
        for (int j = 0; j <= n_levels; ++j) {
          if (std::abs(i - j) < 2) continue;
          const auto block = block_of(gen, part, i, j);
          for (const auto& row : block) {
            for (double v : row) CHECK(v == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("row sums vanish under redirect") {
  for (int d : {0, 1, 2, 3}) {
    const TruncatedGenerator gen(0.37, 0.21, 0.05, d, 64, BoundaryPolicy::redirect);
    for (std::int64_t n = 0; n <= gen.n_max(); ++n) {
      double sum = gen.diagonal(n);
      for (const auto& e : gen.off_diagonal(n)) sum += e.rate;
      CHECK(std::abs(sum) <= 1e-12);
    }
  }
}

TEST_CASE("at most two off-diagonal entries per row plus tau in row 0") {
  const TruncatedGenerator gen(0.4, 0.3, 0.2, 2, 40, BoundaryPolicy::redirect);
  CHECK(gen.off_diagonal(0).size() == 1);  // the tau entry
  for (std::int64_t n = 1; n <= gen.n_max(); ++n) {
    CHECK(gen.off_diagonal(n).size() <= 2);
  }
}

TEST_CASE("enlarging the truncation only rewrites old clipped rows") {
  const int d = 2;
  const TruncatedGenerator small(0.4, 0.3, 0.1, d, 10, BoundaryPolicy::redirect);
  const TruncatedGenerator large(0.4, 0.3, 0.1, d, 20, BoundaryPolicy::redirect);
  for (std::int64_t n = 0; n <= 10; ++n) {
    const bool was_clipped = n + d > 10;
    if (was_clipped) continue;
    for (std::int64_t m = 0; m <= 10; ++m) {
      CHECK(small.rate(n, m) == large.rate(n, m));
    }
  }
}
