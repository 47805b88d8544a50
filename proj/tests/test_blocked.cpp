#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "support.hpp"

using namespace frechet;
using frechet::testing::Rng;

TEST(Partition, SingleBox) {
  const auto p = make_partition(2, 2);
  EXPECT_EQ(p.box_count(), 1u);
  EXPECT_EQ(p.row_blocks[0], (BlockSpec{0, 1}));
  EXPECT_EQ(p.col_blocks[0], (BlockSpec{0, 1}));
}

TEST(Partition, RaggedTiling) {
  const auto p = make_partition(10, 10, 3, 2);
  const std::vector<BlockSpec> rows{{0, 3}, {3, 3}, {6, 3}};
  const std::vector<BlockSpec> cols{{0, 2}, {2, 2}, {4, 2}, {6, 2}, {8, 1}};
  EXPECT_EQ(p.row_blocks, rows);
  EXPECT_EQ(p.col_blocks, cols);
  EXPECT_EQ(p.box_count(), 15u);
}

TEST(Partition, DefaultFormula) {
  // m = 65536: log2 m = 16, log2 log2 m = 4 -> alpha 4, theta 2
  EXPECT_EQ(default_alpha(65536), 4u);
  EXPECT_EQ(default_theta(4), 2u);
  EXPECT_EQ(default_alpha(2), 2u);   // log2 log2 2 = 0
  EXPECT_EQ(default_alpha(4), 2u);   // log2 log2 4 = 1 -> floor(2 / 1) = 2
  EXPECT_EQ(default_alpha(1u << 20), 4u);  // 20 / log2(20) = 4.63
  EXPECT_EQ(default_theta(1), 1u);
  EXPECT_EQ(default_theta(9), 3u);
  const auto p = make_partition(100, 65536);
  EXPECT_EQ(p.alpha, 4u);
  EXPECT_EQ(p.theta, 2u);
}

TEST(Partition, Errors) {
  EXPECT_THROW(make_partition(1, 5), std::invalid_argument);
  EXPECT_THROW(make_partition(5, 5, 0, 1), std::invalid_argument);
  EXPECT_THROW(make_partition(5, 5, 1, 0), std::invalid_argument);
}

TEST(Partition, BlocksTileWithSharedVertex) {
  for (std::size_t n = 2; n < 40; ++n)
    for (std::size_t a = 1; a < 8; ++a) {
      const auto p = make_partition(n, n, a, a);
      EXPECT_EQ(p.row_blocks.front().first, 0u);
      EXPECT_EQ(p.row_blocks.back().last(), n - 1);
      for (std::size_t k = 1; k < p.row_blocks.size(); ++k) EXPECT_EQ(p.row_blocks[k].first, p.row_blocks[k - 1].last());
      EXPECT_EQ(p.row_blocks.size(), (n - 2) / a + 1);
    }
}

TEST(Recode, SentinelPassesThrough) {
  const Curve tau{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  const Curve sigma{{0, 5}, {3, 5}};
  const auto oldp = block_intersections(tau, {0, 2}, sigma, 0, 1.0);
  const auto newp = block_intersections(tau, {2, 1}, sigma, 0, 1.0);
  const auto r = recode_start({ReachCode::null(2), std::nullopt}, oldp, newp);
  EXPECT_TRUE(r.code.is_null(1));
  EXPECT_FALSE(r.carried.has_value());
}

TEST(Recode, VertexCodeBecomesPredecessorRank) {
  Rng rng(41);
  std::size_t checked = 0;
  for (int k = 0; k < 200; ++k) {
    const auto tau = frechet::testing::random_curve(rng, 9, 2, 3.0);
    const auto sigma = frechet::testing::random_curve(rng, 5, 2, 3.0);
    const double d = discrete_frechet(tau, sigma) * frechet::testing::uniform(rng, 0.8, 1.4);
    const auto t = *naive_decide(tau, sigma, d, true).table;
    for (std::size_t j = 0; j + 1 < sigma.size(); ++j) {
      const auto& r = t.row(4, j);  // interval owned by vertex 4, the shared vertex of blocks [0,4] and [4,8]
      if (r.is_null()) continue;
      const auto oldp = block_intersections(tau, {0, 4}, sigma, j, d);
      const auto newp = block_intersections(tau, {4, 4}, sigma, j, d);
      CodedStart in{encode_start(r.lo, oldp), r.lo};
      for (std::uint32_t v = 0; v <= 4; ++v)
        if (!oldp[v].is_null() && oldp[v].lo == r.lo) in = {ReachCode::vertex_start(v + 1), std::nullopt};
      const auto out = recode_start(in, oldp, newp);
      EXPECT_EQ(out.code.gamma, 0);
      EXPECT_EQ(out.carried, r.lo);
      const auto pr = predecessor_rank(r.lo, newp);
      EXPECT_EQ(out.code.pi, pr.rank);
      EXPECT_EQ(out.code.beta, pr.is_equal);
      // r.lo is inside the owner's ball, which is the new block's first vertex
      EXPECT_GE(out.code.pi, 1);
      EXPECT_EQ(decode_start(out.code, newp, out.carried), r.lo);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}

namespace {

struct Instance {
  Curve tau, sigma;
  double delta;
};

Instance random_instance(Rng& rng, std::size_t nmax) {
  const bool grid = frechet::testing::uniform_int(rng, 0, 3) == 0;
  const std::size_t n = frechet::testing::uniform_int(rng, 2, nmax), m = frechet::testing::uniform_int(rng, 2, nmax);
  Curve tau = grid ? frechet::testing::grid_curve(rng, n, 2, 2) : frechet::testing::random_curve(rng, n, 2, 3.0);
  Curve sigma = grid ? frechet::testing::grid_curve(rng, m, 2, 2) : frechet::testing::random_curve(rng, m, 2, 3.0);
  const double base = discrete_frechet(tau, sigma);
  const double f = std::array{0.5, 0.9, 1.0, 1.1, 2.0}[frechet::testing::uniform_int(rng, 0, 4)];
  const double delta = grid ? std::round(base * f * 2.0) / 2.0 : base * f;
  return {std::move(tau), std::move(sigma), delta};
}

}  // namespace

TEST(BoxedDecide, SingleBoxEqualsNaive) {
  Rng rng(42);
  for (int k = 0; k < 300; ++k) {
    const auto in = random_instance(rng, 6);
    const auto p = make_partition(in.tau.size(), in.sigma.size(), in.tau.size() - 1, in.sigma.size() - 1);
    ASSERT_EQ(p.box_count(), 1u);
    MemoTable memo;
    EXPECT_EQ(boxed_decide(in.tau, in.sigma, in.delta, p, memo).reachable,
              naive_decide(in.tau, in.sigma, in.delta).reachable);
  }
}

TEST(BoxedDecide, PartitionInvariance) {
  Rng rng(43);
  for (int k = 0; k < 300; ++k) {
    const auto in = random_instance(rng, 30);
    const bool want = naive_decide(in.tau, in.sigma, in.delta).reachable;
    for (auto [a, t] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 1}, {3, 2}, {4, 2}, {5, 3}, {7, 7}}) {
      MemoTable memo;
      const auto p = make_partition(in.tau.size(), in.sigma.size(), a, t);
      ASSERT_EQ(boxed_decide(in.tau, in.sigma, in.delta, p, memo, {true}).reachable, want)
          << "alpha=" << a << " theta=" << t << " instance " << k;
    }
  }
}

TEST(BoxedDecide, TiesOnIntegerGrid) {
  // Integer coordinates and half-integer deltas create coinciding endpoints.
  Rng rng(44);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = frechet::testing::uniform_int(rng, 2, 15), m = frechet::testing::uniform_int(rng, 2, 15);
    const auto tau = frechet::testing::grid_curve(rng, n, 2, 1);
    const auto sigma = frechet::testing::grid_curve(rng, m, 2, 1);
    const double d = static_cast<double>(frechet::testing::uniform_int(rng, 0, 6)) / 2.0;
    const bool want = naive_decide(tau, sigma, d).reachable;
    MemoTable memo;
    const auto p = make_partition(n, m, frechet::testing::uniform_int(rng, 1, 4), frechet::testing::uniform_int(rng, 1, 3));
    ASSERT_EQ(boxed_decide(tau, sigma, d, p, memo).reachable, want);
  }
}

TEST(BoxedDecide, LookupsEqualBoxesAndRepeatHits) {
  Rng rng(45);
  const auto tau = frechet::testing::random_curve(rng, 60, 2, 5.0);
  const auto sigma = frechet::testing::random_curve(rng, 45, 2, 5.0);
  const double d = discrete_frechet(tau, sigma);
  const auto p = make_partition(60, 45, 4, 3);
  MemoTable memo;
  const auto r1 = boxed_decide(tau, sigma, d, p, memo);
  EXPECT_EQ(r1.lookups, p.box_count());
  EXPECT_EQ(p.box_count(), 15u * 15u);
  EXPECT_EQ(memo.stats().hits + memo.stats().misses, p.box_count());
  memo.reset_counters();
  const auto r2 = boxed_decide(tau, sigma, d, p, memo, {true});
  EXPECT_EQ(r2.reachable, r1.reachable);
  EXPECT_EQ(memo.stats().misses, 0u);
  EXPECT_EQ(memo.stats().hits, p.box_count());
  EXPECT_EQ(r2.verified_hits, p.box_count());
}

TEST(BoxedDecide, SelfSimilarPairHits) {
  gen::Rng g(46);
  const auto tau = gen::random_walk(300, 2, g);
  const auto sigma = gen::perturbed_copy(tau, 0.1, g);
  MemoTable memo;
  const auto p = make_partition(300, 300);
  boxed_decide(tau, sigma, discrete_frechet(tau, sigma), p, memo, {true, 1000, true});
  EXPECT_GT(memo.stats().hits, 0u);
  EXPECT_EQ(memo.collisions(), 0u);
}

TEST(BoxedDecide, MemoBoundToPartition) {
  const Curve a{{0, 0}, {1, 0}, {2, 0}};
  MemoTable memo;
  boxed_decide(a, a, 0.5, make_partition(3, 3, 1, 1), memo);
  EXPECT_THROW(boxed_decide(a, a, 0.5, make_partition(3, 3, 2, 1), memo), std::invalid_argument);
}

TEST(MemoTable, FreshStats) { EXPECT_EQ(MemoTable().stats(), (MemoStats{0, 0, 0})); }

TEST(MemoTable, PersistenceRoundTrip) {
  Rng rng(47);
  const auto tau = frechet::testing::random_curve(rng, 40, 2, 4.0);
  const auto sigma = frechet::testing::random_curve(rng, 40, 2, 4.0);
  const double d = discrete_frechet(tau, sigma);
  const auto p = make_partition(40, 40, 3, 2);
  MemoTable memo(3, 2);
  const bool want = boxed_decide(tau, sigma, d, p, memo).reachable;
  const auto path = (std::filesystem::temp_directory_path() / "frechet_memo_roundtrip.bin").string();
  memo.save(path);
  auto loaded = MemoTable::load(path, 3, 2);
  EXPECT_EQ(loaded.stats().entries, memo.stats().entries);
  EXPECT_EQ(boxed_decide(tau, sigma, d, p, loaded, {true}).reachable, want);
  EXPECT_EQ(loaded.stats().misses, 0u);
  // saving again gives the same bytes
  const auto path2 = path + ".2";
  loaded.save(path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)), {}), b2((std::istreambuf_iterator<char>(f2)), {});
  EXPECT_EQ(b1, b2);
  EXPECT_THROW(MemoTable::load(path, 4, 2), MemoFormatError);
  EXPECT_THROW(MemoTable::load(path, 3, 3), MemoFormatError);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST(MemoTable, RejectsForeignOrCorruptFiles) {
  const auto path = (std::filesystem::temp_directory_path() / "frechet_memo_bad.bin").string();
  {
    std::ofstream os(path, std::ios::binary);
    os << "not a memo file";
  }
  EXPECT_THROW(MemoTable::load(path, 3, 2), MemoFormatError);
  {
    // right magic, wrong format version
    std::ofstream os(path, std::ios::binary);
    os.write("FRMEMO\0\1", 8);
    const char v[4] = {9, 0, 0, 0};
    os.write(v, 4);
  }
  EXPECT_THROW(MemoTable::load(path, 3, 2), MemoFormatError);
  {
    // right header, truncated entries
    MemoTable t(3, 2);
    const Curve a{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    boxed_decide(a, a, 0.5, make_partition(4, 4, 3, 2), t);
    t.save(path);
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 3);
  }
  EXPECT_THROW(MemoTable::load(path, 3, 2), MemoFormatError);
  std::remove(path.c_str());
}

TEST(Digest, KnownVector) {
  // SHA-256("abc") begins ba7816bf 8f01cfea
  const std::string abc = "abc";
  const auto d = digest128(std::as_bytes(std::span(abc.data(), abc.size())));
  EXPECT_EQ(d.words[0], 0xeacf018fbf1678baull);
}
