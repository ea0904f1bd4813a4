// Copyright 2026 The privlinucb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privlinucb/gram_tree.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "privlinucb/errors.h"
#include "test_util.h"

namespace privlinucb {
namespace {

using testing::ConstantSampler;
using testing::DenseGram;
using testing::RandomSymSampler;
using testing::ZeroNoiseSampler;

std::vector<AugmentedRow> RandomRows(int count, int d, Rng& rng) {
  std::vector<AugmentedRow> rows;
  for (int s = 0; s < count; ++s) {
    rows.push_back(AugmentedRow{testing::RandomMatrix(d, 1, rng).col(0),
                                testing::RandomMatrix(1, 1, rng)(0, 0)});
  }
  return rows;
}

// Entries on a 2^-8 grid with small magnitude: every partial sum of outer
// products is exact, whatever the summation order.
std::vector<AugmentedRow> GridRows(int count, int d, Rng& rng) {
  UniformIntDistribution pick(-64, 64);
  std::vector<AugmentedRow> rows;
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = pick(rng) / 256.0;
    rows.push_back(AugmentedRow{x, pick(rng) / 256.0});
  }
  return rows;
}

PrivateGramTree Noiseless(std::int64_t n, int d, TreeOptions options = {}) {
  return PrivateGramTree(n, d, std::make_shared<ZeroNoiseSampler>(d + 1), 1,
                         options);
}

TEST(TreeDepthTest, Examples) {
  EXPECT_EQ(TreeDepth(8), 4);
  EXPECT_EQ(TreeDepth(1), 1);
  EXPECT_EQ(TreeDepth(50000000), 27);
}

TEST(TreeDepthTest, MatchesCeilingOfLog) {
  for (std::int64_t n = 1; n < 5000; ++n) {
    const int expected =
        static_cast<int>(std::ceil(std::log2(static_cast<double>(n)) + 1.0));
    ASSERT_EQ(TreeDepth(n), expected) << n;
  }
  EXPECT_THROW(TreeDepth(0), Error);
}

TEST(TreeTest, PaddedHorizon) {
  EXPECT_EQ(Noiseless(1, 2).padded_horizon(), 1);
  EXPECT_EQ(Noiseless(5, 2).padded_horizon(), 8);
  EXPECT_EQ(Noiseless(8, 2).padded_horizon(), 8);
  EXPECT_EQ(Noiseless(8, 2).depth(), 4);
}

TEST(TreeTest, ZeroRowsLeaveOnlyNoise) {
  const int d = 2;
  auto sampler = std::make_shared<RandomSymSampler>(d + 1);
  PrivateGramTree tree(8, d, sampler, 99, TreeOptions{true});
  for (int t = 1; t <= 8; ++t) {
    tree.Insert(t, AugmentedRow{Eigen::VectorXd::Zero(d), 0.0});
  }
  // Replay the node stream in finalization order: at round t levels
  // 0..ctz(t) complete, lowest first.
  Rng replay = MakeStream(99, Stream::kNodeNoise);
  for (int t = 1; t <= 8; ++t) {
    for (int level = 0; level <= std::countr_zero(static_cast<unsigned>(t));
         ++level) {
      Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(d + 1, d + 1);
      sampler->AddDraw(replay, expected);
      const NodeId id{level, (t >> level) - 1};
      const Eigen::MatrixXd* node = tree.FindNode(id);
      ASSERT_NE(node, nullptr);
      EXPECT_EQ(*node, expected) << "level " << level << " index " << id.index;
    }
  }
}

TEST(TreeTest, NoiselessPairNode) {
  Rng rng(4);
  const auto rows = RandomRows(2, 3, rng);
  PrivateGramTree tree = Noiseless(8, 3);
  tree.Insert(1, rows[0]);
  tree.Insert(2, rows[1]);
  const Eigen::MatrixXd* node = tree.FindNode(NodeId{1, 0});
  ASSERT_NE(node, nullptr);
  Eigen::VectorXd z0(4), z1(4);
  z0 << rows[0].x, rows[0].y;
  z1 << rows[1].x, rows[1].y;
  EXPECT_LE((*node - (z0 * z0.transpose() + z1 * z1.transpose())).norm(),
            1e-14);
}

TEST(TreeTest, RootMatchesDenseGram) {
  Rng rng(8);
  const auto rows = RandomRows(4, 2, rng);
  PrivateGramTree tree = Noiseless(4, 2);
  for (int t = 1; t <= 4; ++t) tree.Insert(t, rows[t - 1]);
  const Eigen::MatrixXd* root = tree.FindNode(NodeId{2, 0});
  ASSERT_NE(root, nullptr);
  Eigen::MatrixXd a(4, 3);
  for (int s = 0; s < 4; ++s) a.row(s) << rows[s].x.transpose(), rows[s].y;
  EXPECT_LE((*root - a.transpose() * a).norm(), 1e-13);
}

TEST(TreeTest, EmptyPrefixIsPureNoise) {
  const int d = 3;
  PrivateGramTree tree(8, d, std::make_shared<ConstantSampler>(d + 1, 1.0), 1);
  const Eigen::MatrixXd q = tree.QueryAugmented(1);
  EXPECT_EQ(tree.PaddingCount(1), 4);
  EXPECT_EQ(q, 4.0 * Eigen::MatrixXd::Identity(d + 1, d + 1));
}

TEST(TreeTest, EveryQuerySumsExactlyMNoiseTerms) {
  const int d = 2;
  for (std::int64_t n : {1, 2, 7, 8, 100}) {
    PrivateGramTree tree(n, d, std::make_shared<ConstantSampler>(d + 1, 1.0),
                         1);
    for (std::int64_t t = 1; t <= n; ++t) {
      const Eigen::MatrixXd q = tree.QueryAugmented(t);
      ASSERT_EQ(q, tree.depth() * Eigen::MatrixXd::Identity(d + 1, d + 1))
          << "n=" << n << " t=" << t;
      tree.Insert(t, AugmentedRow{Eigen::VectorXd::Zero(d), 0.0});
    }
  }
}

TEST(TreeTest, QueryAtSixUsesTwoDataNodes) {
  const int d = 2;
  Rng rng(6);
  const auto rows = RandomRows(5, d, rng);
  PrivateGramTree tree(8, d, std::make_shared<ConstantSampler>(d + 1, 1.0), 1);
  for (int t = 1; t <= 5; ++t) tree.Insert(t, rows[t - 1]);
  const auto cover = DyadicPrefixCover(5);
  ASSERT_EQ(cover.size(), 2u);
  EXPECT_EQ(cover[0].first(), 1);
  EXPECT_EQ(cover[0].last(), 4);
  EXPECT_EQ(cover[1].first(), 5);
  EXPECT_EQ(cover[1].last(), 5);
  EXPECT_EQ(tree.PaddingCount(6), 2);
  // Each data node carries one unit draw; padding adds the other m - 2.
  const Eigen::MatrixXd data =
      tree.QueryAugmented(6) - 4.0 * Eigen::MatrixXd::Identity(d + 1, d + 1);
  EXPECT_LE((data - DenseGram(rows, 5, d)).norm(), 1e-13);
  const auto split = tree.Query(6);
  const Eigen::MatrixXd dense = DenseGram(rows, 5, d);
  EXPECT_LE((split.gram - dense.topLeftCorner(d, d)).norm(),
            4.0 * std::sqrt(d) + 1e-12);
  EXPECT_LE((split.u - dense.col(d).head(d)).norm(), 1e-13);
}

TEST(TreeTest, ExactPrefixSumsForEveryRound) {
  const int d = 3, n = 77;
  Rng rng(12);
  const auto rows = GridRows(n, d, rng);
  PrivateGramTree tree = Noiseless(n, d);
  for (int t = 1; t <= n; ++t) {
    ASSERT_EQ(tree.QueryAugmented(t), DenseGram(rows, t - 1, d)) << t;
    tree.Insert(t, rows[t - 1]);
  }
}

TEST(TreeTest, RepeatedQueriesAgree) {
  const int d = 3;
  Rng rng(1);
  const auto rows = RandomRows(20, d, rng);
  PrivateGramTree tree(32, d, std::make_shared<RandomSymSampler>(d + 1), 5);
  for (int t = 1; t <= 20; ++t) {
    const Eigen::MatrixXd first = tree.QueryAugmented(t);
    EXPECT_EQ(tree.QueryAugmented(t), first);
    tree.Insert(t, rows[t - 1]);
  }
}

TEST(TreeTest, CoverSizeIsBounded) {
  for (std::int64_t n : {1, 5, 64, 1000}) {
    const int limit = TreeDepth(n);
    for (std::int64_t t = 1; t <= n; ++t) {
      const auto cover = DyadicPrefixCover(t - 1);
      ASSERT_LE(static_cast<int>(cover.size()), limit);
      std::int64_t next = 1;
      for (const NodeId& id : cover) {
        ASSERT_EQ(id.first(), next);
        next = id.last() + 1;
      }
      ASSERT_EQ(next, t);
    }
  }
}

TEST(TreeTest, ChangingOneRowTouchesOnlyItsRootPath) {
  const int d = 2, n = 16;
  Rng rng(21);
  auto rows = GridRows(n, d, rng);
  auto altered = rows;
  const int changed = 11;  // leaf index 10 at level 0
  altered[changed - 1].x(0) += 0.5;
  PrivateGramTree a = Noiseless(n, d, TreeOptions{true});
  PrivateGramTree b = Noiseless(n, d, TreeOptions{true});
  for (int t = 1; t <= n; ++t) {
    a.Insert(t, rows[t - 1]);
    b.Insert(t, altered[t - 1]);
  }
  int differing = 0;
  for (int level = 0; level < a.depth(); ++level) {
    for (std::int64_t index = 0; index < (n >> level); ++index) {
      const NodeId id{level, index};
      const bool on_path = id.first() <= changed && changed <= id.last();
      const bool differs = *a.FindNode(id) != *b.FindNode(id);
      EXPECT_EQ(differs, on_path) << level << "," << index;
      differing += differs;
    }
  }
  EXPECT_EQ(differing, a.depth());
}

TEST(TreeTest, InsertOutOfOrder) {
  PrivateGramTree tree = Noiseless(8, 1);
  const AugmentedRow row{Eigen::VectorXd::Ones(1), 1.0};
  tree.Insert(1, row);
  for (std::int64_t t : {1, 3}) {
    try {
      tree.Insert(t, row);
      FAIL() << "expected an error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kOutOfOrderInsert);
    }
  }
}

TEST(TreeTest, QueryErrors) {
  PrivateGramTree tree = Noiseless(4, 1);
  for (std::int64_t t : {0, 5}) {
    try {
      tree.QueryAugmented(t);
      FAIL() << "expected an error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kQueryBeyondHorizon);
    }
  }
  try {
    tree.QueryAugmented(3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStaleQuery);
  }
}

TEST(TreeTest, HistoricQueriesNeedRetainedNodes) {
  const AugmentedRow row{Eigen::VectorXd::Ones(1), 1.0};
  PrivateGramTree lean = Noiseless(8, 1);
  PrivateGramTree full = Noiseless(8, 1, TreeOptions{true});
  for (int t = 1; t <= 4; ++t) {
    lean.Insert(t, row);
    full.Insert(t, row);
  }
  // [1, 2] was superseded at level 1 by [3, 4].
  EXPECT_THROW(lean.QueryAugmented(3), Error);
  EXPECT_EQ(full.QueryAugmented(3), 2.0 * Eigen::MatrixXd::Ones(2, 2));
}

TEST(TreeTest, OversizedRowsAreRescaled) {
  TreeOptions options;
  options.row_norm_bound = std::sqrt(2.0);
  PrivateGramTree tree = Noiseless(4, 1, options);
  tree.Insert(1, AugmentedRow{Eigen::VectorXd::Constant(1, 3.0), 4.0});
  const Eigen::MatrixXd q = tree.QueryAugmented(2);
  tree.Insert(2, AugmentedRow{Eigen::VectorXd::Constant(1, 1.0), 1.0});
  EXPECT_EQ(tree.clipped_rows(), 1);
  EXPECT_NEAR(q.trace(), 2.0, 1e-12);  // squared norm after rescaling
  EXPECT_NEAR(q(0, 1) / q(0, 0), 4.0 / 3.0, 1e-12);
}

TEST(TreeTest, SamplerDimensionMustMatch) {
  EXPECT_THROW(PrivateGramTree(4, 2, std::make_shared<ZeroNoiseSampler>(2), 1),
               Error);
}

TEST(BudgetSplitTest, WishartExample) {
  const BudgetSplit b =
      ComputeBudgetSplit(1.0, 0.1, 27, MechanismKind::kWishartShifted);
  EXPECT_NEAR(b.eps0, 1.0 / std::sqrt(8.0 * 27.0 * std::log(20.0)), 1e-15);
  EXPECT_NEAR(b.eps0, 0.03932, 1e-5);
  EXPECT_DOUBLE_EQ(b.delta0, 0.1 / 54.0);
}

TEST(BudgetSplitTest, GaussianKeepsHalfDelta) {
  const BudgetSplit b =
      ComputeBudgetSplit(1.0, 0.1, 27, MechanismKind::kGaussianShifted);
  EXPECT_NEAR(b.eps0, 1.0 / std::sqrt(8.0 * 27.0 * std::log(20.0)), 1e-15);
  EXPECT_DOUBLE_EQ(b.delta0, 0.05);
}

TEST(BudgetSplitTest, FixedPointWhenDenominatorIsOne) {
  // 8 m ln(2/delta) = 1 would need delta > 1, so check the algebra where
  // 8 m ln(2/delta) = 32 instead.
  const double delta = 2.0 * std::exp(-2.0);
  const BudgetSplit b =
      ComputeBudgetSplit(3.0, delta, 2, MechanismKind::kWishartUnshifted);
  EXPECT_NEAR(b.eps0, 3.0 / std::sqrt(32.0), 1e-15);
}

TEST(BudgetSplitTest, NonPrivateAndInvalidInputs) {
  const BudgetSplit b = ComputeBudgetSplit(1, 0.1, 3, MechanismKind::kNonPrivate);
  EXPECT_TRUE(std::isinf(b.eps0));
  EXPECT_EQ(b.delta0, 0.0);
  EXPECT_THROW(ComputeBudgetSplit(0.0, 0.1, 3, MechanismKind::kWishartShifted),
               Error);
  EXPECT_THROW(ComputeBudgetSplit(1.0, 1.0, 3, MechanismKind::kWishartShifted),
               Error);
}

TEST(TreeTest, DumpListsHeldNodes) {
  PrivateGramTree tree = Noiseless(4, 1, TreeOptions{true});
  for (int t = 1; t <= 3; ++t) {
    tree.Insert(t, AugmentedRow{Eigen::VectorXd::Constant(1, t), 0.0});
  }
  std::ostringstream os;
  tree.DumpCsv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "level,index,first,last,row,col,value");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4 * 4);  // nodes [1], [2], [3], [1,2]; 2x2 entries each
  EXPECT_NE(os.str().find("1,0,1,2,0,0,5\n"), std::string::npos);
}

}  // namespace
}  // namespace privlinucb
