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

#ifndef PRIVLINUCB_GRAM_TREE_H_
#define PRIVLINUCB_GRAM_TREE_H_

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "privlinucb/rng.h"
#include "privlinucb/types.h"

namespace privlinucb {

// One row [x^T, y] of the augmented data matrix.
struct AugmentedRow {
  Eigen::VectorXd x;
  double y = 0.0;
};

// Source of the per-node noise matrices. Implementations add one fresh draw
// of a dim() x dim() symmetric matrix into `acc`.
class NodeNoiseSampler {
 public:
  virtual ~NodeNoiseSampler() = default;
  virtual int dim() const = 0;
  virtual void AddDraw(Rng& rng, Eigen::MatrixXd& acc) const = 0;
};

// m = ceil(log2(n) + 1), the number of tree levels and the maximal number of
// nodes summed by one prefix query.
int TreeDepth(std::int64_t n);

// Per-node privacy budget.
struct BudgetSplit {
  double eps0 = 0.0;
  double delta0 = 0.0;
};

// Wishart kinds: (eps / sqrt(8 m ln(2/delta)), delta / (2m)).
// Gaussian kind: (eps / sqrt(8 m ln(2/delta)), delta / 2), the zCDP-based
// accounting the Gaussian noise level is derived from.
// Non-private: infinite eps0, zero delta0.
BudgetSplit ComputeBudgetSplit(double eps, double delta, int m,
                               MechanismKind kind);

// A node covers leaves [index * 2^level + 1, (index + 1) * 2^level].
struct NodeId {
  int level = 0;
  std::int64_t index = 0;

  std::int64_t first() const { return index * (std::int64_t{1} << level) + 1; }
  std::int64_t last() const { return (index + 1) * (std::int64_t{1} << level); }
  friend bool operator<(const NodeId& a, const NodeId& b) {
    return std::pair(a.level, a.index) < std::pair(b.level, b.index);
  }
  friend bool operator==(const NodeId& a, const NodeId& b) {
    return a.level == b.level && a.index == b.index;
  }
};

// Canonical dyadic cover of [1, s], highest level first.
std::vector<NodeId> DyadicPrefixCover(std::int64_t s);

struct TreeOptions {
  // Keep every finalized node instead of only the latest one per level.
  // Needed for historic queries and for DumpCsv forensics.
  bool retain_all_nodes = false;
  // Rows with ||x||^2 + y^2 above bound^2 are rescaled to norm `bound`.
  double row_norm_bound = std::numeric_limits<double>::infinity();
};

// Noisy prefix sums of M_t = sum_{s<t} [x_s; y_s][x_s; y_s]^T.
//
// Each node is finalized (interval sum plus one noise draw) at the round its
// interval completes and is never redrawn. A query for round t sums the
// dyadic cover of [1, t-1] and pads with noise-only draws so that exactly
// m noise terms enter every answer. Padding draws come from a stream keyed by
// t, so repeated queries for the same t agree.
//
// Memory is O(m (d+1)^2) unless retain_all_nodes is set.
class PrivateGramTree {
 public:
  // `sampler` may be null, in which case no noise is added anywhere.
  PrivateGramTree(std::int64_t n, int d,
                  std::shared_ptr<const NodeNoiseSampler> sampler,
                  std::uint64_t seed, TreeOptions options = {});

  std::int64_t horizon() const { return n_; }
  std::int64_t padded_horizon() const { return n_padded_; }
  int depth() const { return m_; }
  int dim() const { return d_; }
  std::int64_t inserted() const { return inserted_; }
  int clipped_rows() const { return clipped_rows_; }

  // Rounds must arrive as 1, 2, ..., n.
  void Insert(std::int64_t t, const AugmentedRow& row);

  // Noisy M~_t over rounds 1..t-1, (d+1) x (d+1), no shift applied.
  Eigen::MatrixXd QueryAugmented(std::int64_t t) const;

  struct Split {
    Eigen::MatrixXd gram;  // top-left d x d block
    Eigen::VectorXd u;     // first d entries of the last column
  };
  Split Query(std::int64_t t) const;

  // Number of padding draws a query for round t uses.
  int PaddingCount(std::int64_t t) const;

  // Stored (noisy) value of a finalized node, or null if it is not held.
  const Eigen::MatrixXd* FindNode(const NodeId& id) const;

  // level,index,first,last,row,col,value for every held node.
  void DumpCsv(std::ostream& os) const;

 private:
  struct Slot {
    bool valid = false;
    std::int64_t index = 0;
    Eigen::MatrixXd value;
  };

  std::int64_t n_;
  std::int64_t n_padded_;
  int m_;
  int d_;
  std::shared_ptr<const NodeNoiseSampler> sampler_;
  std::uint64_t padding_seed_;
  TreeOptions options_;
  Rng node_rng_;
  std::int64_t inserted_ = 0;
  int clipped_rows_ = 0;
  std::vector<Eigen::MatrixXd> open_;  // exact sums of the open node per level
  std::vector<Slot> latest_;           // most recently finalized per level
  std::map<NodeId, Eigen::MatrixXd> retained_;
  Eigen::VectorXd row_buf_;
};

}  // namespace privlinucb

#endif  // PRIVLINUCB_GRAM_TREE_H_
