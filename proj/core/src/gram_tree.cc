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

#include <bit>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "privlinucb/errors.h"

namespace privlinucb {

int TreeDepth(std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  // ceil(log2(n) + 1) == ceil(log2(n)) + 1, computed without rounding.
  const auto un = static_cast<std::uint64_t>(n);
  return static_cast<int>(std::bit_width(un - 1)) + 1;
}

BudgetSplit ComputeBudgetSplit(double eps, double delta, int m,
                               MechanismKind kind) {
  if (kind == MechanismKind::kNonPrivate) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0) || m < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "budget split needs eps > 0, delta in (0, 1), m >= 1");
  }
  const double eps0 = eps / std::sqrt(8.0 * m * std::log(2.0 / delta));
  if (kind == MechanismKind::kGaussianShifted) return {eps0, delta / 2.0};
  return {eps0, delta / (2.0 * m)};
}

std::vector<NodeId> DyadicPrefixCover(std::int64_t s) {
  std::vector<NodeId> cover;
  if (s <= 0) return cover;
  const auto us = static_cast<std::uint64_t>(s);
  for (int level = std::bit_width(us) - 1; level >= 0; --level) {
    if ((us >> level) & 1U) {
      cover.push_back(
          NodeId{level, static_cast<std::int64_t>(us >> level) - 1});
    }
  }
  return cover;
}

PrivateGramTree::PrivateGramTree(
    std::int64_t n, int d, std::shared_ptr<const NodeNoiseSampler> sampler,
    std::uint64_t seed, TreeOptions options)
    : n_(n),
      m_(TreeDepth(n)),
      d_(d),
      sampler_(std::move(sampler)),
      padding_seed_(DeriveSeed(seed, static_cast<std::uint64_t>(
                                         Stream::kPaddingNoise))),
      options_(options),
      node_rng_(MakeStream(seed, Stream::kNodeNoise)) {
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "d must be >= 0");
  if (sampler_ && sampler_->dim() != d + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "node sampler dimension must be d + 1");
  }
  n_padded_ = std::int64_t{1} << (m_ - 1);
  open_.assign(m_, Eigen::MatrixXd::Zero(d + 1, d + 1));
  latest_.resize(m_);
  row_buf_.resize(d + 1);
}

void PrivateGramTree::Insert(std::int64_t t, const AugmentedRow& row) {
  if (t != inserted_ + 1) {
    throw Error(ErrorCode::kOutOfOrderInsert,
                "expected round " + std::to_string(inserted_ + 1) + ", got " +
                    std::to_string(t));
  }
  if (t > n_) {
    throw Error(ErrorCode::kQueryBeyondHorizon,
                "insert past horizon " + std::to_string(n_));
  }
  if (row.x.size() != d_) {
    throw Error(ErrorCode::kInvalidArgument, "row dimension mismatch");
  }
  row_buf_.head(d_) = row.x;
  row_buf_(d_) = row.y;
  const double bound = options_.row_norm_bound;
  if (std::isfinite(bound)) {
    const double norm2 = row_buf_.squaredNorm();
    if (norm2 > bound * bound + 1e-9) {
      if (clipped_rows_ == 0) {
        std::clog << "privlinucb: warning: row " << t << " has norm "
                  << std::sqrt(norm2) << " > " << bound
                  << "; rescaling (further clips are counted silently)\n";
      }
      ++clipped_rows_;
      row_buf_ *= bound / std::sqrt(norm2);
    }
  }

  for (int level = 0; level < m_; ++level) {
    open_[level].selfadjointView<Eigen::Lower>().rankUpdate(row_buf_);
  }
  const auto ut = static_cast<std::uint64_t>(t);
  const int completed = std::countr_zero(ut);  // levels 0..completed finish
  for (int level = 0; level <= completed && level < m_; ++level) {
    Eigen::MatrixXd& acc = open_[level];
    for (Eigen::Index c = 1; c <= d_; ++c) {
      for (Eigen::Index r = 0; r < c; ++r) acc(r, c) = acc(c, r);
    }
    if (sampler_) sampler_->AddDraw(node_rng_, acc);
    Slot& slot = latest_[level];
    slot.valid = true;
    slot.index = static_cast<std::int64_t>(ut >> level) - 1;
    slot.value.swap(acc);
    if (options_.retain_all_nodes) {
      retained_[NodeId{level, slot.index}] = slot.value;
    }
    acc = Eigen::MatrixXd::Zero(d_ + 1, d_ + 1);
  }
  inserted_ = t;
}

const Eigen::MatrixXd* PrivateGramTree::FindNode(const NodeId& id) const {
  if (id.level < 0 || id.level >= m_) return nullptr;
  const Slot& slot = latest_[id.level];
  if (slot.valid && slot.index == id.index) return &slot.value;
  auto it = retained_.find(id);
  return it == retained_.end() ? nullptr : &it->second;
}

int PrivateGramTree::PaddingCount(std::int64_t t) const {
  if (!sampler_) return 0;
  return m_ - std::popcount(static_cast<std::uint64_t>(t - 1));
}

Eigen::MatrixXd PrivateGramTree::QueryAugmented(std::int64_t t) const {
  if (t < 1 || t > n_) {
    throw Error(ErrorCode::kQueryBeyondHorizon,
                "query for round " + std::to_string(t) + " outside [1, " +
                    std::to_string(n_) + "]");
  }
  if (t - 1 > inserted_) {
    throw Error(ErrorCode::kStaleQuery,
                "round " + std::to_string(t) + " queried before rounds up to " +
                    std::to_string(t - 1) + " were inserted");
  }
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d_ + 1, d_ + 1);
  for (const NodeId& id : DyadicPrefixCover(t - 1)) {
    const Eigen::MatrixXd* node = FindNode(id);
    if (node == nullptr) {
      throw Error(ErrorCode::kStaleQuery,
                  "node for round " + std::to_string(t) +
                      " no longer held; enable retain_all_nodes");
    }
    sum += *node;
  }
  const int padding = PaddingCount(t);
  if (padding > 0) {
    Rng rng(DeriveSeed(padding_seed_, static_cast<std::uint64_t>(t)));
    for (int i = 0; i < padding; ++i) sampler_->AddDraw(rng, sum);
  }
  return sum;
}

PrivateGramTree::Split PrivateGramTree::Query(std::int64_t t) const {
  Eigen::MatrixXd full = QueryAugmented(t);
  return Split{full.topLeftCorner(d_, d_), full.col(d_).head(d_)};
}

void PrivateGramTree::DumpCsv(std::ostream& os) const {
  std::map<NodeId, const Eigen::MatrixXd*> held;
  for (const auto& [id, value] : retained_) held[id] = &value;
  for (int level = 0; level < m_; ++level) {
    if (latest_[level].valid) {
      held[NodeId{level, latest_[level].index}] = &latest_[level].value;
    }
  }
  os << "level,index,first,last,row,col,value\n";
  const auto old_precision = os.precision(17);
  for (const auto& [id, value] : held) {
    for (Eigen::Index r = 0; r < value->rows(); ++r) {
      for (Eigen::Index c = 0; c < value->cols(); ++c) {
        os << id.level << ',' << id.index << ',' << id.first() << ','
           << id.last() << ',' << r << ',' << c << ',' << (*value)(r, c)
           << '\n';
      }
    }
  }
  os.precision(old_precision);
}

}  // namespace privlinucb
