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

#ifndef PRIVLINUCB_NOISE_H_
#define PRIVLINUCB_NOISE_H_

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "privlinucb/gram_tree.h"
#include "privlinucb/linucb.h"
#include "privlinucb/rng.h"
#include "privlinucb/types.h"

namespace privlinucb {

// G^T G with G a dof x dim matrix of i.i.d. N(0, scale) entries.
Eigen::MatrixXd WishartSample(int dim, double scale, std::int64_t dof,
                              Rng& rng);

// Same law as WishartSample via the Bartlett decomposition; costs O(dim^2)
// draws instead of O(dof * dim). Requires dof >= dim.
Eigen::MatrixXd WishartSampleBartlett(int dim, double scale,
                                      std::int64_t dof, Rng& rng);

// (Z' + Z'^T) / sqrt(2) with Z' i.i.d. N(0, sigma_noise^2): off-diagonal
// variance sigma_noise^2, diagonal variance 2 sigma_noise^2.
Eigen::MatrixXd GaussianSymSample(int dim, double sigma_noise, Rng& rng);

// k = d + 1 + ceil(224 m eps^-2 ln(8m/delta) ln(2/delta)).
std::int64_t ComputeWishartK(double eps, double delta, int m, int d);

// Wishart degrees of freedom required for (eps0, delta0) on a single
// release: d + 1 + 28 eps0^-2 ln(4/delta0).
double WishartDofRequirement(double eps0, double delta0, int d);

// c = Lt^2 (sqrt(mk) - sqrt(d) - sqrt(2 ln(8n/alpha)))^2
//     - 4 Lt^2 sqrt(mk) (sqrt(d) + sqrt(2 ln(8n/alpha))).
// Throws kInvalidRegime unless sqrt(mk) > sqrt(d) + sqrt(2 ln(8n/alpha)).
double ComputeWishartShiftC(double Ltilde, int m, std::int64_t k,
                            std::int64_t n, double alpha, int d);

// sigma_noise^2 = 16 m Lt^4 ln(4/delta)^2 / eps^2.
double ComputeSigmaNoise(double Ltilde, int m, double eps, double delta);

// Upsilon = sqrt(32) m Lt^2 ln(4/delta) (4 sqrt(d) + 2 ln(2n/alpha)) / eps.
double ComputeUpsilon(double Ltilde, int m, std::int64_t n, double alpha,
                      double delta, double eps, int d);

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kNonPrivate;
  double eps = 1.0;
  double delta = 0.1;
  double rho = 1.0;  // constant regularizer of the non-private baseline
  // Replaces the default shift so that the lower eigenvalue bound of the
  // shifted regularizer equals this value. Gaussian and shifted Wishart only.
  std::optional<double> rho_min_override;
};

// A noise mechanism with every derived parameter fixed for one horizon.
class NoiseMechanism {
 public:
  // Throws kInvalidArgument on bad budgets and kInvalidRegime when the
  // shifted Wishart variant is requested outside its valid regime.
  static NoiseMechanism Create(const MechanismSpec& spec,
                               const BanditParams& params);

  MechanismKind kind() const { return spec_.kind; }
  const MechanismSpec& spec() const { return spec_; }
  bool is_private() const { return spec_.kind != MechanismKind::kNonPrivate; }
  int m() const { return m_; }
  int d() const { return d_; }
  double Ltilde() const { return ltilde_; }
  std::int64_t k() const { return k_; }
  double c() const { return c_; }
  double sigma_noise() const { return sigma_noise_; }
  double upsilon() const { return upsilon_; }
  const BudgetSplit& budget() const { return budget_; }
  const AccurateBounds& bounds() const { return bounds_; }

  // Multiple of the identity added to the aggregated d x d block at query
  // time: rho (non-private), -c (shifted Wishart), 0 (unshifted Wishart),
  // 2 Upsilon (Gaussian).
  double shift() const { return shift_; }

  // One (d+1) x (d+1) node draw. Throws kInvalidArgument for the non-private
  // baseline, which has no node noise.
  Eigen::MatrixXd NodeNoise(Rng& rng) const;

  // Sampler to hand to PrivateGramTree; null for the non-private baseline.
  std::shared_ptr<const NodeNoiseSampler> MakeNodeSampler() const;

  // Derived parameters as name/value pairs for run metadata.
  std::vector<std::pair<std::string, double>> Describe() const;

 private:
  NoiseMechanism() = default;

  MechanismSpec spec_;
  int d_ = 0;
  int m_ = 0;
  double ltilde_ = 0.0;
  std::int64_t k_ = 0;
  double c_ = 0.0;
  double sigma_noise_ = 0.0;
  double upsilon_ = 0.0;
  double shift_ = 0.0;
  BudgetSplit budget_;
  AccurateBounds bounds_;
};

// (rho_min, rho_max, gamma) for the mechanism's regularizers, holding with
// probability 1 - alpha / (2n) per round.
AccurateBounds ComputeAccurateBounds(const NoiseMechanism& mech,
                                     std::int64_t n, double alpha, int d);

}  // namespace privlinucb

#endif  // PRIVLINUCB_NOISE_H_
