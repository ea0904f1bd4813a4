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

#include "privlinucb/noise.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "privlinucb/errors.h"

namespace privlinucb {
namespace {

void CheckDim(int dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "dim must be >= 1");
}

// Adds scale * A A^T for a Bartlett factor A of W_dim(I, dof).
void AddBartlettDraw(int dim, double scale, std::int64_t dof, Rng& rng,
                     Eigen::MatrixXd& acc) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  NormalDistribution normal(0.0, 1.0);
  for (int i = 0; i < dim; ++i) {
    ChiSquaredDistribution chi2(static_cast<double>(dof - i));
    a(i, i) = std::sqrt(chi2(rng));
    for (int j = 0; j < i; ++j) a(i, j) = normal(rng);
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int l = 0; l <= j; ++l) s += a(i, l) * a(j, l);
      s *= scale;
      acc(i, j) += s;
      if (i != j) acc(j, i) += s;
    }
  }
}

void AddGaussianSymDraw(int dim, double sigma_noise, Rng& rng,
                        Eigen::MatrixXd& acc) {
  NormalDistribution normal(0.0, sigma_noise);
  Eigen::MatrixXd z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) z(i, j) = normal(rng);
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = (z(i, j) + z(j, i)) * inv_sqrt2;
      acc(i, j) += v;
      if (i != j) acc(j, i) += v;
    }
  }
}

class WishartNodeSampler : public NodeNoiseSampler {
 public:
  WishartNodeSampler(int dim, double scale, std::int64_t dof)
      : dim_(dim), scale_(scale), dof_(dof) {}

  int dim() const override { return dim_; }

  void AddDraw(Rng& rng, Eigen::MatrixXd& acc) const override {
    if (dof_ >= dim_) {
      AddBartlettDraw(dim_, scale_, dof_, rng, acc);
    } else {
      acc += WishartSample(dim_, scale_, dof_, rng);
    }
  }

 private:
  int dim_;
  double scale_;
  std::int64_t dof_;
};

class GaussianNodeSampler : public NodeNoiseSampler {
 public:
  GaussianNodeSampler(int dim, double sigma_noise)
      : dim_(dim), sigma_noise_(sigma_noise) {}

  int dim() const override { return dim_; }

  void AddDraw(Rng& rng, Eigen::MatrixXd& acc) const override {
    AddGaussianSymDraw(dim_, sigma_noise_, rng, acc);
  }

 private:
  int dim_;
  double sigma_noise_;
};

}  // namespace

Eigen::MatrixXd WishartSample(int dim, double scale, std::int64_t dof,
                              Rng& rng) {
  CheckDim(dim);
  if (dof < 1) throw Error(ErrorCode::kInvalidArgument, "dof must be >= 1");
  NormalDistribution normal(0.0, std::sqrt(scale));
  Eigen::MatrixXd g(dof, dim);
  for (std::int64_t i = 0; i < dof; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  w.selfadjointView<Eigen::Lower>().rankUpdate(g.transpose());
  return w.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd WishartSampleBartlett(int dim, double scale,
                                      std::int64_t dof, Rng& rng) {
  CheckDim(dim);
  if (dof < dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "Bartlett sampling needs dof >= dim");
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  AddBartlettDraw(dim, scale, dof, rng, w);
  return w;
}

Eigen::MatrixXd GaussianSymSample(int dim, double sigma_noise, Rng& rng) {
  CheckDim(dim);
  if (!(sigma_noise >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma_noise must be >= 0");
  }
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(dim, dim);
  if (sigma_noise == 0.0) return z;
  AddGaussianSymDraw(dim, sigma_noise, rng, z);
  return z;
}

std::int64_t ComputeWishartK(double eps, double delta, int m, int d) {
  if (!(eps > 0.0) || !(delta > 0.0 && delta < std::exp(-1.0)) || m < 1 ||
      d < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "Wishart k needs eps > 0, delta in (0, 1/e), m >= 1, d >= 0");
  }
  const double product = 224.0 * m / (eps * eps) *
                         std::log(8.0 * m / delta) * std::log(2.0 / delta);
  return d + 1 + static_cast<std::int64_t>(std::ceil(product));
}

double WishartDofRequirement(double eps0, double delta0, int d) {
  return d + 1 + 28.0 / (eps0 * eps0) * std::log(4.0 / delta0);
}

double ComputeWishartShiftC(double Ltilde, int m, std::int64_t k,
                            std::int64_t n, double alpha, int d) {
  const double root_mk = std::sqrt(static_cast<double>(m) * k);
  const double spread =
      std::sqrt(static_cast<double>(d)) +
      std::sqrt(2.0 * std::log(8.0 * static_cast<double>(n) / alpha));
  if (!(root_mk > spread)) {
    throw Error(ErrorCode::kInvalidRegime,
                "sqrt(mk) = " + std::to_string(root_mk) +
                    " does not exceed sqrt(d) + sqrt(2 ln(8n/alpha)) = " +
                    std::to_string(spread));
  }
  const double l2 = Ltilde * Ltilde;
  const double gap = root_mk - spread;
  return l2 * gap * gap - 4.0 * l2 * root_mk * spread;
}

double ComputeSigmaNoise(double Ltilde, int m, double eps, double delta) {
  const double l2 = Ltilde * Ltilde;
  const double log_term = std::log(4.0 / delta);
  return std::sqrt(16.0 * m * l2 * l2 * log_term * log_term / (eps * eps));
}

double ComputeUpsilon(double Ltilde, int m, std::int64_t n, double alpha,
                      double delta, double eps, int d) {
  return std::sqrt(32.0) * m * Ltilde * Ltilde * std::log(4.0 / delta) *
         (4.0 * std::sqrt(static_cast<double>(d)) +
          2.0 * std::log(2.0 * static_cast<double>(n) / alpha)) /
         eps;
}

NoiseMechanism NoiseMechanism::Create(const MechanismSpec& spec,
                                      const BanditParams& params) {
  params.Validate();
  NoiseMechanism mech;
  mech.spec_ = spec;
  mech.d_ = params.d;
  mech.m_ = TreeDepth(std::max<std::int64_t>(params.n, 1));
  mech.ltilde_ = params.Ltilde;
  mech.budget_ = ComputeBudgetSplit(spec.eps, spec.delta, mech.m_, spec.kind);
  if (spec.rho_min_override &&
      (spec.kind == MechanismKind::kNonPrivate ||
       spec.kind == MechanismKind::kWishartUnshifted ||
       !(*spec.rho_min_override > 0.0))) {
    throw Error(ErrorCode::kInvalidArgument,
                "rho_min override needs a shifted mechanism and a positive "
                "target");
  }
  const int d = params.d;
  switch (spec.kind) {
    case MechanismKind::kNonPrivate:
      if (!(spec.rho > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "rho must be positive");
      }
      mech.shift_ = spec.rho;
      break;
    case MechanismKind::kWishartShifted:
    case MechanismKind::kWishartUnshifted:
      mech.k_ = ComputeWishartK(spec.eps, spec.delta, mech.m_, d);
      if (spec.kind == MechanismKind::kWishartShifted) {
        mech.c_ = ComputeWishartShiftC(params.Ltilde, mech.m_, mech.k_,
                                       params.n, params.alpha, d);
      }
      break;
    case MechanismKind::kGaussianShifted:
      mech.sigma_noise_ =
          ComputeSigmaNoise(params.Ltilde, mech.m_, spec.eps, spec.delta);
      mech.upsilon_ = ComputeUpsilon(params.Ltilde, mech.m_, params.n,
                                     params.alpha, spec.delta, spec.eps, d);
      break;
  }
  mech.bounds_ = ComputeAccurateBounds(mech, params.n, params.alpha, d);
  switch (spec.kind) {
    case MechanismKind::kNonPrivate:
    case MechanismKind::kWishartUnshifted:
      break;
    case MechanismKind::kWishartShifted:
      // H' = H - c I; an override moves c so that rho_min' hits the target.
      if (spec.rho_min_override) {
        const double root_mk = std::sqrt(static_cast<double>(mech.m_) * mech.k_);
        const double spread = std::sqrt(static_cast<double>(d)) +
                              std::sqrt(2.0 * std::log(8.0 * params.n /
                                                       params.alpha));
        const double raw_rho_min = params.Ltilde * params.Ltilde *
                                   (root_mk - spread) * (root_mk - spread);
        mech.shift_ = *spec.rho_min_override - raw_rho_min;
      } else {
        mech.shift_ = -mech.c_;
      }
      break;
    case MechanismKind::kGaussianShifted:
      mech.shift_ = mech.bounds_.rho_min + mech.upsilon_;
      break;
  }
  return mech;
}

Eigen::MatrixXd NoiseMechanism::NodeNoise(Rng& rng) const {
  auto sampler = MakeNodeSampler();
  if (!sampler) {
    throw Error(ErrorCode::kInvalidArgument,
                "the non-private baseline has no node noise");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d_ + 1, d_ + 1);
  sampler->AddDraw(rng, out);
  return out;
}

std::shared_ptr<const NodeNoiseSampler> NoiseMechanism::MakeNodeSampler()
    const {
  switch (spec_.kind) {
    case MechanismKind::kNonPrivate:
      return nullptr;
    case MechanismKind::kWishartShifted:
    case MechanismKind::kWishartUnshifted:
      return std::make_shared<WishartNodeSampler>(d_ + 1, ltilde_ * ltilde_,
                                                  k_);
    case MechanismKind::kGaussianShifted:
      return std::make_shared<GaussianNodeSampler>(d_ + 1, sigma_noise_);
  }
  return nullptr;
}

std::vector<std::pair<std::string, double>> NoiseMechanism::Describe() const {
  std::vector<std::pair<std::string, double>> out = {
      {"m", static_cast<double>(m_)},
      {"shift", shift_},
      {"rho_min", bounds_.rho_min},
      {"rho_max", bounds_.rho_max},
      {"gamma", bounds_.gamma},
  };
  if (is_private()) {
    out.emplace_back("eps0", budget_.eps0);
    out.emplace_back("delta0", budget_.delta0);
  }
  switch (spec_.kind) {
    case MechanismKind::kNonPrivate:
      out.emplace_back("rho", spec_.rho);
      break;
    case MechanismKind::kWishartShifted:
      out.emplace_back("c", c_);
      [[fallthrough]];
    case MechanismKind::kWishartUnshifted:
      out.emplace_back("k", static_cast<double>(k_));
      break;
    case MechanismKind::kGaussianShifted:
      out.emplace_back("sigma_noise", sigma_noise_);
      out.emplace_back("upsilon", upsilon_);
      break;
  }
  return out;
}

AccurateBounds ComputeAccurateBounds(const NoiseMechanism& mech,
                                     std::int64_t n, double alpha, int d) {
  const double dn = static_cast<double>(n);
  const double root_d = std::sqrt(static_cast<double>(d));
  const double tail8 = root_d + std::sqrt(2.0 * std::log(8.0 * dn / alpha));
  const double tail2 = root_d + std::sqrt(2.0 * std::log(2.0 * dn / alpha));
  const double l2 = mech.Ltilde() * mech.Ltilde();
  const auto& target = mech.spec().rho_min_override;

  switch (mech.kind()) {
    case MechanismKind::kNonPrivate:
      return {mech.spec().rho, mech.spec().rho, 0.0};
    case MechanismKind::kWishartUnshifted:
    case MechanismKind::kWishartShifted: {
      const double root_mk =
          std::sqrt(static_cast<double>(mech.m()) * mech.k());
      if (!(root_mk > tail8)) {
        throw Error(ErrorCode::kInvalidRegime,
                    "Wishart eigenvalue bounds need sqrt(mk) > sqrt(d) + "
                    "sqrt(2 ln(8n/alpha))");
      }
      const AccurateBounds raw{l2 * (root_mk - tail8) * (root_mk - tail8),
                               l2 * (root_mk + tail8) * (root_mk + tail8),
                               mech.Ltilde() * tail2};
      if (mech.kind() == MechanismKind::kWishartUnshifted) return raw;
      if (!target) {
        const double rho_min = 4.0 * l2 * root_mk * tail8;
        return {rho_min, 2.0 * rho_min,
                mech.Ltilde() * std::sqrt(root_mk * tail2)};
      }
      // Shifting by -c' moves both eigenvalue bounds by c'. For c' > 0 the
      // H^{-1}-norm of h grows by at most sqrt(rho_min / (rho_min - c')).
      const double gamma =
          *target < raw.rho_min
              ? raw.gamma * std::sqrt(raw.rho_min / *target)
              : raw.gamma;
      return {*target, *target + (raw.rho_max - raw.rho_min), gamma};
    }
    case MechanismKind::kGaussianShifted: {
      const double upsilon = mech.upsilon();
      const double rho_min = target ? *target : upsilon;
      return {rho_min, rho_min + 2.0 * upsilon,
              mech.sigma_noise() *
                  std::sqrt(static_cast<double>(mech.m()) / rho_min) * tail2};
    }
  }
  return {};
}

}  // namespace privlinucb
