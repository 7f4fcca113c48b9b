#include "ogflow/oracles.hpp"
#include "ogflow/samplers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace ogflow {
namespace {

Vector vec(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

SamplerConfig config(Method m, double eta) {
  SamplerConfig cfg;
  cfg.method = m;
  cfg.eta = eta;
  return cfg;
}

TEST(LangevinStep, Examples) {
  const TargetDensity t = synthetic_target();
  EXPECT_EQ(langevin_step(vec(0, 0), t, 0.1, Vector::Zero(2)), vec(0, 0));
  const Vector x = langevin_step(vec(1, 0), t, 0.01, Vector::Zero(2));
  EXPECT_DOUBLE_EQ(x[0], 0.99);
  EXPECT_DOUBLE_EQ(x[1], 0.0);
  const Vector y = langevin_step(vec(0, 0), t, 0.5, vec(1, 0));
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], 0.0);
}

TEST(OLangevinStep, LandsOnManifoldWhenEtaAlphaIsOne) {
  const Vector x = o_langevin_step(vec(1, 0), synthetic_target(), synthetic_constraint(),
                                   config(Method::o_langevin, 0.01), Vector::Zero(2));
  EXPECT_NEAR(x[0], 0.0, 1e-15);
  EXPECT_NEAR(x[1], 0.0, 1e-15);
}

TEST(OLangevinStep, AffineTangentialStep) {
  const ConstraintSpec flat = affine_constraint(vec(1, 0));
  const TargetDensity t = isotropic_gaussian_target(vec(0.5, 2));
  const Vector x = vec(0, -1);
  const Vector next = o_langevin_step(x, t, flat, config(Method::o_langevin, 0.05), Vector::Zero(2));
  const Vector expected = x + 0.05 * projection_matrix(vec(1, 0)) * t.score(x);
  EXPECT_LT((next - expected).norm(), 1e-15);
}

TEST(OLangevinStep, NoiseIsTangential) {
  const ConstraintSpec c = synthetic_constraint();
  const TargetDensity t = synthetic_target();
  SamplerConfig cfg = config(Method::o_langevin, 0.01);
  RandomStream rng(4);
  for (int k = 0; k < 100; ++k) {
    const Vector x = vec(4 * rng.uniform() - 2, 4 * rng.uniform() - 2);
    const Vector noise = rng.normal_vector(2);
    const Vector grad = c.gradient(x);
    EXPECT_LE(std::abs(grad.dot(projection_matrix(grad) * noise)), 1e-10 * grad.norm());
    const Vector with = o_langevin_step(x, t, c, cfg, noise);
    const Vector without = o_langevin_step(x, t, c, cfg, Vector::Zero(2));
    EXPECT_LE(std::abs(grad.dot(with - without)), 1e-10 * grad.norm() * (1 + noise.norm()));
    // Noise-free normal displacement: eta (-psi(g) + grad g^T r).
    const double normal = grad.dot(without - x);
    const double expected = 0.01 * (-psi(c.value(x), cfg.psi) + grad.dot(correction_field(x, c)));
    EXPECT_NEAR(normal, expected, 1e-10 * (1 + std::abs(expected)));
  }
}

TEST(OLangevinStep, SecondOrderFreeDropsCorrection) {
  const ConstraintSpec c = synthetic_constraint();
  const TargetDensity t = synthetic_target();
  SamplerConfig full = config(Method::o_langevin, 0.01);
  SamplerConfig sof = full;
  sof.second_order_free = true;
  const Vector x = vec(0.3, 0.9);
  const Vector diff = o_langevin_step(x, t, c, full, Vector::Zero(2)) -
                      o_langevin_step(x, t, c, sof, Vector::Zero(2));
  EXPECT_LT((diff - 0.01 * correction_field(x, c)).norm(), 1e-15);
  EXPECT_THROW(o_langevin_step(vec(0, 0), t, half_squared_norm_constraint(), full, vec(0, 0)),
               SingularGradient);
}

TEST(SvgdStep, SingleParticleIsGradientAscent) {
  const TargetDensity t = synthetic_target();
  Matrix one(1, 2);
  one << 0.4, -0.3;
  const Matrix v = svgd_velocity(ParticleEnsemble(one), t, 1.0);
  EXPECT_LT((v.row(0).transpose() - t.score(vec(0.4, -0.3))).norm(), 1e-15);
}

TEST(SvgdStep, TwoParticlesRepel) {
  const TargetDensity flat{[](const Vector&) { return 0.0; },
                           [](const Vector& x) { return Vector::Zero(x.size()).eval(); }, 2};
  Matrix pts(2, 2);
  pts << 0, 0, 1, 1;
  const Matrix v = svgd_velocity(ParticleEnsemble(pts), flat, 1.0);
  EXPECT_LT((v.row(0) + v.row(1)).norm(), 1e-15);
  EXPECT_LT(v.row(0).dot(pts.row(1) - pts.row(0)), 0.0);
  EXPECT_NEAR(v(0, 0), v(0, 1), 1e-15);
}

TEST(SvgdStep, ZeroStepLeavesEnsemble) {
  const ParticleEnsemble e = gaussian_cloud(vec(0, 0), 1.0, 10, 3);
  EXPECT_EQ(svgd_step(e, synthetic_target(), 0.0, KernelSpec::median()), e);
  EXPECT_EQ(o_svgd_step(e, synthetic_target(), synthetic_constraint(), config(Method::o_svgd, 0.0)),
            e);
}

TEST(OSvgdStep, SingleParticleReduction) {
  const ConstraintSpec c = synthetic_constraint();
  const TargetDensity t = synthetic_target();
  const PsiParams p{100.0, 0.0};
  Matrix one(1, 2);
  one << 0.4, -0.3;
  const Vector x = vec(0.4, -0.3);
  const Matrix v = o_svgd_velocity(ParticleEnsemble(one), t, c, p, 1.0);
  const Matrix d = projection_matrix(c.gradient(x));
  const Vector expected = v_sharp(x, c, p) + d * t.score(x) + d * correction_field(x, c);
  EXPECT_LT((v.row(0).transpose() - expected).norm(), 1e-12);
}

TEST(OSvgdStep, MatchesPairwiseKernelFormula) {
  const ConstraintSpec c = synthetic_constraint();
  const TargetDensity t = synthetic_target();
  const PsiParams p{100.0, 0.0};
  const ParticleEnsemble e = gaussian_cloud(vec(0.5, 0.2), 0.7, 8, 10);
  const double h = 0.8;
  for (const bool sof : {false, true}) {
    const Matrix v = o_svgd_velocity(e, t, c, p, h, sof);
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const Vector xi = e.particle(i);
      Vector sum = Vector::Zero(2);
      for (Eigen::Index j = 0; j < e.size(); ++j) {
        const Vector xj = e.particle(j);
        sum += k_perp(xi, xj, c, h) * t.score(xj) +
               (sof ? surrogate_grad_k_perp(xi, xj, c, h) : div_y_k_perp(xi, xj, c, h));
      }
      const Vector expected = v_sharp(xi, c, p) + sum / static_cast<double>(e.size());
      EXPECT_LT((v.row(i).transpose() - expected).norm(), 1e-10 * (1 + expected.norm()));
    }
  }
}

TEST(OSvgdStep, ExactPerpendicularDecay) {
  const ConstraintSpec c = synthetic_constraint();
  const TargetDensity t = synthetic_target();
  for (const PsiParams p : {PsiParams{100.0, 0.0}, PsiParams{5.0, 0.5}}) {
    const ParticleEnsemble e = gaussian_cloud(vec(1.5, 1.5), 0.5, 50, 7);
    const Matrix v = o_svgd_velocity(e, t, c, p, median_bandwidth(e));
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const Vector x = e.particle(i);
      const double g = c.value(x);
      EXPECT_NEAR(c.gradient(x).dot(v.row(i).transpose()), -psi(g, p),
                  1e-10 * (1 + std::abs(psi(g, p))));
    }
  }
}

TEST(OSvgdStep, AffineOnManifoldStaysOnManifold) {
  const ConstraintSpec flat = affine_constraint(vec(1, 0));
  Matrix pts(6, 2);
  pts << 0, -1, 0, 0.3, 0, 1.2, 0, 2, 0, -0.4, 0, 0.9;
  const ParticleEnsemble next =
      o_svgd_step(ParticleEnsemble(pts), isotropic_gaussian_target(vec(1, 1)), flat,
                  config(Method::o_svgd, 0.1));
  EXPECT_EQ(next.points().col(0).norm(), 0.0);
}

TEST(OSvgdStep, PermutationEquivariance) {
  const ConstraintSpec c = synthetic_constraint();
  const TargetDensity t = synthetic_target();
  const ParticleEnsemble e = gaussian_cloud(vec(0.5, 0.5), 1.0, 20, 14);
  std::vector<int> perm(20);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[3], perm[11]);
  Matrix shuffled(20, 2);
  for (int i = 0; i < 20; ++i) shuffled.row(i) = e.points().row(perm[i]);

  const SamplerConfig cfg = config(Method::o_svgd, 0.01);
  const ParticleEnsemble a = o_svgd_step(e, t, c, cfg);
  const ParticleEnsemble b = o_svgd_step(ParticleEnsemble(shuffled), t, c, cfg);
  const ParticleEnsemble sa = svgd_step(e, t, 0.01, KernelSpec::median());
  const ParticleEnsemble sb = svgd_step(ParticleEnsemble(shuffled), t, 0.01, KernelSpec::median());
  for (int i = 0; i < 20; ++i) {
    EXPECT_LT((b.points().row(i) - a.points().row(perm[i])).norm(), 1e-12);
    EXPECT_LT((sb.points().row(i) - sa.points().row(perm[i])).norm(), 1e-12);
  }
}

TEST(SamplerConfig, Validation) {
  EXPECT_TRUE(config(Method::o_langevin, 0.01).validate().empty());
  EXPECT_EQ(config(Method::o_svgd, 0.015).validate().size(), 1u);
  EXPECT_THROW(config(Method::o_svgd, 0.5).validate(), UnstableStepSize);
  EXPECT_TRUE(config(Method::svgd, 0.5).validate().empty());
  EXPECT_THROW(config(Method::langevin, 0.0).validate(), NonPositiveEta);

  SamplerConfig mh = config(Method::annealed_mh, 0.01);
  mh.annealing.eta_schedule = {0.1, 0.1};
  EXPECT_THROW(mh.validate(), BadSchedule);
  mh.annealing.eta_schedule = {};
  EXPECT_THROW(mh.validate(), BadSchedule);

  EXPECT_EQ(parse_method("o_svgd"), Method::o_svgd);
  EXPECT_THROW(parse_method("hmc"), InvalidArgument);
}

TEST(AnnealedMetropolis, SelfProposalAlwaysAccepted) {
  const AnnealedMetropolis mh(synthetic_target(), synthetic_constraint(), AnnealingConfig{});
  RandomStream rng(1);
  for (int k = 0; k < 20; ++k) {
    const Vector x = vec(4 * rng.uniform() - 2, 4 * rng.uniform() - 2);
    EXPECT_EQ(mh.log_acceptance(x, x, 0.01), 0.0);
  }
}

TEST(AnnealedMetropolis, RejectsBadSchedule) {
  EXPECT_THROW(annealed_mh_reference(synthetic_target(), synthetic_constraint(), 0.0,
                                     {0.01, 0.1}, 10, 10, 1),
               BadSchedule);
}

TEST(AnnealedMetropolis, HotChainMatchesUnconstrainedTarget) {
  const ConstraintSpec c = synthetic_constraint();
  const ParticleEnsemble chains =
      annealed_mh_reference(synthetic_target(), c, 0.0, {1e9}, 500, 1000, 2);
  // Under pi, g = x1 + x2^3 ~ N(0, 1), so E|g| = sqrt(2/pi).
  EXPECT_NEAR(mae(chains, c), std::sqrt(2.0 / 3.141592653589793), 0.1);
}

TEST(AnnealedMetropolis, ConcentratesOnManifold) {
  const ConstraintSpec c = synthetic_constraint();
  const ParticleEnsemble chains =
      annealed_mh_reference(synthetic_target(), c, 0.0, {1e-1, 1e-2, 1e-3}, 2000, 1000, 3);
  EXPECT_LT(mae(chains, c), 0.05);
  const double baseline =
      energy_distance(synthetic_ground_truth(1000, 4), synthetic_ground_truth(1000, 5));
  EXPECT_LT(energy_distance(chains, synthetic_ground_truth(1000, 6)), 3.0 * baseline);
}

TEST(RunSampler, ZeroIterationsRecordsInit) {
  SamplerConfig cfg = config(Method::o_langevin, 0.01);
  cfg.n_iters = 0;
  cfg.n_particles = 5;
  const ParticleEnsemble init = gaussian_cloud(vec(1, 1), 0.1, 5, 1);
  const RunRecord rec = run_sampler(cfg, synthetic_target(), synthetic_constraint(), init);
  ASSERT_EQ(rec.snapshots.size(), 1u);
  EXPECT_EQ(rec.final_samples(), init);
  EXPECT_EQ(rec.series("mae").values.size(), 1u);
}

TEST(RunSampler, SnapshotScheduleAndDeterminism) {
  const TargetDensity t = synthetic_target();
  const ConstraintSpec c = synthetic_constraint();
  for (const Method m : {Method::langevin, Method::o_langevin, Method::svgd, Method::o_svgd,
                         Method::annealed_mh}) {
    SamplerConfig cfg = config(m, 0.01);
    cfg.n_particles = 10;
    cfg.n_iters = 45;
    cfg.record_every = 10;
    cfg.seed = 99;
    const ParticleEnsemble init = gaussian_cloud(vec(1.5, 1.5), 0.1, 10, 5);
    const RunRecord a = run_sampler(cfg, t, c, init);
    const RunRecord b = run_sampler(cfg, t, c, init);
    std::vector<std::size_t> its;
    for (const auto& s : a.snapshots) its.push_back(s.iteration);
    EXPECT_EQ(its, (std::vector<std::size_t>{0, 10, 20, 30, 40, 45})) << method_name(m);
    ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
      EXPECT_EQ(a.snapshots[k].ensemble, b.snapshots[k].ensemble) << method_name(m);
    }
    for (const auto& s : a.metric_series) {
      EXPECT_EQ(s.values.size(), its.size());
      EXPECT_EQ(s.values, b.series(s.name).values);
    }
  }
}

TEST(RunSampler, ErrorsCarryIteration) {
  SamplerConfig cfg = config(Method::langevin, 0.5);
  cfg.n_particles = 5;
  cfg.n_iters = 500;
  const ParticleEnsemble init = gaussian_cloud(vec(1.5, 1.5), 0.1, 5, 1);
  try {
    run_sampler(cfg, synthetic_target(), synthetic_constraint(), init);
    FAIL() << "expected divergence";
  } catch (const StepError& e) {
    EXPECT_GT(e.iteration(), 0u);
    EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos);
  }
}

TEST(RunSampler, RejectsMismatchedInit) {
  SamplerConfig cfg = config(Method::o_langevin, 0.01);
  cfg.n_particles = 4;
  EXPECT_THROW(run_sampler(cfg, synthetic_target(), synthetic_constraint(),
                           gaussian_cloud(vec(0, 0), 1.0, 5, 1)),
               InvalidArgument);
  EXPECT_THROW(run_sampler(cfg, synthetic_target(), synthetic_constraint(),
                           ParticleEnsemble(Matrix::Zero(4, 3))),
               DimensionMismatch);
}

TEST(RunSampler, OLangevinBeatsLangevinOnConstraint) {
  const TargetDensity t = synthetic_target();
  const ConstraintSpec c = synthetic_constraint();
  const ParticleEnsemble init = synthetic_ground_truth(50, 3);
  SamplerConfig o = config(Method::o_langevin, 0.01);
  o.n_iters = 2000;
  o.record_every = 2000;
  // Plain Langevin at eta = 0.01 is unstable for |x2| above about 2.1, where
  // the score's stiffness 9 x2^4 exceeds 2 / eta, so the contrast uses 1e-3.
  SamplerConfig plain = o;
  plain.method = Method::langevin;
  plain.eta = 1e-3;
  plain.n_iters = 5000;
  plain.record_every = 5000;
  EXPECT_LT(run_sampler(o, t, c, init).series("mae").values.back().second, 0.05);
  EXPECT_GT(run_sampler(plain, t, c, init).series("mae").values.back().second, 0.5);
}

TEST(RunSampler, OffManifoldMaeRunningMaximum) {
  SamplerConfig cfg = config(Method::o_langevin, 0.01);
  cfg.n_iters = 1000;
  cfg.seed = 17;
  const ParticleEnsemble init = gaussian_cloud(vec(1.5, 1.5), 0.1, 50, 18);
  const RunRecord rec = run_sampler(cfg, synthetic_target(), synthetic_constraint(), init);
  const auto& mae_series = rec.series("mae").values;
  const double initial = mae_series.front().second;
  double suffix_max = 0.0;
  for (auto it = mae_series.rbegin(); it != mae_series.rend() && it->first >= 100; ++it) {
    suffix_max = std::max(suffix_max, it->second);
  }
  EXPECT_GT(initial, 1.0);
  EXPECT_LT(suffix_max, 0.05);
}

TEST(OLangevinStep, GeneratorConsistency) {
  // Affine g = x1 and f = x2^2, so grad f is tangential and the projected
  // generator is grad f^T s + Laplacian f = 2 x2 s_2 + 2. The one-step
  // estimate carries an exact O(eta) bias of eta s_2^2.
  const ConstraintSpec flat = affine_constraint(vec(1, 0));
  const TargetDensity t = synthetic_target();
  const std::vector<Vector> probes{vec(0.5, 0.2), vec(-1, 1), vec(0.3, -0.8), vec(2, 0.5),
                                   vec(-0.4, -1.3)};
  std::uint64_t seed = 40;
  for (const Vector& x : probes) {
    const double s2 = t.score(x)[1];
    const double limit = 2.0 * x[1] * s2 + 2.0;
    for (const double eta : {1e-2, 1e-3}) {
      SamplerConfig cfg = config(Method::o_langevin, eta);
      const MeanEstimate est = oracles::mc_mean(
          [&](RandomStream& rng) {
            const Vector next = o_langevin_step(x, t, flat, cfg, rng.normal_vector(2));
            return (next[1] * next[1] - x[1] * x[1]) / eta;
          },
          100000, ++seed);
      EXPECT_NEAR(est.mean, limit, 3.0 * est.std_error + eta * (s2 * s2 + 1.0))
          << "x = (" << x[0] << ", " << x[1] << "), eta " << eta;
    }
  }
}

}  // namespace
}  // namespace ogflow
