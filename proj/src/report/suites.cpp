#include "ale/l2_harmonic.hpp"
#include "ale/report.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace ale {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::paper_constant: return "paper-constant";
    case Provenance::derived_oracle: return "derived-oracle";
    case Provenance::trivial_identity: return "trivial-identity";
  }
  return "derived-oracle";
}

bool SuiteResult::passed() const { return failures() == 0; }

std::size_t SuiteResult::failures() const {
  std::size_t n = 0;
  for (const Check& c : checks) n += c.passed ? 0 : 1;
  return n;
}

Check& SuiteResult::expect(const std::string& id, double expected, double computed, double tol, Provenance p,
                           bool relative, const std::string& note) {
  Check c{id, expected, computed, tol, relative, false, p, note};
  const double scale = relative ? std::abs(expected) : 1.0;
  c.passed = std::isfinite(computed) && std::abs(computed - expected) <= tol * scale;
  checks.push_back(c);
  return checks.back();
}

Check& SuiteResult::at_most(const std::string& id, double computed, double bound, Provenance p,
                            const std::string& note) {
  Check c{id, bound, computed, 0.0, false, std::isfinite(computed) && computed <= bound, p, note.empty() ? "upper bound" : note};
  checks.push_back(c);
  return checks.back();
}

Check& SuiteResult::raised(const std::string& id, bool raised, Provenance p, const std::string& note) {
  Check c{id, 1.0, raised ? 1.0 : 0.0, 0.0, false, raised, p, note};
  checks.push_back(c);
  return checks.back();
}

void SuiteResult::append(const SuiteResult& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  seconds += other.seconds;
}

double SuiteOptions::tol(const std::string& id, double fallback) const {
  const auto it = tolerance.find(id);
  return it == tolerance.end() ? fallback : it->second;
}

namespace {

std::string tag(const std::string& base, const SuiteOptions& o) {
  std::ostringstream os;
  os << base << "[k=" << o.k << ",lambda=" << o.lambda << "]";
  return os.str();
}

// Seeded sample points away from centers and from the strings of their preferred patch.
std::vector<ChartPoint> sample_points(const GHConfig& cfg, std::size_t count, std::uint64_t seed, double box,
                                      double clearance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-box, box), angle(0.0, 2.0 * M_PI);
  std::vector<ChartPoint> out;
  while (out.size() < count) {
    const Vec3 x(coord(rng), coord(rng), coord(rng));
    bool ok = true;
    for (const Center& c : cfg.centers) ok = ok && (x - c.position).norm() > clearance;
    const Patch patch = preferred_patch(cfg, x);
    if (!ok || string_distance(cfg, x, patch) < clearance) continue;
    out.push_back({x, angle(rng), patch});
  }
  return out;
}

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

double riemann_max(const RiemannData& d) { return d.riemann.max_abs(); }

}  // namespace

SuiteResult suite_appendix_constants(const SuiteOptions& o) {
  SuiteResult s{"appendix_constants", {}, 0.0};
  const GHConfig cfg = GHConfig::canonical(o.k, o.lambda);
  const double k = o.k, lam = o.lambda;
  const double vol = vol_sigma(cfg);
  s.expect(tag("vol_sigma", o), 2.0 * M_PI * (k + 1) * lam, vol, o.tol("vol_sigma", 1e-6), Provenance::paper_constant, true);
  const double int_m = sigma_integrate(cfg, [&cfg](double x1) { return moment_map(cfg, Vec3(x1, 0, 0)); });
  s.expect(tag("int_m_omega1", o), M_PI * std::pow(k + 1, 3) * lam * lam, int_m, o.tol("int_m_omega1", 1e-6),
           Provenance::paper_constant, true);
  const double int_phi = sigma_integrate(cfg, [&cfg](double x1) { return harmonic_phi1(cfg, {Vec3(x1, 0, 0), 0.0, Patch::north}); });
  const double phi_expected = -2.0 * M_PI * (k + 1) * (k + 1) * (k - 1) * lam * lam;
  if (o.k == 1)
    s.expect(tag("int_phi1", o), phi_expected, int_phi, o.tol("int_phi1", 1e-8), Provenance::paper_constant, false,
             "absolute at k = 1");
  else
    s.expect(tag("int_phi1", o), phi_expected, int_phi, o.tol("int_phi1", 1e-6), Provenance::paper_constant, true);
  s.expect(tag("m_p1", o), (k + 1) * lam, moment_map(cfg, cfg.centers.back().position), o.tol("m_p1", 1e-6),
           Provenance::paper_constant, true);
  s.expect(tag("int_m_omega1_identity", o), M_PI * (k + 1) * std::pow(vol / (2.0 * M_PI), 2), int_m,
           o.tol("int_m_omega1_identity", 1e-8), Provenance::paper_constant, true);
  return s;
}

SuiteResult suite_gh(const SuiteOptions& o) {
  SuiteResult s{"gh", {}, 0.0};
  const GHConfig cfg = GHConfig::canonical(o.k, o.lambda);
  const double kp1 = o.k + 1;
  const FdScheme fd{1e-3 * o.lambda, true};

  const Vec3 far(1e6, 2e5, -3e5);
  s.expect(tag("rho_V_limit", o), kp1 / 2.0, far.norm() * eval_V(cfg, far), o.tol("rho_V_limit", 1e-5),
           Provenance::paper_constant, true);
  s.expect(tag("m_p1", o), kp1 * o.lambda, moment_map(cfg, cfg.centers.back().position), 1e-12,
           Provenance::paper_constant, true);

  const auto points = sample_points(cfg, 20, 11, 3.0 * o.lambda * kp1 / 2.0, 0.5 * o.lambda);
  struct PointResiduals {
    double ricci, d_omega, killing, moment, djdm_plus, djdm_23;
  };
  const auto residuals = parallel_map<PointResiduals>(points.size(), [&](std::size_t n) {
    const ChartPoint& p = points[n];
    const Vec4 y = p.coords();
    const MetricField metric = gh_metric_field(cfg, p.patch);
    const auto triple_field = gh_triple_field(cfg, p.patch);
    PointResiduals r{};
    r.ricci = max_abs(ricci(riemann_fd(metric, y, fd)));
    for (int i = 0; i < 3; ++i) {
      FormField w{2, [&, i](const Vec4& z) { return triple_field(z)[static_cast<std::size_t>(i)]; }, Duality::self_dual, "omega"};
      r.d_omega = std::max(r.d_omega, fd_d(w, y, fd).max_abs());
    }
    // Lie derivative of g along xi.
    auto xi = [&](const Vec4& z) { return xi_field(cfg, ChartPoint::from_coords(z, p.patch)); };
    const Mat4 g = metric(y);
    const Vec4 xi0 = xi(y);
    Mat4 lie = Mat4::Zero();
    for (int c = 0; c < 4; ++c) lie += xi0[c] * fd_partial(metric, y, c, fd);
    for (int a = 0; a < 4; ++a) {
      const Vec4 dxi = fd_partial(xi, y, a, fd);
      const Vec4 lowered = g * dxi;
      lie.row(a) += lowered.transpose();
      lie.col(a) += lowered;
    }
    r.killing = max_abs(lie);
    const Vec3 dm3 = grad_moment_map(cfg, p.base);
    const Form w1 = gh_triple(cfg, p)[0];
    r.moment = (interior(xi0, w1) + one_form(Vec4(dm3[0], dm3[1], dm3[2], 0.0))).max_abs();
    const auto triple = gh_triple(cfg, p);
    for (int i = 0; i < 3; ++i) {
      FormField half_jdm{1, [&, i](const Vec4& z) { return 0.5 * one_form(J_dm(cfg, ChartPoint::from_coords(z, p.patch), i)); }};
      const Form d = fd_d(half_jdm, y, fd);
      if (i == 0)
        r.djdm_plus = (split_sd(g, d).sd - triple[0]).max_abs();
      else
        r.djdm_23 = std::max(r.djdm_23, (d - triple[static_cast<std::size_t>(i)]).max_abs());
    }
    return r;
  });
  PointResiduals worst{};
  for (const auto& r : residuals) {
    worst.ricci = std::max(worst.ricci, r.ricci);
    worst.d_omega = std::max(worst.d_omega, r.d_omega);
    worst.killing = std::max(worst.killing, r.killing);
    worst.moment = std::max(worst.moment, r.moment);
    worst.djdm_plus = std::max(worst.djdm_plus, r.djdm_plus);
    worst.djdm_23 = std::max(worst.djdm_23, r.djdm_23);
  }
  s.at_most(tag("ricci_max_20pts", o), worst.ricci, o.tol("ricci_max_20pts", 1e-5), Provenance::derived_oracle);
  s.at_most(tag("d_omega_max", o), worst.d_omega, o.tol("d_omega_max", 1e-5), Provenance::derived_oracle);
  s.at_most(tag("killing_residual", o), worst.killing, o.tol("killing_residual", 1e-5), Provenance::derived_oracle);
  s.at_most(tag("xi_omega1_plus_dm", o), worst.moment, o.tol("xi_omega1_plus_dm", 1e-12), Provenance::trivial_identity);
  s.at_most(tag("half_dJ1dm_sd_minus_omega1", o), worst.djdm_plus, o.tol("half_dJ1dm_sd_minus_omega1", 1e-5),
            Provenance::derived_oracle);
  s.at_most(tag("half_dJidm_minus_omegai_23", o), worst.djdm_23, o.tol("half_dJidm_minus_omegai_23", 1e-5),
            Provenance::derived_oracle);

  std::vector<double> radii{20, 30, 40, 60, 80}, dev;
  for (double r : radii) dev.push_back(metric_deviation(cfg, r));
  s.at_most(tag("metric_decay_exponent", o), log_log_slope(radii, dev), o.tol("metric_decay_exponent", -3.9),
            Provenance::paper_constant);

  const GHConfig flat = GHConfig::single_center();
  const auto flat_points = sample_points(flat, 20, 12, 2.0, 0.3);
  const auto flat_curv = parallel_map<double>(flat_points.size(), [&](std::size_t n) {
    return riemann_max(riemann_fd(gh_metric_field(flat, flat_points[n].patch), flat_points[n].coords(), fd));
  });
  double flat_worst = 0.0;
  for (double v : flat_curv) flat_worst = std::max(flat_worst, v);
  s.at_most("single_center_riemann_max", flat_worst, o.tol("single_center_riemann_max", 1e-5), Provenance::trivial_identity);

  // Holonomy of eta around a small loop linking the segment, in the patch where only the p0 string crosses it.
  const double radius = 1e-2 * o.lambda, x1 = 0.5 * (cfg.segment_begin() + cfg.segment_end());
  const GaussRule loop = periodic_rule(64);
  double holonomy = 0.0;
  for (std::size_t q = 0; q < loop.nodes.size(); ++q) {
    const double t = loop.nodes[q];
    const Vec3 x(x1, radius * std::cos(t), radius * std::sin(t));
    const Vec3 tangent(0.0, -radius * std::sin(t), radius * std::cos(t));
    holonomy += loop.weights[q] * eval_eta(cfg, {x, 0.0, Patch::south}).dot(tangent);
  }
  s.expect(tag("fiber_holonomy", o), 2.0 * M_PI, std::abs(holonomy), o.tol("fiber_holonomy", 1e-3),
           Provenance::derived_oracle, true, "finite loop radius 1e-2 lambda");
  return s;
}

SuiteResult suite_harmonic(const SuiteOptions& o) {
  SuiteResult s{"harmonic", {}, 0.0};
  const GHConfig cfg = GHConfig::canonical(o.k, o.lambda);
  const double k = o.k;
  const HarmonicFormBundle bundle = build_Omega(cfg);
  const NormResult norm = omega_norm(bundle);
  // The norm is scale invariant; the tail model assumes lambda-relative units.
  s.expect(tag("omega_norm2", o), 4.0 * M_PI * M_PI * (k + 1) / k, norm.value, o.tol("omega_norm2", 1e-3),
           Provenance::paper_constant, true);
  s.at_most(tag("omega_tail_fraction", o), norm.tail_fraction, 0.1, Provenance::derived_oracle);
  s.expect(tag("poincare_pairing", o), -norm.value, 2.0 * M_PI * bundle.sigma_integral(), o.tol("poincare_pairing", 1e-3),
           Provenance::derived_oracle, true);

  const auto points = sample_points(cfg, 20, 21, 3.0 * o.lambda * (k + 1) / 2.0, 0.5 * o.lambda);
  std::vector<Vec4> north, south;
  double d_omega = 0.0;
  for (const ChartPoint& p : points) {
    (p.patch == Patch::north ? north : south).push_back(p.coords());
    d_omega = std::max(d_omega, fd_d(bundle.omega_field(p.patch), p.coords(), FdScheme{1e-3, true}).max_abs());
  }
  double duality = 0.0;
  if (!north.empty())
    duality = std::max(duality, duality_residual(bundle.omega_field(Patch::north), gh_metric_field(cfg, Patch::north), north));
  if (!south.empty())
    duality = std::max(duality, duality_residual(bundle.omega_field(Patch::south), gh_metric_field(cfg, Patch::south), south));
  s.at_most(tag("d_Omega", o), d_omega, o.tol("d_Omega", 1e-5), Provenance::derived_oracle);
  s.at_most(tag("star_Omega_plus_Omega", o), duality, o.tol("star_Omega_plus_Omega", 1e-5), Provenance::derived_oracle);

  const double s_value = s_ratio(bundle);
  s.expect(tag("s_ratio", o), -k * o.lambda, s_value, o.tol("s_ratio", 1e-4), Provenance::derived_oracle);
  const double s_doubled = s_ratio(build_Omega(GHConfig::canonical(o.k, 2.0 * o.lambda)));
  s.expect(tag("s_ratio_lambda_rescaling", o), 2.0 * s_value, s_doubled, 1e-10, Provenance::trivial_identity, true);

  const std::vector<ChartPoint> alpha_points(points.begin(), points.begin() + 8);
  const AlphaSplitReport split = alpha_split_check(bundle, alpha_points);
  s.at_most(tag("alpha_plus_plus_omega1", o), split.plus_residual, o.tol("alpha_plus_plus_omega1", 1e-4), Provenance::paper_constant);
  s.at_most(tag("alpha_minus_minus_sOmega", o), split.minus_residual, o.tol("alpha_minus_minus_sOmega", 1e-4),
            Provenance::paper_constant);

  const double profile_radius = o.k <= 2 ? 50.0 : 100.0;
  s.at_most(tag("leading_profile_r" + std::to_string(static_cast<int>(profile_radius)), o),
            leading_profile_error(bundle, profile_radius * std::sqrt(o.lambda)), o.tol("leading_profile", 1e-2),
            Provenance::paper_constant);

  const double unit = vol_sigma(cfg) / (2.0 * M_PI);
  std::vector<double> radii{20, 30, 40, 60, 80};
  for (double& r : radii) r *= std::sqrt(o.lambda);
  const AsymptoticFit fit = asymptotic_fit(bundle, radii);
  s.expect(tag("c_gamma_fit", o), (k + 1) * unit, fit.c_gamma, o.tol("c_gamma_fit", 1e-2), Provenance::paper_constant, true);
  if (o.k == 1) {
    s.at_most(tag("a1_k1_abs", o), std::abs(fit.a1 / (unit * unit)), o.tol("a1_k1_abs", 1e-3), Provenance::paper_constant);
  } else {
    s.expect(tag("a1_ratio", o), -(k * k - 1), fit.a1 / (unit * unit), o.tol("a1_ratio", 0.1), Provenance::paper_constant, true,
             "stretch tolerance");
    const double first = fit.a1_by_radius.front(), last = fit.a1_by_radius.back();
    s.raised(tag("a1_sign_magnitude_consistency", o),
             first < 0 && last < 0 && std::abs(first - last) <= 0.1 * std::abs(last), Provenance::derived_oracle,
             "same sign and within 10% at the smallest and largest radius");
  }
  s.at_most(tag("moment_decay_exponent", o), fit.moment_exponent, -1.8, Provenance::paper_constant);
  s.at_most(tag("omega_decay_exponent", o), fit.omega_exponent, -3.9, Provenance::paper_constant);

  const ChartPoint p1{cfg.centers.back().position, 0.0, Patch::south};
  s.expect(tag("phi1_at_p1", o), 2.0 * unit, harmonic_phi1(cfg, p1), 1e-12, Provenance::paper_constant, true);
  return s;
}

SuiteResult suite_quadrature(const SuiteOptions& o) {
  SuiteResult s{"quadrature", {}, 0.0};
  const QuadratureSpec spec;
  s.expect("s3_volume", 2.0 * M_PI * M_PI, integrate_S3([](const Vec4&) { return 1.0; }, 1.0, spec), 1e-10,
           Provenance::trivial_identity, true);
  s.expect("s3_x1x4_plus_x2x3_sq", M_PI * M_PI / 6.0,
           integrate_S3([](const Vec4& x) { return std::pow(x[0] * x[3] + x[1] * x[2], 2); }, 1.0, spec),
           o.tol("s3_x1x4_plus_x2x3_sq", 1e-8), Provenance::paper_constant);
  s.expect("s3_r1sq_minus_r2sq_sq", 2.0 * M_PI * M_PI / 3.0,
           integrate_S3(
               [](const Vec4& x) {
                 return std::pow(x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3], 2);
               },
               1.0, spec),
           o.tol("s3_r1sq_minus_r2sq_sq", 1e-8), Provenance::paper_constant);

  double sd_worst = 0.0, asd_worst = 0.0, identity_worst = 0.0, radius_worst = 0.0, closed_worst = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const QuadraticTriple sd = random_closed_sd_quadratic(seed);
    const PairingResult pr = dCF_pairing(sd, spec);
    sd_worst = std::max(sd_worst, std::abs(pr.lhs - pr.rhs) / std::max(1.0, std::abs(pr.rhs)));
    identity_worst = std::max(identity_worst, second_derivative_identity_residual(sd));
    QuadratureSpec bigger = spec;
    bigger.radius = 2.5;
    radius_worst = std::max(radius_worst, std::abs(dCF_pairing(sd, bigger).lhs - pr.lhs));
    const QuadraticTriple asd = random_closed_asd_quadratic(seed);
    asd_worst = std::max(asd_worst, std::abs(dCF_pairing(asd, spec).lhs));
    for (int n = 0; n < 10; ++n) {
      const Vec4 x(u(rng), u(rng), u(rng), u(rng));
      closed_worst = std::max({closed_worst, sd.exterior_derivative(x).max_abs(), asd.exterior_derivative(x).max_abs()});
    }
  }
  s.at_most("pairing_sd_5_seeds", sd_worst, o.tol("pairing_sd_5_seeds", 1e-6), Provenance::derived_oracle);
  s.at_most("pairing_asd_lhs", asd_worst, o.tol("pairing_asd_lhs", 1e-8), Provenance::paper_constant);
  s.at_most("pairing_radius_independence", radius_worst, o.tol("pairing_radius_independence", 1e-8), Provenance::derived_oracle);
  s.at_most("second_derivative_identity", identity_worst, 1e-12, Provenance::paper_constant);
  s.at_most("closed_triple_d_residual", closed_worst, 1e-12, Provenance::trivial_identity);

  QuadraticTriple constant;
  // z_1 = |x|^2 restricts to the constant 1 on the unit sphere.
  constant.z[0] = Mat4::Identity();
  const PairingResult cst = dCF_pairing(constant, spec);
  s.at_most("pairing_constant_omega1_lhs", std::abs(cst.lhs), 1e-8, Provenance::derived_oracle);

  const GHConfig flat = GHConfig::single_center();
  VolumeRegion ball;
  ball.model_radius = 1.0;
  s.expect("unit_ball_volume", M_PI * M_PI / 2.0,
           integrate_volume(flat, [](const ChartPoint&) { return 1.0; }, ball, QuadratureSpec{16, 32}), 1e-6,
           Provenance::trivial_identity, true);
  return s;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gh", "harmonic", "quadrature", "deformation", "all"};
  return names;
}

std::vector<SuiteResult> run_suites(const std::string& name, const SuiteOptions& options) {
  using Runner = SuiteResult (*)(const SuiteOptions&);
  std::vector<std::pair<std::string, std::vector<Runner>>> table{
      {"gh", {suite_gh, suite_appendix_constants}},
      {"harmonic", {suite_harmonic}},
      {"quadrature", {suite_quadrature, suite_appendix_constants}},
      {"deformation", {suite_deformation, suite_gh_second_order}},
  };
  std::vector<SuiteResult> out;
  for (const auto& [suite, runners] : table) {
    if (name != "all" && name != suite) continue;
    for (Runner run : runners) {
      const auto start = std::chrono::steady_clock::now();
      SuiteResult r = run(options);
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (name == "all" && run == suite_appendix_constants && suite == "quadrature") continue;
      out.push_back(std::move(r));
    }
  }
  if (out.empty()) throw ConfigError("unknown suite '" + name + "'");
  return out;
}

}  // namespace ale
