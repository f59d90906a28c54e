#include "qwalk/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "qwalk/genfunc.hpp"
#include "qwalk/reduction.hpp"

namespace qwalk {

namespace {

constexpr long kWalkHorizonCap = 16384;

template <typename F>
double adapt(F&& f, double a, double fa, double b, double fb, double m,
             double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// adaptive Simpson, absolute tolerance
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

void check_quadrant(long x, long y) {
  if (x < 0 || y < 0)
    throw std::invalid_argument("lattice point must sit in the quadrant");
}

void check_copy(int r, int k) {
  if (r < 0 || r >= k) throw std::invalid_argument("copy index out of range");
}

}  // namespace

Theorem1Params theorem1_params(const CoinParams& coin,
                               const ReducedCoinParams& rp,
                               const Eigen::VectorXcd& psi) {
  coin.validate();
  rp.validate();
  if (psi.size() != rp.k)
    throw std::invalid_argument("start vector length must match the copy count");
  if (std::abs(coin.ctilde - rp.ctilde) > 1e-12)
    throw std::invalid_argument("coin and channel couple disagree on ctilde");

  Theorem1Params p;
  p.k = rp.k;
  const cplx c2 = coin.c * coin.c;
  const cplx ct2 = coin.ctilde * coin.ctilde;
  p.phi = std::arg(c2 / ct2);
  p.c2_abs = std::abs(c2);
  const double am = std::abs(coin.a);
  p.a4 = am * am * am * am;
  const cplx em = std::polar(1.0, -p.phi);
  p.k_plus = std::norm(1.0 + p.c2_abs * em);
  p.k_minus = std::norm(1.0 - p.c2_abs * em);  // sign-flip reading
  p.k_cross = (1.0 - p.c2_abs * std::polar(1.0, p.phi)) * (1.0 + p.c2_abs * em);
  p.h_values = {rp.a_k * rp.a_k, rp.a_k * rp.b_k};
  p.q_values = {rp.a_k * rp.b_k, rp.b_k * rp.b_k};
  p.psi = psi;
  p.psi_prime = coined_initial(psi, coin.ctilde);

  const cplx total = p.psi_prime.sum();
  p.theta1.resize(p.k);
  p.theta2.resize(p.k);
  p.theta3.resize(p.k);
  for (int r = 0; r < p.k; ++r) {
    const cplx own = p.psi_prime[r];
    p.theta1[r] = std::norm(own);
    p.theta2[r] = std::conj(own) * (total - own);
    cplx acc = 0.0;  // unordered pairs away from r, plus the diagonal squares
    for (int i = 0; i < p.k; ++i) {
      if (i == r) continue;
      acc += cplx{std::norm(p.psi_prime[i]), 0.0};
      for (int j = i + 1; j < p.k; ++j) {
        if (j == r) continue;
        acc += std::conj(p.psi_prime[j]) * p.psi_prime[i] +
               std::conj(p.psi_prime[i]) * p.psi_prime[j];
      }
    }
    p.theta3[r] = acc;
  }
  const double cph = std::cos(p.phi);
  p.boundary =
      std::min(std::abs(cph - p.c2_abs), std::abs(cph + p.c2_abs)) <= 1e-12;
  p.flags = {"k_minus_sign_flip"};
  return p;
}

double gamma_pm(const Theorem1Params& p, int sign, long x, long y) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("sign selector must be +1 or -1");
  check_quadrant(x, y);
  double sq2 = 0.0;
  for (double q : p.q_values) sq2 += q * q;
  const double kk = sign > 0 ? p.k_plus : p.k_minus;
  const double cph = std::cos(p.phi);
  const double edge = cph + sign * p.c2_abs;
  const double pref = sq2 * p.c2_abs * p.c2_abs * edge * edge / (kk * kk);
  if (x == 0 && y == 0) return pref;
  return pref * std::pow(p.a4 / kk, static_cast<double>(x + y - 2)) *
         (1.0 + p.a4 / kk);
}

cplx gamma_cross(const Theorem1Params& p, long x, long y) {
  check_quadrant(x, y);
  const double cph = std::cos(p.phi);
  const double c4 = p.c2_abs * p.c2_abs;
  const cplx pref = c4 * (cph * cph - c4) / (p.k_cross * p.k_cross);
  if (x == 0 && y == 0) return -pref;  // both ratio factors read as 1
  const double root = std::sqrt(p.k_plus * p.k_minus);
  return pref * std::pow(p.a4 / root, static_cast<double>(x + y - 2)) *
         (1.0 - p.a4 / p.k_cross);
}

Theorem1Value theorem1_asymptotic(long t, int r, long x, long y,
                                  const Theorem1Params& p) {
  check_copy(r, p.k);
  check_quadrant(x, y);
  if (t < 0) throw std::invalid_argument("time must be nonnegative");

  Theorem1Value out;
  out.flags = p.flags;
  out.boundary = p.boundary;
  const double pref = ((x + y + 2 * t) % 2 == 0) ? 1.0 : 0.0;
  out.parity_zero = pref == 0.0;

  const double cph = std::cos(p.phi);
  const double c2 = p.c2_abs;
  bool in_m, in_p, in_c;
  if (p.boundary) {
    // the bracket style is ambiguous exactly here; take the closed reading
    in_m = cph <= c2 + 1e-12;
    in_p = cph >= -c2 - 1e-12;
    out.flags.push_back("boundary");
  } else {
    in_m = cph < c2;
    in_p = cph > -c2;
  }
  in_c = in_m && in_p;

  const cplx sum_psi = p.psi.sum();
  out.l_m = gamma_pm(p, -1, x, y) * std::norm(sum_psi);
  out.l_p = gamma_pm(p, +1, x, y) *
            std::norm(sum_psi - static_cast<double>(p.k) * p.psi[r]);

  const cplx gx = gamma_cross(p, x, y);
  double sh1 = 0.0;  // sum over h of -(1-h^2)
  for (double h : p.h_values) sh1 += -(1.0 - h * h);
  double shq_p = 0.0, shq_m = 0.0;
  for (double h : p.h_values)
    for (double q : p.q_values) {
      shq_p += q * (1.0 + h);
      shq_m += -q * (1.0 - h);
    }
  double sq2 = 0.0;
  for (double q : p.q_values) sq2 += q * q;
  const cplx th2 = p.theta2[r];
  const double term1 = 2.0 * sh1 * p.theta1[r] * gx.real();
  const double term2 = 2.0 * shq_p * std::real(th2 * gx);
  const double term3 = -2.0 * shq_m * std::real(th2 * std::conj(gx));
  const cplx term4 = 2.0 * sq2 * p.theta3[r] * gx.real();
  out.l_c = term1 + term2 + term3 + term4.real();
  if (in_c) out.flags.push_back("gamma_cross_ratio_one");

  out.value = pref * ((in_m ? out.l_m : 0.0) + (in_p ? out.l_p : 0.0) +
                      (in_c ? out.l_c : 0.0));
  return out;
}

double f_h_density(double x, double modulus_a) {
  if (!(modulus_a > 0.0) || !(modulus_a < 1.0))
    throw std::invalid_argument("modulus must lie strictly inside (0,1)");
  if (x < 0.0 || x >= modulus_a) return 0.0;
  const double m = modulus_a * modulus_a;
  return std::sqrt(1.0 - m) / (M_PI * (1.0 - x * x) * std::sqrt(m - x * x));
}

double f_h_cdf(double x, double modulus_a) {
  if (!(modulus_a > 0.0) || !(modulus_a < 1.0))
    throw std::invalid_argument("modulus must lie strictly inside (0,1)");
  if (x <= 0.0) return 0.0;
  const double m = modulus_a * modulus_a;
  const double hi = std::asin(std::min(x, modulus_a) / modulus_a);
  const double croot = std::sqrt(1.0 - m);
  // substitution x = |a| sin u removes the edge singularity
  auto g = [&](double u) {
    const double s = std::sin(u);
    return croot / (M_PI * (1.0 - m * s * s));
  };
  return adaptive_simpson(g, 0.0, hi, 1e-8);
}

double f_h_total(double modulus_a) { return f_h_cdf(modulus_a, modulus_a); }

Theorem2Params theorem2_params(const CoinParams& coin,
                               const ReducedCoinParams& rp,
                               const Eigen::VectorXcd& psi, bool theta_zero) {
  Theorem2Params p;
  p.base = theorem1_params(coin, rp, psi);
  p.a_k = rp.a_k;
  p.b_k = rp.b_k;
  p.modulus_a = std::abs(coin.a);
  p.modulus_c = std::abs(coin.c);
  p.theta_zero = theta_zero;

  double sq2 = 0.0;
  for (double q : p.base.q_values) sq2 += q * q;
  const double cph = std::cos(p.base.phi);
  const double c2 = p.base.c2_abs;
  // one shared prefactor for both atoms, as printed
  const double fac = sq2 * c2 * c2 * (cph + c2) / (2.0 * p.base.k_plus);
  const bool in_m = cph >= -1.0 && cph < c2;  // half-open
  const bool in_p = cph > -c2 && cph <= 1.0;
  const cplx sum_psi = p.base.psi.sum();
  p.c_m = (in_m ? fac : 0.0) * std::norm(sum_psi);
  p.c_p.resize(p.base.k);
  for (int r = 0; r < p.base.k; ++r)
    p.c_p[r] = (in_p ? fac : 0.0) *
               std::norm(sum_psi - static_cast<double>(p.base.k) * p.base.psi[r]);

  p.flags = p.base.flags;
  p.flags.push_back("same_point_mass_factor");
  p.flags.push_back(theta_zero ? "theta_choice_zero" : "theta_choice_phi");
  return p;
}

namespace {
// the shared trailing factor of the three density envelopes
double envelope(const Theorem2Params& p, double x) {
  const double cph = std::cos(p.base.phi), sph = std::sin(p.base.phi);
  const double cm = p.modulus_c;
  return 1.0 + cm * cm - 2.0 * cm * cm * cph * cph - sph * sph * (1.0 - x * x);
}
}  // namespace

double gamma1(const Theorem2Params& p, double x) {
  const double cph = std::cos(p.base.phi), sph = std::sin(p.base.phi);
  const double cm = p.modulus_c, am = p.modulus_a;
  return 4.0 * p.a_k * cm * (am * am - x * x) * cph * sph * sph +
         (p.a_k * p.a_k + 2.0 * p.a_k * cm * cph + 1.0) * envelope(p, x);
}

cplx gamma2(const Theorem2Params& p, double x) {
  const double cph = std::cos(p.base.phi), sph = std::sin(p.base.phi);
  const double cm = p.modulus_c, am = p.modulus_a;
  const cplx eit = std::polar(1.0, p.theta_zero ? 0.0 : p.base.phi);
  return -2.0 * p.b_k * cm * (am * am - x * x) * eit * cph * sph +
         p.b_k * (p.a_k + cm * eit) * envelope(p, x);
}

double gamma3(const Theorem2Params& p, double x) {
  return p.b_k * p.b_k * envelope(p, x);
}

double c_d_weight(const Theorem2Params& p, int r, double x) {
  check_copy(r, p.base.k);
  const double sph = std::sin(p.base.phi);
  const double shrink = sph * sph * (1.0 - x * x);
  const double num = gamma1(p, x) * p.base.theta1[r] +
                     2.0 * std::real(gamma2(p, x) * p.base.theta2[r]) +
                     std::real(gamma3(p, x) * p.base.theta3[r]);
  return num / ((p.base.k_plus - shrink) * (p.base.k_minus - shrink));
}

Theorem2Value theorem2_density(double x, double y, int r,
                               const Theorem2Params& p) {
  if (x < 0.0 || x >= 1.0 || y < 0.0 || y >= 1.0)
    throw std::invalid_argument("rescaled point must lie in [0,1)^2");
  check_copy(r, p.base.k);
  Theorem2Value out;
  out.flags = p.flags;
  out.continuous = c_d_weight(p, r, x) * c_d_weight(p, r, y) *
                   f_h_density(x, p.modulus_a) * f_h_density(y, p.modulus_a);
  // outer bracket, closed on both ends
  const double cph = std::cos(p.base.phi);
  out.point_mass = ((cph <= p.base.c2_abs) ? p.c_m : 0.0) +
                   ((cph >= -p.base.c2_abs) ? p.c_p[r] : 0.0);
  if (p.base.boundary) out.flags.push_back("boundary");
  return out;
}

Theorem2Mass theorem2_total_mass(int r, const Theorem2Params& p) {
  check_copy(r, p.base.k);
  const double a = p.modulus_a;
  const double m = a * a;
  const double croot = std::sqrt(1.0 - m);
  auto g = [&](double u) {
    const double s = std::sin(u);
    return c_d_weight(p, r, a * s) * croot / (M_PI * (1.0 - m * s * s));
  };
  const double axis = adaptive_simpson(g, 0.0, M_PI / 2.0, 1e-8);
  Theorem2Mass out;
  const double cph = std::cos(p.base.phi);
  out.point_mass = ((cph <= p.base.c2_abs) ? p.c_m : 0.0) +
                   ((cph >= -p.base.c2_abs) ? p.c_p[r] : 0.0);
  out.continuous_mass = axis * axis;  // the measure factorizes per axis
  out.total = out.point_mass + out.continuous_mass;
  return out;
}

WindowAverage window_average(const std::vector<double>& p_by_t, long t0,
                             long t1) {
  if (t0 < 1 || t1 < t0)
    throw std::invalid_argument("window must satisfy 1 <= t0 <= t1");
  if (t1 >= static_cast<long>(p_by_t.size()))
    throw std::invalid_argument("window exceeds the simulated horizon");
  WindowAverage w;
  w.t0 = t0;
  w.t1 = t1;
  double sum = 0.0, even = 0.0, odd = 0.0;
  long n_even = 0, n_odd = 0;
  for (long t = t0; t <= t1; ++t) {
    sum += p_by_t[t];
    if (t % 2 == 0) {
      even += p_by_t[t];
      ++n_even;
    } else {
      odd += p_by_t[t];
      ++n_odd;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  w.mean = sum / static_cast<double>(t1 - t0 + 1);
  w.even_mean = n_even ? even / static_cast<double>(n_even) : nan;
  w.odd_mean = n_odd ? odd / static_cast<double>(n_odd) : nan;
  return w;
}

namespace {
// probability of one copy-view site in a raw snapshot
double copy_view_probability(const WalkSpec& spec, const StateVector& s,
                             const SiteKey& key) {
  check_copy(key.copy, spec.k);
  check_quadrant(key.x, key.y);
  if (key.x == 0 && key.y == 0) {
    auto it = s.amp.find(origin_key());
    if (it == s.amp.end()) return 0.0;
    double p = std::norm(it->second[key.copy]);
    if (spec.mode == Mode::Unitarized)
      p += std::norm(it->second[spec.k + key.copy]);
    return p;
  }
  auto it = s.amp.find(key);
  return it == s.amp.end() ? 0.0 : it->second.squaredNorm();
}
}  // namespace

std::vector<double> site_probability_series(const WalkSpec& spec,
                                            const std::vector<SiteKey>& sites,
                                            long t_max) {
  if (spec.model != Model::Joined && spec.model != Model::Quarter)
    throw std::invalid_argument("event series needs a glued-plane walk");
  if (t_max < spec.initial.time)
    throw std::invalid_argument("horizon precedes the initial time");
  if (t_max > kWalkHorizonCap)
    throw resource_guard_error("event horizon above the configured cap");
  std::vector<double> out(static_cast<size_t>(t_max) + 1, 0.0);
  StateVector s = spec.initial;
  auto record = [&](const StateVector& snap) {
    double p = 0.0;
    for (const SiteKey& key : sites) p += copy_view_probability(spec, snap, key);
    out[snap.time] = p;
  };
  record(s);
  while (s.time < t_max) {
    s = step_reference(spec, s);
    record(s);
  }
  return out;
}

WindowAverage time_averaged_event(const WalkSpec& spec,
                                  const std::vector<SiteKey>& sites, long t0,
                                  long t1) {
  if (t0 < 1 || t1 < t0)
    throw std::invalid_argument("window must satisfy 1 <= t0 <= t1");
  return window_average(site_probability_series(spec, sites, t1), t0, t1);
}

WindowAverage time_averaged_probability(const WalkSpec& spec, int r, long x,
                                        long y, long t0, long t1) {
  return time_averaged_event(
      spec,
      {SiteKey{r, static_cast<int>(x), static_cast<int>(y)}}, t0, t1);
}

double EmpiricalStats::fraction_within(double b) const {
  if (off_origin_mass <= 0.0) return 0.0;
  double s = 0.0;
  for (const auto& [radius, mass] : radius_atoms) {
    if (radius > b) break;
    s += mass;
  }
  return s / off_origin_mass;
}

double EmpiricalStats::radius_quantile(double mass_fraction) const {
  if (off_origin_mass <= 0.0 || radius_atoms.empty()) return 0.0;
  const double target = mass_fraction * off_origin_mass;
  double s = 0.0;
  for (const auto& [radius, mass] : radius_atoms) {
    s += mass;
    if (s >= target - 1e-15) return radius;
  }
  return radius_atoms.back().first;
}

namespace {
// sup distance between the step CDF of the atoms (normalized by norm) and
// the doubled half-line shape
double kolmogorov_against_shape(
    const std::vector<std::pair<double, double>>& atoms, double norm,
    double modulus_a) {
  if (norm <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  double worst = 0.0, cum = 0.0;
  for (const auto& [pos, mass] : atoms) {
    const double model = std::min(1.0, 2.0 * f_h_cdf(pos, modulus_a));
    worst = std::max(worst, std::abs(cum / norm - model));
    cum += mass;
    worst = std::max(worst, std::abs(cum / norm - model));
  }
  return worst;
}
}  // namespace

EmpiricalStats empirical_rescaled_stats(const WalkSpec& spec, int r, long t) {
  if (spec.model != Model::Joined && spec.model != Model::Quarter)
    throw std::invalid_argument("rescaled statistics need a glued-plane walk");
  check_copy(r, spec.k);
  if (t < 50)
    throw std::invalid_argument("rescaled statistics need t >= 50");
  if (t > kWalkHorizonCap)
    throw resource_guard_error("rescaled horizon above the configured cap");

  DenseWalker walker(spec, t);
  walker.run_to(t);
  const DistributionTable table =
      event_probability_snapshot(spec, walker.snapshot());

  EmpiricalStats st;
  st.t = t;
  st.r = r;
  std::map<int, double> mx, my, radii;
  for (const auto& [site, p] : table) {
    st.total_mass += p;
    if (site.copy != r) continue;
    if (site.x == 0 && site.y == 0) {
      st.origin_mass = p;
      continue;
    }
    st.off_origin_mass += p;
    mx[site.x] += p;
    my[site.y] += p;
    radii[std::max(site.x, site.y)] += p;
  }
  const double td = static_cast<double>(t);
  for (const auto& [x, p] : mx) st.marginal_x.emplace_back(x / td, p);
  for (const auto& [y, p] : my) st.marginal_y.emplace_back(y / td, p);
  for (const auto& [rad, p] : radii) st.radius_atoms.emplace_back(rad / td, p);
  if (!radii.empty()) st.max_rescaled_coord = radii.rbegin()->first / td;

  const double am = std::abs(spec.coin.a);
  st.kolmogorov_x =
      kolmogorov_against_shape(st.marginal_x, st.off_origin_mass, am);
  st.kolmogorov_y =
      kolmogorov_against_shape(st.marginal_y, st.off_origin_mass, am);
  return st;
}

FourierAlphaReport fourier_hat_report(const CoinParams& coin, double s_x,
                                      double s_y, cplx z, int m, Chirality l,
                                      double s_value, bool mu_variant) {
  if (m < 0 || m > 3)
    throw std::invalid_argument("channel index out of range");
  const GenfuncScalars gs = genfunc_scalars(coin, z, mu_variant);

  FourierAlphaReport rep;
  rep.flags = {"eta_pm", "k_as_s"};
  if (mu_variant) rep.flags.push_back("mu_variant");
  if (s_value != 1.0) rep.flags.push_back("s_factor_custom");

  const cplx ct2 = coin.ctilde * coin.ctilde;
  const cplx ct4 = ct2 * ct2;
  const cplx c2 = coin.c * coin.c;
  rep.sqrt_v = std::sqrt(gs.v);
  const cplx den1 =
      4.0 * (ct4 - c2 * c2) * (z * z - gs.w_plus_sq) * (z * z - gs.w_minus_sq);
  if (std::abs(den1) < 1e-12)
    throw std::domain_error("z sits at a pole of the loop factor");
  rep.phi1 = ct4 * ct2 * gs.w_plus_sq * gs.w_minus_sq *
             (gs.delta_plus + rep.sqrt_v) * (gs.delta_minus - rep.sqrt_v) /
             den1;

  const double s_sum = s_x + s_y;
  const cplx fwd = std::polar(1.0, s_sum);
  const cplx bwd = std::polar(1.0, -s_sum);
  const cplx delta = coin.delta();
  const cplx a2 = coin.a * coin.a;
  const cplx abar2 = std::conj(coin.a) * std::conj(coin.a);
  rep.gamma = 4.0 * a2 * bwd * z - 1.0 - delta * z * z;
  const cplx half_sum = a2 * bwd + abar2 * delta * fwd;
  const cplx root =
      std::sqrt((a2 * bwd + abar2 * fwd) * (a2 * bwd + abar2 * fwd) -
                4.0 * delta);
  rep.v_plus = (half_sum + root) / (2.0 * delta);
  rep.v_minus = (half_sum - root) / (2.0 * delta);
  if (std::min(std::abs(z - rep.v_plus), std::abs(z - rep.v_minus)) < 1e-9)
    throw std::domain_error("z sits at a pole of the transport factor");
  rep.phi2 = fwd * (rep.gamma - rep.sqrt_v) /
             (4.0 * delta * (z - rep.v_plus) * (z - rep.v_minus));

  const cplx affine = ct2 * s_value * gs.mu + 1.0;
  switch (l) {
    case CH_L:
      rep.value = (-gs.mu + (coin.d * coin.d) / (coin.a * coin.a * c2) *
                               (gs.lambda - coin.a * coin.a * z)) *
                  affine * rep.phi1;
      break;
    case CH_R:
    case CH_U:
      rep.value = z * (1.0 + ct2 * gs.mu) * rep.phi1 * rep.phi2;
      break;
    case CH_D:
      // the linear b in (lambda - b z) is kept as printed; the matching
      // exit factor elsewhere squares it
      rep.value = (gs.mu + c2 / (coin.b * coin.b * coin.d * coin.d) *
                               (gs.lambda - coin.b * z)) *
                  affine * rep.phi1;
      rep.flags.push_back("down_linear_b");
      break;
    default:
      throw std::invalid_argument("unknown chirality label");
  }
  return rep;
}

cplx fourier_hat_alpha(const CoinParams& coin, double s_x, double s_y, cplx z,
                       int m, Chirality l) {
  return fourier_hat_report(coin, s_x, s_y, z, m, l).value;
}

}  // namespace qwalk
