#pragma once
// Long-time laws of the glued-plane walk, evaluated exactly as printed:
// the localization asymptote of the site probabilities (theorem1_*), the
// rescaled-position limit measure made of a point mass and a product of
// half-line arcsine-type densities (theorem2_*, f_h_*), Fourier-domain
// amplitude factors used to sanity-check that pipeline, and empirical
// long-time statistics extracted from the simulator for comparison.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

// Per-coin, per-start scalar pack feeding every localization expression.
// phi is the origin-phase angle arg(c^2/ctilde^2); K_plus keeps the printed
// "+" sign, K_minus flips it (the print shows "+" twice; the flip is the
// evident intent and makes |K_cross|^2 = K_plus K_minus an identity).
struct Theorem1Params {
  int k{1};
  double phi{0.0};
  double c2_abs{0.0};  // |c^2|
  double a4{0.0};      // |a|^4
  double k_plus{0.0};
  double k_minus{0.0};
  cplx k_cross{};
  std::array<double, 2> h_values{};  // {a_k^2, a_k b_k}
  std::array<double, 2> q_values{};  // {a_k b_k, b_k^2}
  Eigen::VectorXcd psi;              // start amplitudes, one per copy
  Eigen::VectorXcd psi_prime;        // ctilde * G_k * psi
  Eigen::VectorXd theta1;            // per copy: |psi'_r|^2
  Eigen::VectorXcd theta2;           // per copy: conj(psi'_r) (S - psi'_r)
  Eigen::VectorXcd theta3;           // per copy: equals |S - psi'_r|^2
  bool boundary{false};              // cos phi within 1e-12 of +-|c^2|
  std::vector<std::string> flags;
};

Theorem1Params theorem1_params(const CoinParams& coin,
                               const ReducedCoinParams& rp,
                               const Eigen::VectorXcd& psi);

// Spatial envelope with the printed power (|a|^4/K_pm)^{x+y-2}; sign is +1
// or -1. The corner carries the delta term only.
double gamma_pm(const Theorem1Params& p, int sign, long x, long y);
// Oscillatory envelope. The corrupted ratio factors of identical arguments
// are read as 1 (flag gamma_cross_ratio_one); the right side carries no t.
cplx gamma_cross(const Theorem1Params& p, long x, long y);

struct Theorem1Value {
  double value{0.0};  // parity prefactor times the indicator-gated L sum
  double l_m{0.0};    // raw Gamma_- |sum psi_j|^2
  double l_p{0.0};    // raw Gamma_+ |sum (psi_j - psi_r)|^2
  double l_c{0.0};    // raw oscillatory four-sum (real part)
  bool parity_zero{false};
  bool boundary{false};
  std::vector<std::string> flags;
};

// Site-probability asymptote at lattice point (x, y) of copy r. t enters
// only through the printed exponent x+y+2t, so only x+y matters.
Theorem1Value theorem1_asymptotic(long t, int r, long x, long y,
                                  const Theorem1Params& p);

// Half-line density sqrt(1-|a|^2) / (pi (1-x^2) sqrt(|a|^2-x^2)) supported
// on [0, |a|); integrates to 1/2.
double f_h_density(double x, double modulus_a);
// Integral of f_h over [0, min(x,|a|)], adaptive Simpson after x = |a| sin u.
double f_h_cdf(double x, double modulus_a);
double f_h_total(double modulus_a);

// Point-mass weights and density factors of the rescaled limit measure.
// Both point masses keep the same printed factor (cos phi + |c^2|)/(2 K_+);
// gamma2's undefined phase angle defaults to phi, with 0 selectable.
struct Theorem2Params {
  Theorem1Params base;
  double a_k{0.0};
  double b_k{0.0};
  double modulus_a{0.0};  // |a|, edge of the density support
  double modulus_c{0.0};
  double c_m{0.0};           // shared point-mass weight
  Eigen::VectorXd c_p;       // per-copy point-mass weight
  bool theta_zero{false};
  std::vector<std::string> flags;
};

Theorem2Params theorem2_params(const CoinParams& coin,
                               const ReducedCoinParams& rp,
                               const Eigen::VectorXcd& psi,
                               bool theta_zero = false);

double gamma1(const Theorem2Params& p, double x);
cplx gamma2(const Theorem2Params& p, double x);
double gamma3(const Theorem2Params& p, double x);
// (Gamma1 theta1 + 2 Re(Gamma2 theta2) + Gamma3 theta3) over the printed
// quadratic denominator; the density weight of copy r at rescaled x.
double c_d_weight(const Theorem2Params& p, int r, double x);

struct Theorem2Value {
  double continuous{0.0};  // c_d(x) c_d(y) f_h(x) f_h(y)
  double point_mass{0.0};  // weight of the atom at (0,0), reported separately
  std::vector<std::string> flags;
};
// Limit-measure evaluation at rescaled (x, y) in [0,1)^2 for copy r.
Theorem2Value theorem2_density(double x, double y, int r,
                               const Theorem2Params& p);

// Atom weight plus the squared one-axis integral of c_d f_h (the measure is
// a product). Total is reported, never forced to 1.
struct Theorem2Mass {
  double point_mass{0.0};
  double continuous_mass{0.0};
  double total{0.0};
};
Theorem2Mass theorem2_total_mass(int r, const Theorem2Params& p);

// Arithmetic window mean of a per-step probability series, with the even-t
// and odd-t sub-means kept separate (empty parity class yields NaN).
struct WindowAverage {
  double mean{0.0};
  double even_mean{0.0};
  double odd_mean{0.0};
  long t0{0};
  long t1{0};
};
WindowAverage window_average(const std::vector<double>& p_by_t, long t0,
                             long t1);

// p[t] = summed copy-view probability of the given sites at every time
// t <= t_max, from one incremental run. Sites use the event-table keying:
// {r, x, y}, with {r, 0, 0} the copy-r view of the shared origin.
std::vector<double> site_probability_series(const WalkSpec& spec,
                                            const std::vector<SiteKey>& sites,
                                            long t_max);
WindowAverage time_averaged_probability(const WalkSpec& spec, int r, long x,
                                        long y, long t0, long t1);
WindowAverage time_averaged_event(const WalkSpec& spec,
                                  const std::vector<SiteKey>& sites, long t0,
                                  long t1);

// Rescaled snapshot of one copy at a fixed time: origin mass, the off-origin
// atoms keyed by max(x,y)/t, the axis marginals, and Kolmogorov distances of
// the off-origin-normalized marginals against the doubled f_h shape.
struct EmpiricalStats {
  long t{0};
  int r{0};
  double total_mass{0.0};       // every copy, sanity
  double origin_mass{0.0};      // {r,0,0} view
  double off_origin_mass{0.0};  // copy-r lattice mass
  double max_rescaled_coord{0.0};
  std::vector<std::pair<double, double>> radius_atoms;  // sorted by radius
  std::vector<std::pair<double, double>> marginal_x;    // (x/t, mass)
  std::vector<std::pair<double, double>> marginal_y;
  double kolmogorov_x{0.0};
  double kolmogorov_y{0.0};

  // share of off-origin mass inside [0,b]^2, and the smallest such box edge
  double fraction_within(double b) const;
  double radius_quantile(double mass_fraction) const;
};
EmpiricalStats empirical_rescaled_stats(const WalkSpec& spec, int r, long t);

// Fourier-domain amplitude factors. The loop factor phi1 reads the undefined
// eta_pm as the delta_pm scalars (flag eta_pm); the transport factor phi2
// reads the stray wavenumber as s (flag k_as_s); the stray s in the affine
// factor (ctilde^2 s mu + 1) defaults to 1, matching the Right/Up lines.
struct FourierAlphaReport {
  cplx value{};
  cplx phi1{};
  cplx phi2{};
  cplx v_plus{};
  cplx v_minus{};
  cplx gamma{};
  cplx sqrt_v{};
  std::vector<std::string> flags;
};
FourierAlphaReport fourier_hat_report(const CoinParams& coin, double s_x,
                                      double s_y, cplx z, int m, Chirality l,
                                      double s_value = 1.0,
                                      bool mu_variant = false);
cplx fourier_hat_alpha(const CoinParams& coin, double s_x, double s_y, cplx z,
                       int m, Chirality l);

}  // namespace qwalk
