#pragma once
// Generating-function layer for the 16-dimensional channel walk: the
// quadratic-root kernel lambda(z), closed-form first-passage factors, the
// origin-return geometric object, and two independent reconstructions of the
// channel-walk amplitudes (a dense weight-matrix path sum and a renewal-series
// assembly) that must agree with the sparse simulator.

#include <string>
#include <vector>

#include "qwalk/series.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

struct LambdaValue {
  cplx lambda;           // small-branch root, continuous with c*z near 0
  cplx other;            // companion root (the root moduli multiply to 1)
  double quad_residual;  // |Delta conj(c) z lambda^2 - (Delta z^2+1) lambda + c z|
  bool branch_flagged;   // set when both roots sit on/outside the unit circle
};

// Small root of  Delta*conj(c)*z*w^2 - (Delta*z^2 + 1)*w + c*z = 0.
LambdaValue lambda_eval(const CoinParams& p, cplx z);

// Power-series coefficients of the same branch (odd series, lambda[1] = c).
ScalarSeries lambda_series(const CoinParams& p, int order);

// Largest radius r0 <= 1 with max_{|z|=r} |lambda| < 1 (bisection over
// sampled circles), and the working radius r1 = min(|c|^2, r0).
double lambda_inner_radius(const CoinParams& p, int samples = 720);
double lambda_outer_cut(const CoinParams& p);

enum class BTag { PR, QU, PRPrime, QUPrime };

// First-passage factors: {d^2 lambda / a^2}^{x+y} times the tag's prefactor,
// zero outside the tag's support (PR needs x >= 1, QU needs y >= 1; both are
// zero at the corner). The primed tags carry a 1/z^2 pole, so z != 0 there.
cplx closed_form_B(const CoinParams& p, BTag tag, int x, int y, cplx z);

struct GenfuncScalars {
  cplx lambda;
  cplx mu;             // (d^2 lambda - Delta^2 z)/c^2, or the Delta*z variant
  cplx v;              // (1 + Delta z^2)^2 - 4 Delta |a|^4 z^2
  cplx delta_plus;     // 2 c^2/ct^2 + 1 - Delta z^2
  cplx delta_minus;    // 2 c^2/ct^2 - 1 + Delta z^2
  cplx w_plus_sq;
  cplx w_minus_sq;
  double r0{0.0};
  double r1{0.0};
  std::vector<std::string> flags;
};
GenfuncScalars genfunc_scalars(const CoinParams& p, cplx z,
                               bool mu_variant = false);

// Dense weight-matrix evolution of the channel walk. Same update as the
// ReducedStar literal simulator with the slide boundary, but written as
// 16x16 matrix moves gathered per target site. t = 0 returns the inert seed
// label at the corner; t >= 1 returns the evolved state (lattice blocks are
// 16-dim, the origin block is the 4 channel amplitudes).
StateVector transfer_path_sum(const CoinParams& coin,
                              const ReducedCoinParams& rp, ReducedStart start,
                              long t);

// Renewal-series reconstruction of one amplitude block: origin-avoiding
// propagation, origin occupation through a series resolvent, and their
// convolution, assembled with TruncatedSeries arithmetic. Returns 16
// components for a lattice site and the 4 channel components for (0,0).
Eigen::VectorXcd state_genfunc_coeff(const CoinParams& coin,
                                     const ReducedCoinParams& rp,
                                     ReducedStart start, int x, int y, long t);

struct OriginReturnReport {
  Matrix16cd value;              // geometric closed form at z
  double ratio_spectral_radius;  // max spectral radius of the squared ratios
  double printed_bound;          // rho(Q_D Q'_U Q~_U B^{q'} z^2 - Delta z I)
  std::vector<std::string> flags;
};

// All-at-origin geometric object: odd powers of the two return ratios applied
// to the re-entry weights, plus the identity. Throws std::domain_error when
// the geometric ratio does not contract.
OriginReturnReport origin_return_genfunc(const CoinParams& coin,
                                         const ReducedCoinParams& rp, cplx z);

// Coefficients of the same object as a matrix power series in z.
std::vector<Matrix16cd> origin_return_series(const CoinParams& coin,
                                             const ReducedCoinParams& rp,
                                             int order);

}  // namespace qwalk
