#pragma once
// Coin matrices for the quarter-plane / joined-plane walk family.
// Chirality index order is fixed everywhere: 0=Left, 1=Right, 2=Down, 3=Up.

#include <complex>
#include <Eigen/Dense>

namespace qwalk {

using cplx = std::complex<double>;
using Matrix16cd = Eigen::Matrix<cplx, 16, 16>;
using Vector16cd = Eigen::Matrix<cplx, 16, 1>;

enum Chirality : int { CH_L = 0, CH_R = 1, CH_D = 2, CH_U = 3 };

// 2x2 unitary block (a b; c d) with all entries nonzero, plus the unimodular
// origin phase ctilde. The 4x4 bulk coin is the tensor square of this block.
struct CoinParams {
  cplx a{}, b{}, c{}, d{};
  cplx ctilde{1.0, 0.0};

  cplx delta() const { return a * d - b * c; }
  void validate() const;  // throws std::invalid_argument on violation

  static CoinParams hadamard(cplx ctilde = cplx{1.0, 0.0});
  // abcd != 0 guaranteed; angles drawn from the given engine
  static CoinParams random(std::uint64_t seed, cplx ctilde = cplx{1.0, 0.0});
};

// Own/other channel couple (a_k, b_k) for k planes glued at the origin.
// Constraint: a_k^2 + (k-1) b_k^2 = 1.
struct ReducedCoinParams {
  double a_k{1.0};
  double b_k{0.0};
  int k{1};
  cplx ctilde{1.0, 0.0};

  void validate() const;
  static ReducedCoinParams defaults(int k, cplx ctilde = cplx{1.0, 0.0});
};

// Bulk 4x4 coin on chirality labels; equals kron(K, K) for K = (a b; c d).
Eigen::Matrix4cd plane_coin(const CoinParams& p);

// k x k Grover matrix, entries 2/k - delta_ij.
Eigen::MatrixXcd grover(int k);

// 4x4 own/other channel coin used away from the origin by the reduced walk.
// Tensor square of ( sqrt(k-1) b_k, a_k ; -a_k, sqrt(k-1) b_k ).
Eigen::Matrix4cd reduced_coin(const ReducedCoinParams& r);

// 4x4 origin coin of the reduced walk in the raw (unnormalized) own/other
// basis. Tensor square of ( a_k, (k-1) b_k ; b_k, -a_k ). Not unitary in
// general; it preserves the weighted norm of the unnormalized basis. Callers
// must check is_unitary rather than assume it.
Eigen::Matrix4cd origin_coin_star(const ReducedCoinParams& r);

// Same operator conjugated by the basis normalization diag(1, sqrt(k-1),
// sqrt(k-1), k-1): tensor square of ( a_k, sqrt(k-1) b_k ; sqrt(k-1) b_k,
// -a_k ), unitary whenever the (a_k, b_k) constraint holds. Used by the
// unitarized reduced walk.
Eigen::Matrix4cd origin_coin_star_orthonormal(const ReducedCoinParams& r);

// 16x16 one-step direction weights of the reduced walk, factored as
// (4x4 channel part) kron (4x4 chirality part). Bulk weights keep exactly one
// coin row; the origin exit weight carries the origin coin on the channel
// factor and ctilde^2 on the (Up slot <- entry slot) chirality factor, the
// origin re-entry weights carry ctilde on the entry slot.
struct WeightSet {
  Matrix16cd pL, pR, qD, qU;      // bulk moves
  Matrix16cd qTilde;              // origin exit
  Matrix16cd pRPrime, qUPrime;    // swapped-slot bulk variants
  Matrix16cd pRTilde, qUTilde;    // origin re-entry
};
WeightSet direction_weights(const CoinParams& p, const ReducedCoinParams& r);

struct UnitarityReport {
  bool unitary{false};
  double residual{0.0};  // max |(M^dagger M - I)_ij|
};
UnitarityReport is_unitary(const Eigen::MatrixXcd& m, double tol = 1e-10);

}  // namespace qwalk
