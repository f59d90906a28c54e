#include "qwalk/coin.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qwalk {

namespace {

constexpr double kParamTol = 1e-12;

// kron of two 4x4 blocks, row index = 4*i1 + i2
Matrix16cd kron4(const Eigen::Matrix4cd& lhs, const Eigen::Matrix4cd& rhs) {
  Matrix16cd out;
  for (int i1 = 0; i1 < 4; ++i1)
    for (int j1 = 0; j1 < 4; ++j1)
      for (int i2 = 0; i2 < 4; ++i2)
        for (int j2 = 0; j2 < 4; ++j2)
          out(4 * i1 + i2, 4 * j1 + j2) = lhs(i1, j1) * rhs(i2, j2);
  return out;
}

Eigen::Matrix4cd tensor_square2(const Eigen::Matrix2cd& m) {
  Eigen::Matrix4cd out;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j2 = 0; j2 < 2; ++j2)
          out(2 * i1 + i2, 2 * j1 + j2) = m(i1, j1) * m(i2, j2);
  return out;
}

// 4x4 with a single nonzero row
Eigen::Matrix4cd single_row(int row, const Eigen::RowVector4cd& content) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.row(row) = content;
  return m;
}

}  // namespace

void CoinParams::validate() const {
  if (std::abs(a) < kParamTol || std::abs(b) < kParamTol ||
      std::abs(c) < kParamTol || std::abs(d) < kParamTol)
    throw std::invalid_argument("coin block entries must all be nonzero");
  Eigen::Matrix2cd m;
  m << a, b, c, d;
  Eigen::Matrix2cd res = m.adjoint() * m - Eigen::Matrix2cd::Identity();
  if (res.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("coin block (a b; c d) must be unitary");
  if (std::abs(std::abs(ctilde) - 1.0) > 1e-10)
    throw std::invalid_argument("origin phase ctilde must be unimodular");
}

CoinParams CoinParams::hadamard(cplx ctilde) {
  const double s = 1.0 / std::sqrt(2.0);
  return CoinParams{s, s, s, -s, ctilde};
}

CoinParams CoinParams::random(std::uint64_t seed, cplx ctilde) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  // keep theta away from the axes so all four entries stay nonzero
  std::uniform_real_distribution<double> mix(0.15, M_PI / 2.0 - 0.15);
  const double th = mix(eng);
  const cplx ea = std::polar(1.0, angle(eng));
  const cplx eb = std::polar(1.0, angle(eng));
  const cplx eg = std::polar(1.0, angle(eng));
  CoinParams p;
  p.a = ea * std::cos(th);
  p.b = eb * std::sin(th);
  p.c = -std::conj(eb) * std::sin(th) * eg;
  p.d = std::conj(ea) * std::cos(th) * eg;
  p.ctilde = ctilde;
  return p;
}

void ReducedCoinParams::validate() const {
  if (k < 1 || k > 64) throw std::invalid_argument("plane count k out of range [1, 64]");
  const double residual = a_k * a_k + (k - 1) * b_k * b_k - 1.0;
  if (std::abs(residual) > 1e-10)
    throw std::invalid_argument("channel couple must satisfy a_k^2 + (k-1) b_k^2 = 1");
  if (std::abs(std::abs(ctilde) - 1.0) > 1e-10)
    throw std::invalid_argument("origin phase ctilde must be unimodular");
}

ReducedCoinParams ReducedCoinParams::defaults(int k, cplx ctilde) {
  if (k < 1 || k > 64) throw std::invalid_argument("plane count k out of range [1, 64]");
  ReducedCoinParams r;
  r.k = k;
  r.ctilde = ctilde;
  // Grover matrix split into the own coordinate and the uniform rest. For a
  // single plane there is no rest to couple to, so b_1 = 0.
  r.a_k = (2.0 - k) / static_cast<double>(k);
  r.b_k = (k >= 2) ? 2.0 / static_cast<double>(k) : 0.0;
  return r;
}

Eigen::Matrix4cd plane_coin(const CoinParams& p) {
  p.validate();
  const cplx a = p.a, b = p.b, c = p.c, d = p.d;
  Eigen::Matrix4cd m;
  m << a * a, a * b, a * b, b * b,
       a * c, a * d, b * c, b * d,
       a * c, b * c, a * d, b * d,
       c * c, c * d, c * d, d * d;
  return m;
}

Eigen::MatrixXcd grover(int k) {
  if (k < 1) throw std::invalid_argument("grover size must be positive");
  Eigen::MatrixXcd g(k, k);
  const double off = 2.0 / static_cast<double>(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = off - (i == j ? 1.0 : 0.0);
  return g;
}

Eigen::Matrix4cd reduced_coin(const ReducedCoinParams& r) {
  r.validate();
  const double a = r.a_k, b = r.b_k;
  const double s = std::sqrt(static_cast<double>(r.k - 1));
  Eigen::Matrix2cd n;
  n << s * b, a,
       -a, s * b;
  return tensor_square2(n);
}

Eigen::Matrix4cd origin_coin_star(const ReducedCoinParams& r) {
  r.validate();
  const double a = r.a_k, b = r.b_k;
  const double km1 = static_cast<double>(r.k - 1);
  Eigen::Matrix2cd m;
  m << a, km1 * b,
       b, -a;
  return tensor_square2(m);
}

Eigen::Matrix4cd origin_coin_star_orthonormal(const ReducedCoinParams& r) {
  r.validate();
  const double a = r.a_k, b = r.b_k;
  const double s = std::sqrt(static_cast<double>(r.k - 1));
  Eigen::Matrix2cd m;
  m << a, s * b,
       s * b, -a;
  return tensor_square2(m);
}

WeightSet direction_weights(const CoinParams& p, const ReducedCoinParams& r) {
  const Eigen::Matrix4cd coin = plane_coin(p);
  const Eigen::Matrix4cd star = origin_coin_star(r);
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  const cplx ct = r.ctilde;

  WeightSet w;
  w.pL = kron4(id, single_row(CH_L, coin.row(CH_L)));
  w.pR = kron4(id, single_row(CH_R, coin.row(CH_R)));
  w.qD = kron4(id, single_row(CH_D, coin.row(CH_D)));
  w.qU = kron4(id, single_row(CH_U, coin.row(CH_U)));

  // origin exit: channel coin on the left factor, ctilde^2 sends the origin
  // slot (stored in the Left position) to the Up slot
  Eigen::Matrix4cd exit_r = Eigen::Matrix4cd::Zero();
  exit_r(CH_U, CH_L) = ct * ct;
  w.qTilde = kron4(star, exit_r);

  // swapped-slot bulk variants: the Right row deposited in the Down slot, and
  // the Up row (with its printed trailing c*d entry) deposited in the Left slot
  w.pRPrime = kron4(id, single_row(CH_D, coin.row(CH_R)));
  Eigen::RowVector4cd up_row_variant;
  up_row_variant << p.c * p.c, p.c * p.d, p.c * p.d, p.c * p.d;
  w.qUPrime = kron4(id, single_row(CH_L, up_row_variant));

  // origin re-entry: ctilde on the (entry slot <- entry slot) position
  Eigen::Matrix4cd entry_r = Eigen::Matrix4cd::Zero();
  entry_r(CH_L, CH_L) = ct;
  w.pRTilde = kron4(star, entry_r);
  w.qUTilde = w.pRTilde;
  return w;
}

UnitarityReport is_unitary(const Eigen::MatrixXcd& m, double tol) {
  UnitarityReport rep;
  if (m.rows() != m.cols()) {
    rep.unitary = false;
    rep.residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  const Eigen::MatrixXcd res =
      m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  rep.residual = res.cwiseAbs().maxCoeff();
  rep.unitary = rep.residual <= tol;
  return rep;
}

}  // namespace qwalk
