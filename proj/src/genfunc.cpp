#include "qwalk/genfunc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace qwalk {

namespace {

constexpr long kPathSumCap = 512;

Matrix16cd kron4(const Eigen::Matrix4cd& lhs, const Eigen::Matrix4cd& rhs) {
  Matrix16cd out;
  for (int i1 = 0; i1 < 4; ++i1)
    for (int j1 = 0; j1 < 4; ++j1)
      out.block<4, 4>(4 * i1, 4 * j1) = lhs(i1, j1) * rhs;
  return out;
}

Eigen::Matrix4cd single_row(int row, const Eigen::RowVector4cd& content) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.row(row) = content;
  return m;
}

cplx ipow(cplx base, int n) {
  cplx out{1.0, 0.0};
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

double spectral_radius(const Matrix16cd& m) {
  Eigen::ComplexEigenSolver<Matrix16cd> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

LambdaValue lambda_eval(const CoinParams& p, cplx z) {
  const cplx delta = p.delta();
  LambdaValue out;
  if (std::abs(z) < 1e-9) {
    // removable singularity: lambda = c z + O(z^3)
    out.lambda = p.c * z;
    out.other = (std::abs(z) > 0.0)
                    ? (delta * z * z + 1.0) / (delta * std::conj(p.c) * z)
                    : cplx{0.0, 0.0};
    out.quad_residual = std::abs(delta * std::conj(p.c) * z * out.lambda *
                                     out.lambda -
                                 (delta * z * z + 1.0) * out.lambda + p.c * z);
    out.branch_flagged = false;
    return out;
  }
  const cplx qa = delta * std::conj(p.c) * z;
  const cplx qb = -(delta * z * z + 1.0);
  const cplx qc = p.c * z;
  const cplx disc = qb * qb - 4.0 * qa * qc;
  cplx root = std::sqrt(disc);
  // pick the sqrt sign that avoids cancellation against qb
  if ((std::conj(qb) * root).real() > 0.0) root = -root;
  const cplx q = -0.5 * (qb + root);
  const cplx r1 = q / qa;
  const cplx r2 = qc / q;
  if (std::abs(r1) <= std::abs(r2)) {
    out.lambda = r1;
    out.other = r2;
  } else {
    out.lambda = r2;
    out.other = r1;
  }
  out.quad_residual =
      std::abs(qa * out.lambda * out.lambda + qb * out.lambda + qc);
  out.branch_flagged = std::abs(out.lambda) >= 1.0 - 1e-12;
  return out;
}

ScalarSeries lambda_series(const CoinParams& p, int order) {
  if (order < 1) throw std::invalid_argument("series order must be >= 1");
  const cplx delta = p.delta();
  const double c2 = std::norm(p.c);
  ScalarSeries disc(order + 1);
  disc[0] = 1.0;
  if (order + 1 >= 2) disc[2] = 2.0 * delta * (1.0 - 2.0 * c2);
  if (order + 1 >= 4) disc[4] = delta * delta;
  const ScalarSeries root = sqrt_series(disc);
  ScalarSeries numer(order + 1);
  numer[0] = 1.0;
  numer[2] = delta;
  numer = numer - root;
  // divide by 2 Delta conj(c) z: shift every coefficient down one power
  ScalarSeries lam(order);
  const cplx denom = 2.0 * delta * std::conj(p.c);
  for (int n = 0; n <= order; ++n) lam[n] = numer[n + 1] / denom;
  return lam;
}

double lambda_inner_radius(const CoinParams& p, int samples) {
  if (samples < 8) throw std::invalid_argument("need at least 8 circle samples");
  auto circle_max = [&](double r) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double phi = 2.0 * M_PI * i / samples;
      worst = std::max(worst,
                       std::abs(lambda_eval(p, std::polar(r, phi)).lambda));
    }
    return worst;
  };
  const double strict = 1.0 - 1e-9;
  if (circle_max(1.0) < strict) return 1.0;
  double lo = 1e-3, hi = 1.0;
  if (circle_max(lo) >= strict) return 0.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (circle_max(mid) < strict ? lo : hi) = mid;
  }
  return lo;
}

double lambda_outer_cut(const CoinParams& p) {
  return std::min(std::norm(p.c), lambda_inner_radius(p));
}

cplx closed_form_B(const CoinParams& p, BTag tag, int x, int y, cplx z) {
  if (x < 0 || y < 0) return cplx{0.0, 0.0};
  const cplx a2 = p.a * p.a;
  const cplx d2 = p.d * p.d;
  const cplx lam = lambda_eval(p, z).lambda;
  const cplx pw = ipow(d2 * lam / a2, x + y);
  switch (tag) {
    case BTag::PR:
      return (x >= 1) ? pw / d2 : cplx{0.0, 0.0};
    case BTag::QU:
      return (y >= 1) ? pw / d2 : cplx{0.0, 0.0};
    case BTag::PRPrime:
    case BTag::QUPrime:
      if (std::abs(z) < 1e-300)
        throw std::invalid_argument("primed factor has a pole at z = 0");
      return pw * (lam - a2 * z * z) / (a2 * p.c * p.c * z * z);
  }
  return cplx{0.0, 0.0};
}

GenfuncScalars genfunc_scalars(const CoinParams& p, cplx z, bool mu_variant) {
  p.validate();
  GenfuncScalars g;
  const cplx delta = p.delta();
  const cplx a2 = p.a * p.a;
  const cplx c2 = p.c * p.c;
  const cplx d2 = p.d * p.d;
  const cplx ct2 = p.ctilde * p.ctilde;
  const double a4 = std::norm(a2);
  g.lambda = lambda_eval(p, z).lambda;
  if (mu_variant) {
    g.mu = (d2 * g.lambda - delta * z) / c2;
    g.flags.push_back("mu_variant");
  } else {
    g.mu = (d2 * g.lambda - delta * delta * z) / c2;
  }
  const cplx dz2 = delta * z * z;
  g.v = (1.0 + dz2) * (1.0 + dz2) - 4.0 * delta * a4 * z * z;
  g.delta_plus = 2.0 * c2 / ct2 + 1.0 - dz2;
  g.delta_minus = 2.0 * c2 / ct2 - 1.0 + dz2;
  g.w_plus_sq = -c2 * (ct2 + c2) / (ct2 * delta * (ct2 * a4 - ct2 - c2));
  g.w_minus_sq = c2 * (ct2 - c2) / (ct2 * delta * (ct2 * a4 - ct2 + c2));
  g.r0 = lambda_inner_radius(p);
  g.r1 = std::min(std::norm(p.c), g.r0);
  return g;
}

namespace {

using Site = std::pair<int, int>;

// targets reachable in one move from a populated source (slide included)
void collect_targets(const Site& s, std::set<Site>& out) {
  const auto [x, y] = s;
  if (x >= 2 || (x == 1 && y >= 1)) out.insert({x - 1, y});
  out.insert({x + 1, y});
  if (y >= 2 || (y == 1 && x >= 1)) out.insert({x, y - 1});
  out.insert({x, y + 1});
  if (x == 0) out.insert({0, y + 1});  // slide along the left wall
  if (y == 0) out.insert({x + 1, 0});  // slide along the bottom wall
}

}  // namespace

StateVector transfer_path_sum(const CoinParams& coin,
                              const ReducedCoinParams& rp, ReducedStart start,
                              long t) {
  coin.validate();
  rp.validate();
  if (std::abs(coin.ctilde - rp.ctilde) > 1e-12)
    throw std::invalid_argument("coin and channel origin phases must match");
  if (t < 0) throw std::invalid_argument("negative time");
  if (t > kPathSumCap)
    throw resource_guard_error("transfer path sum capped at t = 512");

  if (t == 0) {
    // inert seed at the corner: channel 0 with the chirality label the first
    // emission will carry
    StateVector s;
    s.time = 0;
    const int chir = (start == ReducedStart::YBranch) ? CH_U : CH_R;
    Vector16cd seed = Vector16cd::Zero();
    seed[chir] = 1.0;
    if (start == ReducedStart::BothBranches) seed[CH_U] = 1.0;
    s.amp[SiteKey{0, 0, 0}] = seed;
    return s;
  }

  const WeightSet w = direction_weights(coin, rp);
  const Eigen::Matrix4cd bulk = plane_coin(coin);
  const Eigen::Matrix4cd star_ct = rp.ctilde * origin_coin_star(rp);
  const Eigen::Matrix4cd id4 = Eigen::Matrix4cd::Identity();
  // boundary completions in the same single-row style as the bulk weights
  const Matrix16cd slide_left = kron4(id4, single_row(CH_R, bulk.row(CH_L)));
  const Matrix16cd slide_down = kron4(id4, single_row(CH_U, bulk.row(CH_D)));

  std::map<Site, Vector16cd> cur;
  Eigen::Vector4cd origin = Eigen::Vector4cd::Zero();
  {
    const StateVector init = reduced_star_initial_state(start);
    for (const auto& [site, block] : init.amp)
      cur[{site.x, site.y}] = Vector16cd(block);
  }

  for (long step = 1; step < t; ++step) {
    std::set<Site> targets;
    for (const auto& [site, block] : cur) collect_targets(site, targets);
    const bool have_origin = origin.cwiseAbs().maxCoeff() > 0.0;
    if (have_origin) {
      targets.insert({1, 0});
      targets.insert({0, 1});
    }

    std::map<Site, Vector16cd> nxt;
    auto source = [&cur](int x, int y) -> const Vector16cd* {
      auto it = cur.find({x, y});
      return it == cur.end() ? nullptr : &it->second;
    };
    for (const Site& tgt : targets) {
      const auto [x, y] = tgt;
      Vector16cd v = Vector16cd::Zero();
      if (const Vector16cd* s = source(x + 1, y)) v += w.pL * (*s);
      if (x - 1 >= 1 || (x - 1 == 0 && y >= 1))
        if (const Vector16cd* s = source(x - 1, y)) v += w.pR * (*s);
      if (const Vector16cd* s = source(x, y + 1)) v += w.qD * (*s);
      if (y - 1 >= 1 || (y - 1 == 0 && x >= 1))
        if (const Vector16cd* s = source(x, y - 1)) v += w.qU * (*s);
      if (x == 0 && y >= 2)
        if (const Vector16cd* s = source(0, y - 1)) v += slide_left * (*s);
      if (y == 0 && x >= 2)
        if (const Vector16cd* s = source(x - 1, 0)) v += slide_down * (*s);
      if (have_origin) {
        const Eigen::Vector4cd emitted = star_ct * origin;
        if (x == 1 && y == 0)
          for (int m = 0; m < 4; ++m) v[4 * m + CH_R] += emitted[m];
        if (x == 0 && y == 1)
          for (int m = 0; m < 4; ++m) v[4 * m + CH_U] += emitted[m];
      }
      if (v.cwiseAbs().maxCoeff() > 0.0) nxt[tgt] = v;
    }

    Eigen::Vector4cd origin_nxt = Eigen::Vector4cd::Zero();
    if (const Vector16cd* s = source(1, 0)) {
      const Vector16cd moved = w.pL * (*s);
      for (int m = 0; m < 4; ++m) origin_nxt[m] += moved[4 * m + CH_L];
    }
    if (const Vector16cd* s = source(0, 1)) {
      const Vector16cd moved = w.qD * (*s);
      for (int m = 0; m < 4; ++m) origin_nxt[m] += moved[4 * m + CH_D];
    }
    cur = std::move(nxt);
    origin = origin_nxt;
  }

  StateVector out;
  out.time = t;
  for (const auto& [site, block] : cur)
    out.amp[SiteKey{0, site.first, site.second}] = block;
  if (origin.cwiseAbs().maxCoeff() > 0.0)
    out.amp[origin_key()] = origin;
  return out;
}

namespace {

struct FreeRun {
  // amplitude at the query site per relative time (index 0 = seed placement)
  std::vector<Eigen::Vector4cd> at_query;
  // scalar absorbed into the origin per relative time (index 0 unused)
  std::vector<cplx> absorbed;
};

// origin-avoiding quarter-plane propagation with the slide boundary; the
// channel label rides along unchanged, so one chirality 4-block per site
FreeRun run_free(const Eigen::Matrix4cd& bulk,
                 const std::vector<std::pair<Site, int>>& seeds, Site query,
                 int horizon) {
  FreeRun out;
  out.at_query.assign(static_cast<size_t>(horizon) + 1,
                      Eigen::Vector4cd::Zero());
  out.absorbed.assign(static_cast<size_t>(horizon) + 1, cplx{0.0, 0.0});

  std::map<Site, Eigen::Vector4cd> cur;
  for (const auto& [site, slot] : seeds) {
    auto [it, inserted] = cur.try_emplace(site, Eigen::Vector4cd::Zero());
    it->second[slot] += 1.0;
  }
  if (auto it = cur.find(query); it != cur.end()) out.at_query[0] = it->second;

  for (int tau = 1; tau <= horizon; ++tau) {
    std::map<Site, Eigen::Vector4cd> nxt;
    auto deposit = [&nxt](int x, int y, int slot, cplx v) {
      auto [it, inserted] = nxt.try_emplace(Site{x, y},
                                            Eigen::Vector4cd::Zero());
      it->second[slot] += v;
    };
    for (const auto& [site, block] : cur) {
      const auto [x, y] = site;
      const Eigen::Vector4cd mixed = bulk * block;
      // Left
      if (x >= 2 || (x == 1 && y >= 1))
        deposit(x - 1, y, CH_L, mixed[CH_L]);
      else if (x == 1 && y == 0)
        out.absorbed[tau] += mixed[CH_L];
      else
        deposit(0, y + 1, CH_R, mixed[CH_L]);  // slide on the left wall
      // Right
      deposit(x + 1, y, CH_R, mixed[CH_R]);
      // Down
      if (y >= 2 || (y == 1 && x >= 1))
        deposit(x, y - 1, CH_D, mixed[CH_D]);
      else if (y == 1 && x == 0)
        out.absorbed[tau] += mixed[CH_D];
      else
        deposit(x + 1, 0, CH_U, mixed[CH_D]);  // slide on the bottom wall
      // Up
      deposit(x, y + 1, CH_U, mixed[CH_U]);
    }
    cur = std::move(nxt);
    if (auto it = cur.find(query); it != cur.end())
      out.at_query[static_cast<size_t>(tau)] = it->second;
  }
  return out;
}

}  // namespace

Eigen::VectorXcd state_genfunc_coeff(const CoinParams& coin,
                                     const ReducedCoinParams& rp,
                                     ReducedStart start, int x, int y,
                                     long t) {
  coin.validate();
  rp.validate();
  if (std::abs(coin.ctilde - rp.ctilde) > 1e-12)
    throw std::invalid_argument("coin and channel origin phases must match");
  if (t < 1) throw std::invalid_argument("renewal assembly needs t >= 1");
  if (t > kPathSumCap)
    throw resource_guard_error("renewal assembly capped at t = 512");
  if (x < 0 || y < 0) throw std::invalid_argument("quadrant coordinates only");

  const int order = static_cast<int>(t);
  const Eigen::Matrix4cd bulk = plane_coin(coin);
  const Eigen::Matrix4cd star_ct = rp.ctilde * origin_coin_star(rp);
  const Site query{x, y};

  // canonical re-emission kernels: every origin exit feeds both branches
  const FreeRun from_x = run_free(bulk, {{{1, 0}, CH_R}}, query, order);
  const FreeRun from_y = run_free(bulk, {{{0, 1}, CH_U}}, query, order);
  const FreeRun* init_x = nullptr;
  const FreeRun* init_y = nullptr;
  FreeRun variant;
  switch (start) {
    case ReducedStart::XBranch:
      init_x = &from_x;
      break;
    case ReducedStart::YBranch:
      init_y = &from_y;
      break;
    case ReducedStart::BothBranches:
      init_x = &from_x;
      init_y = &from_y;
      break;
    case ReducedStart::YSiteVariant:
      variant = run_free(bulk, {{{0, 1}, CH_R}}, query, order);
      init_x = &variant;
      break;
  }

  // alpha0 = z * (initial absorption series); rho = z * (both canonical ones)
  ScalarSeries alpha0(order);
  ScalarSeries rho(order);
  for (int s = 1; s <= order; ++s) {
    cplx a0{0.0, 0.0};
    if (init_x) a0 += init_x->absorbed[static_cast<size_t>(s - 1)];
    if (init_y) a0 += init_y->absorbed[static_cast<size_t>(s - 1)];
    alpha0[s] = a0;
    rho[s] = from_x.absorbed[static_cast<size_t>(s - 1)] +
             from_y.absorbed[static_cast<size_t>(s - 1)];
  }

  // origin occupation G = (I - rho * star)^{-1} alpha0 e_1
  TruncatedSeries<Eigen::Matrix4cd> ratio(order);
  TruncatedSeries<Eigen::Vector4cd> seed(order);
  for (int s = 0; s <= order; ++s) {
    ratio[s] = rho[s] * star_ct;
    seed[s] = Eigen::Vector4cd::Zero();
    seed[s][0] = alpha0[s];
  }
  const TruncatedSeries<Eigen::Vector4cd> occupation =
      apply_resolvent(ratio, seed);

  if (x == 0 && y == 0)
    return Eigen::VectorXcd(occupation[order]);

  // lattice block: initial free part in channel 0 plus re-emitted parts
  TruncatedSeries<Eigen::Vector4cd> f_init(order), f_emit(order);
  for (int s = 0; s <= order; ++s) {
    Eigen::Vector4cd fi = Eigen::Vector4cd::Zero();
    if (init_x) fi += init_x->at_query[static_cast<size_t>(s)];
    if (init_y) fi += init_y->at_query[static_cast<size_t>(s)];
    f_init[s] = fi;
    f_emit[s] = from_x.at_query[static_cast<size_t>(s)] +
                from_y.at_query[static_cast<size_t>(s)];
  }
  const auto z_f_init = shift_up(f_init, 1);
  const auto z_f_emit = shift_up(f_emit, 1);

  Eigen::VectorXcd block = Eigen::VectorXcd::Zero(16);
  for (int m = 0; m < 4; ++m) {
    ScalarSeries emitted_m(order);
    for (int s = 0; s <= order; ++s)
      emitted_m[s] = (star_ct * occupation[s])[m];
    const auto via_origin = mul<Eigen::Vector4cd>(emitted_m, z_f_emit);
    Eigen::Vector4cd seg = via_origin[order];
    if (m == 0) seg += z_f_init[order];
    block.segment<4>(4 * m) = seg;
  }
  return block;
}

namespace {

struct ReturnRatios {
  Matrix16cd kp, kq;       // constant matrix parts of the two return ratios
  Matrix16cd p_entry, q_entry;
};

ReturnRatios return_ratios(const CoinParams& coin,
                           const ReducedCoinParams& rp) {
  const WeightSet w = direction_weights(coin, rp);
  ReturnRatios r;
  r.kp = w.pL * w.pRPrime * w.pRTilde;
  r.kq = w.qD * w.qUPrime * w.qUTilde;
  r.p_entry = w.pRTilde;
  r.q_entry = w.qUTilde;
  return r;
}

}  // namespace

OriginReturnReport origin_return_genfunc(const CoinParams& coin,
                                         const ReducedCoinParams& rp,
                                         cplx z) {
  coin.validate();
  rp.validate();
  if (std::abs(coin.ctilde - rp.ctilde) > 1e-12)
    throw std::invalid_argument("coin and channel origin phases must match");
  const ReturnRatios rr = return_ratios(coin, rp);
  const cplx a2 = coin.a * coin.a;
  const cplx c2 = coin.c * coin.c;
  const cplx ct2 = rp.ctilde * rp.ctilde;
  const cplx lam = lambda_eval(coin, z).lambda;
  // corner value of the primed factor with its z^2 pole already cancelled
  const cplx sfac = (lam - a2 * z * z) / (a2 * c2);

  const Matrix16cd mp = ct2 * sfac * rr.kp;
  const Matrix16cd mq = ct2 * sfac * rr.kq;
  OriginReturnReport rep;
  rep.ratio_spectral_radius =
      std::max(spectral_radius(mp * mp), spectral_radius(mq * mq));
  if (rep.ratio_spectral_radius >= 1.0)
    throw std::domain_error("origin-return geometric ratio does not contract");

  const Matrix16cd id = Matrix16cd::Identity();
  const Matrix16cd sum_p = mp * (id - mp * mp).inverse();
  const Matrix16cd sum_q = mq * (id - mq * mq).inverse();
  rep.value = sum_p * rr.p_entry / ct2 + sum_q * rr.q_entry / ct2 + id;
  // printed contraction certificate, with the lone P_D symbol read as Q_D
  rep.printed_bound =
      spectral_radius(sfac * rr.kq - coin.delta() * z * id);
  rep.flags = {"p_d_as_q_d"};
  return rep;
}

std::vector<Matrix16cd> origin_return_series(const CoinParams& coin,
                                             const ReducedCoinParams& rp,
                                             int order) {
  coin.validate();
  rp.validate();
  if (std::abs(coin.ctilde - rp.ctilde) > 1e-12)
    throw std::invalid_argument("coin and channel origin phases must match");
  if (order < 0 || order > 256)
    throw std::invalid_argument("matrix series order out of range [0, 256]");
  const ReturnRatios rr = return_ratios(coin, rp);
  const cplx a2 = coin.a * coin.a;
  const cplx c2 = coin.c * coin.c;
  const cplx ct2 = rp.ctilde * rp.ctilde;

  const ScalarSeries lam = lambda_series(coin, std::max(order, 2));
  ScalarSeries sfac(order);
  for (int n = 0; n <= order; ++n)
    sfac[n] = ((n <= lam.order() ? lam[n] : cplx{0.0, 0.0}) -
               (n == 2 ? a2 : cplx{0.0, 0.0})) /
              (a2 * c2);

  const Matrix16cd id = Matrix16cd::Identity();
  TruncatedSeries<Matrix16cd> mp(order), mq(order);
  for (int n = 0; n <= order; ++n) {
    mp[n] = ct2 * sfac[n] * rr.kp;
    mq[n] = ct2 * sfac[n] * rr.kq;
  }
  const auto sum_p = mul<Matrix16cd>(mp, resolvent(mul<Matrix16cd>(mp, mp), id));
  const auto sum_q = mul<Matrix16cd>(mq, resolvent(mul<Matrix16cd>(mq, mq), id));

  std::vector<Matrix16cd> out(static_cast<size_t>(order) + 1);
  for (int n = 0; n <= order; ++n)
    out[static_cast<size_t>(n)] =
        sum_p[n] * rr.p_entry / ct2 + sum_q[n] * rr.q_entry / ct2;
  out[0] += id;
  return out;
}

}  // namespace qwalk
