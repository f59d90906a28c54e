#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace qwalk {

namespace {

// dense buffers above this many bytes are refused up front
constexpr std::int64_t kDenseByteGuard = 2'000'000'000;

bool near_unit(double x) { return std::abs(x - 1.0) < 1e-12; }

}  // namespace

int WalkSpec::origin_dim() const {
  switch (model) {
    case Model::Plane:
      return 0;
    case Model::Quarter:
    case Model::Joined:
      return mode == Mode::Unitarized ? 2 * k : k;
    case Model::ReducedStar:
      return mode == Mode::Unitarized ? 8 : 4;
  }
  return 0;
}

int WalkSpec::site_dim() const { return model == Model::ReducedStar ? 16 : 4; }

Eigen::MatrixXcd WalkSpec::origin_coin() const {
  switch (model) {
    case Model::Plane:
      return {};
    case Model::Quarter:
    case Model::Joined:
      return coin.ctilde * grover(mode == Mode::Unitarized ? 2 * k : k);
    case Model::ReducedStar: {
      if (mode == Mode::Unitarized) {
        // channel mixing on each of the H and V origin halves, no H/V coupling
        Eigen::Matrix4cd base =
            reduced.ctilde * origin_coin_star_orthonormal(reduced);
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
        m.block<4, 4>(0, 0) = base;
        m.block<4, 4>(4, 4) = base;
        return m;
      }
      return reduced.ctilde * origin_coin_star(reduced);
    }
  }
  return {};
}

WalkSpec build_walk(Model model, int k, const CoinParams& coin,
                    const ReducedCoinParams& reduced, Mode mode,
                    Boundary boundary, const Eigen::VectorXcd& initial_psi) {
  coin.validate();
  WalkSpec spec;
  spec.model = model;
  spec.k = (model == Model::Quarter) ? 1 : k;
  spec.coin = coin;
  spec.reduced = reduced;
  spec.mode = mode;
  spec.boundary = boundary;
  if (spec.k < 1 || spec.k > 64) throw std::invalid_argument("k out of range");
  if (model == Model::ReducedStar) {
    reduced.validate();
    if (std::abs(coin.ctilde - reduced.ctilde) > 1e-12)
      throw std::invalid_argument("origin phase mismatch between coin sets");
  }
  if (!near_unit(initial_psi.norm()))
    throw std::invalid_argument("initial state must have unit norm");

  StateVector init;
  switch (model) {
    case Model::Plane: {
      if (initial_psi.size() != 4)
        throw std::invalid_argument("plane initial state needs 4 amplitudes");
      init.amp[SiteKey{0, 0, 0}] = initial_psi;
      break;
    }
    case Model::Quarter:
    case Model::Joined: {
      if (initial_psi.size() != spec.k)
        throw std::invalid_argument("origin initial state needs k amplitudes");
      if (mode == Mode::Unitarized) {
        Eigen::VectorXcd o = Eigen::VectorXcd::Zero(2 * spec.k);
        o.head(spec.k) = initial_psi / std::sqrt(2.0);
        o.tail(spec.k) = initial_psi / std::sqrt(2.0);
        init.amp[origin_key()] = o;
      } else {
        init.amp[origin_key()] = initial_psi;
      }
      break;
    }
    case Model::ReducedStar: {
      if (initial_psi.size() != 16)
        throw std::invalid_argument(
            "channel-walk initial state needs 16 amplitudes");
      init.amp[SiteKey{0, 1, 0}] = initial_psi;
      init.time = 1;
      break;
    }
  }
  spec.initial = init;
  return spec;
}

StateVector reduced_star_initial_state(ReducedStart which) {
  StateVector s;
  s.time = 1;
  auto put = [&s](int x, int y, int channel, int chir) {
    s.add(SiteKey{0, x, y}, 4 * channel + chir, cplx{1.0, 0.0}, 16);
  };
  switch (which) {
    case ReducedStart::XBranch:
      put(1, 0, 0, CH_R);
      break;
    case ReducedStart::YBranch:
      put(0, 1, 0, CH_U);
      break;
    case ReducedStart::BothBranches:
      put(1, 0, 0, CH_R);
      put(0, 1, 0, CH_U);
      break;
    case ReducedStart::YSiteVariant:
      put(0, 1, 0, CH_R);
      break;
  }
  return s;
}

namespace {

// Scatter one post-coin lattice amplitude through the shift, including the
// boundary completion and (for walks with a glued origin) the origin entry.
// `channel` is 0 for 4-component sites; origin entry indices are
//   joined literal: copy r for both entry rays (the printed, norm-doubling
//                   origin rules), unitarized: r (H) and k+r (V);
//   channel walk:   channel m literal, m (H) and 4+m (V) unitarized.
struct ScatterCtx {
  const WalkSpec& spec;
  StateVector& out;
};

void scatter_move(ScatterCtx& ctx, int copy, int x, int y, int channel,
                  int slot, cplx v) {
  if (v == cplx{0.0, 0.0}) return;
  const WalkSpec& spec = ctx.spec;
  const int sdim = spec.site_dim();
  const int odim = spec.origin_dim();
  const bool origin_walk = spec.has_origin();
  const bool channel_walk = spec.model == Model::ReducedStar;
  auto lattice = [&](int tx, int ty, int tslot) {
    ctx.out.add(SiteKey{copy, tx, ty}, 4 * channel + tslot, v, sdim);
  };
  auto origin_entry = [&](bool vertical) {
    int idx = channel_walk ? channel : copy;
    if (spec.mode == Mode::Unitarized && vertical)
      idx += channel_walk ? 4 : spec.k;
    ctx.out.add(origin_key(), idx, v, odim);
  };

  switch (slot) {
    case CH_L:
      if (origin_walk && x == 1 && y == 0) {
        origin_entry(false);
      } else if (origin_walk && x == 0) {
        if (spec.boundary == Boundary::Slide)
          lattice(0, y + 1, CH_R);
        else
          lattice(0, y, CH_R);
      } else {
        lattice(x - 1, y, CH_L);
      }
      break;
    case CH_R:
      lattice(x + 1, y, CH_R);
      break;
    case CH_D:
      if (origin_walk && x == 0 && y == 1) {
        origin_entry(true);
      } else if (origin_walk && y == 0) {
        if (spec.boundary == Boundary::Slide)
          lattice(x + 1, 0, CH_U);
        else
          lattice(x, 0, CH_U);
      } else {
        lattice(x, y - 1, CH_D);
      }
      break;
    case CH_U:
      lattice(x, y + 1, CH_U);
      break;
    default:
      throw invariant_error("bad chirality slot");
  }
}

// origin exit: post-coin origin block -> (1,0) Right and (0,1) Up
void scatter_origin(ScatterCtx& ctx, const Eigen::VectorXcd& v) {
  const WalkSpec& spec = ctx.spec;
  const int sdim = spec.site_dim();
  if (spec.model == Model::ReducedStar) {
    for (int m = 0; m < 4; ++m) {
      cplx h = v[m];
      cplx vv = spec.mode == Mode::Unitarized ? v[4 + m] : v[m];
      if (h != cplx{0.0, 0.0})
        ctx.out.add(SiteKey{0, 1, 0}, 4 * m + CH_R, h, sdim);
      if (vv != cplx{0.0, 0.0})
        ctx.out.add(SiteKey{0, 0, 1}, 4 * m + CH_U, vv, sdim);
    }
    return;
  }
  for (int r = 0; r < spec.k; ++r) {
    cplx h = v[r];
    cplx vv = spec.mode == Mode::Unitarized ? v[spec.k + r] : v[r];
    if (h != cplx{0.0, 0.0}) ctx.out.add(SiteKey{r, 1, 0}, CH_R, h, sdim);
    if (vv != cplx{0.0, 0.0}) ctx.out.add(SiteKey{r, 0, 1}, CH_U, vv, sdim);
  }
}

}  // namespace

StateVector step_reference(const WalkSpec& spec, const StateVector& s,
                           StepAudit* audit) {
  StateVector out;
  out.time = s.time + 1;
  ScatterCtx ctx{spec, out};
  const Eigen::Matrix4cd C =
      spec.bulk_coin ? *spec.bulk_coin : plane_coin(spec.coin);
  const Eigen::MatrixXcd OC =
      spec.has_origin() ? spec.origin_coin() : Eigen::MatrixXcd();
  const int nch = spec.model == Model::ReducedStar ? 4 : 1;

  for (const auto& [site, block] : s.amp) {
    if (site.copy == kOriginCopy) {
      if (block.size() != spec.origin_dim())
        throw invariant_error("origin block has wrong length");
      scatter_origin(ctx, OC * block);
      continue;
    }
    if (block.size() != spec.site_dim())
      throw invariant_error("site block has wrong length");
    if (spec.has_origin() && (site.x < 0 || site.y < 0 || site.x + site.y == 0))
      throw invariant_error("site outside the quarter-plane lattice");
    for (int m = 0; m < nch; ++m) {
      Eigen::Vector4cd w = C * block.segment<4>(4 * m);
      for (int slot = 0; slot < 4; ++slot)
        scatter_move(ctx, site.copy, site.x, site.y, m, slot, w[slot]);
    }
  }
  if (audit) {
    audit->norm_sq_before = s.squared_norm();
    audit->norm_sq_after = out.squared_norm();
  }
  out.prune(spec.prune_tol);
  return out;
}

StateVector evolve_reference(const WalkSpec& spec, long t_target,
                             std::vector<StepAudit>* audits) {
  StateVector s = spec.initial;
  while (s.time < t_target) {
    StepAudit a;
    s = step_reference(spec, s, &a);
    if (audits) audits->push_back(a);
  }
  return s;
}

DistributionTable distribution(const StateVector& s) {
  DistributionTable table;
  for (const auto& [site, block] : s.amp) table[site] = block.squaredNorm();
  return table;
}

// ---------------------------------------------------------------------------
// dense engine

DenseWalker::DenseWalker(const WalkSpec& spec, long horizon)
    : spec_(spec), horizon_(horizon), t_(spec.initial.time) {
  if (horizon < 1 || horizon > 100000)
    throw std::invalid_argument("dense horizon out of range");
  block_ = spec_.site_dim();
  std::int64_t nsites = 0;
  if (spec_.model == Model::Plane) {
    plane_off_ = static_cast<int>(horizon);
    nrows_ = 2 * plane_off_ + 1;
    nsites = static_cast<std::int64_t>(nrows_) * nrows_;
  } else {
    nrows_ = static_cast<int>(horizon) + 2;
    row_off_.assign(nrows_ + 1, 0);
    for (int y = 0; y < nrows_; ++y)
      row_off_[y + 1] = row_off_[y] + (nrows_ - y);
    nsites = row_off_[nrows_];
  }
  const int copies = spec_.model == Model::Joined ? spec_.k : 1;
  std::int64_t amps = nsites * block_ * copies;
  if (amps * 2 * static_cast<std::int64_t>(sizeof(cplx)) > kDenseByteGuard)
    throw resource_guard_error("dense walker buffers exceed the memory guard");
  cur_.assign(amps, cplx{0.0, 0.0});
  nxt_.assign(amps, cplx{0.0, 0.0});
  const int odim = spec_.origin_dim();
  origin_cur_ = Eigen::VectorXcd::Zero(odim);
  origin_nxt_ = Eigen::VectorXcd::Zero(odim);

  for (const auto& [site, blockv] : spec_.initial.amp) {
    if (site.copy == kOriginCopy) {
      origin_cur_ = blockv;
      continue;
    }
    if (!in_lattice(site.x, site.y))
      throw std::invalid_argument("initial site outside the dense lattice");
    const int copy = spec_.model == Model::Joined ? site.copy : 0;
    long base = (static_cast<long>(copy) * nsites + site_index(site.x, site.y)) *
                block_;
    for (int i = 0; i < blockv.size(); ++i) cur_[base + i] = blockv[i];
  }
}

long DenseWalker::site_index(int x, int y) const {
  if (spec_.model == Model::Plane)
    return static_cast<long>(y + plane_off_) * nrows_ + (x + plane_off_);
  return row_off_[y] + x;
}

bool DenseWalker::in_lattice(int x, int y) const {
  if (spec_.model == Model::Plane)
    return std::abs(x) <= plane_off_ && std::abs(y) <= plane_off_;
  return x >= 0 && y >= 0 && x + y >= 1 && x + y <= nrows_ - 1;
}

double DenseWalker::squared_norm() const {
  // fixed serial accumulation; kept independent of the thread count
  double s = 0.0;
  for (const cplx& v : cur_) s += std::norm(v);
  for (int i = 0; i < origin_cur_.size(); ++i) s += std::norm(origin_cur_[i]);
  return s;
}

void DenseWalker::coin_pass() {
  const Eigen::Matrix4cd C =
      spec_.bulk_coin ? *spec_.bulk_coin : plane_coin(spec_.coin);
  const int copies = spec_.model == Model::Joined ? spec_.k : 1;
  const std::int64_t nsites =
      spec_.model == Model::Plane
          ? static_cast<std::int64_t>(nrows_) * nrows_
          : row_off_[nrows_];
  const std::int64_t blocks = copies * nsites * (block_ / 4);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    cplx* p = cur_.data() + 4 * b;
    const cplx l = p[0], r = p[1], d = p[2], u = p[3];
    for (int i = 0; i < 4; ++i)
      p[i] = C(i, 0) * l + C(i, 1) * r + C(i, 2) * d + C(i, 3) * u;
  }
  if (spec_.has_origin() && origin_cur_.size() > 0)
    origin_cur_ = (spec_.origin_coin() * origin_cur_).eval();
}

void DenseWalker::shift_pass() {
  const int copies = spec_.model == Model::Joined ? spec_.k : 1;
  const std::int64_t nsites =
      spec_.model == Model::Plane
          ? static_cast<std::int64_t>(nrows_) * nrows_
          : row_off_[nrows_];
  std::fill(nxt_.begin(), nxt_.end(), cplx{0.0, 0.0});
  const bool plane = spec_.model == Model::Plane;
  const bool channel_walk = spec_.model == Model::ReducedStar;
  const bool unit = spec_.mode == Mode::Unitarized;
  const bool slide = spec_.boundary == Boundary::Slide;
  const int nch = block_ / 4;

  if (plane) {
    const int W = nrows_;
#pragma omp parallel for schedule(static)
    for (int row = 0; row < W; ++row) {
      for (int col = 0; col < W; ++col) {
        long tgt = (static_cast<long>(row) * W + col) * 4;
        // gather order fixed: L, R, D, U
        if (col + 1 < W) nxt_[tgt + CH_L] = cur_[(static_cast<long>(row) * W + col + 1) * 4 + CH_L];
        if (col - 1 >= 0) nxt_[tgt + CH_R] = cur_[(static_cast<long>(row) * W + col - 1) * 4 + CH_R];
        if (row + 1 < W) nxt_[tgt + CH_D] = cur_[(static_cast<long>(row + 1) * W + col) * 4 + CH_D];
        if (row - 1 >= 0) nxt_[tgt + CH_U] = cur_[(static_cast<long>(row - 1) * W + col) * 4 + CH_U];
      }
    }
    cur_.swap(nxt_);
    return;
  }

  // quarter-plane family
  const std::int64_t rows_total = static_cast<std::int64_t>(copies) * nrows_;
#pragma omp parallel for schedule(static)
  for (std::int64_t cr = 0; cr < rows_total; ++cr) {
    const int copy = static_cast<int>(cr / nrows_);
    const int y = static_cast<int>(cr % nrows_);
    const std::int64_t cbase = static_cast<std::int64_t>(copy) * nsites;
    for (int x = (y == 0 ? 1 : 0); x + y <= nrows_ - 1; ++x) {
      const long tgt = (cbase + row_off_[y] + x) * block_;
      for (int m = 0; m < nch; ++m) {
        const int mo = 4 * m;
        // Left <- (x+1, y)
        if (x + 1 + y <= nrows_ - 1)
          nxt_[tgt + mo + CH_L] = cur_[(cbase + row_off_[y] + x + 1) * block_ + mo + CH_L];
        // Right <- (x-1, y), origin exit, or the wall completion
        if (x == 1 && y == 0) {
          nxt_[tgt + mo + CH_R] = origin_cur_[channel_walk ? m : copy];
        } else if (x >= 1) {
          nxt_[tgt + mo + CH_R] = cur_[(cbase + row_off_[y] + x - 1) * block_ + mo + CH_R];
        } else if (slide) {
          if (y >= 2)
            nxt_[tgt + mo + CH_R] = cur_[(cbase + row_off_[y - 1]) * block_ + mo + CH_L];
        } else {
          nxt_[tgt + mo + CH_R] = cur_[(cbase + row_off_[y]) * block_ + mo + CH_L];
        }
        // Down <- (x, y+1)
        if (x + y + 1 <= nrows_ - 1)
          nxt_[tgt + mo + CH_D] = cur_[(cbase + row_off_[y + 1] + x) * block_ + mo + CH_D];
        // Up <- (x, y-1), origin exit, or the wall completion
        if (x == 0 && y == 1) {
          int src = channel_walk ? m : copy;
          if (unit) src += channel_walk ? 4 : spec_.k;
          nxt_[tgt + mo + CH_U] = origin_cur_[src];
        } else if (y >= 1) {
          nxt_[tgt + mo + CH_U] = cur_[(cbase + row_off_[y - 1] + x) * block_ + mo + CH_U];
        } else if (slide) {
          if (x >= 2)
            nxt_[tgt + mo + CH_U] = cur_[(cbase + row_off_[0] + x - 1) * block_ + mo + CH_D];
        } else {
          nxt_[tgt + mo + CH_U] = cur_[(cbase + row_off_[0] + x) * block_ + mo + CH_D];
        }
      }
    }
  }

  // origin gather (serial; a handful of reads)
  origin_nxt_.setZero();
  for (int i = 0; i < (channel_walk ? 4 : copies); ++i) {
    const std::int64_t cbase =
        channel_walk ? 0 : static_cast<std::int64_t>(i) * nsites;
    const int mo = channel_walk ? 4 * i : 0;
    cplx from_x = cur_[(cbase + row_off_[0] + 1) * block_ + mo + CH_L];
    cplx from_y = cur_[(cbase + row_off_[1] + 0) * block_ + mo + CH_D];
    if (unit) {
      origin_nxt_[i] = from_x;
      origin_nxt_[(channel_walk ? 4 : spec_.k) + i] = from_y;
    } else {
      origin_nxt_[i] = from_x + from_y;
    }
  }
  origin_cur_.swap(origin_nxt_);
  cur_.swap(nxt_);
}

void DenseWalker::step() {
  StepAudit a;
  a.norm_sq_before = squared_norm();
  coin_pass();
  shift_pass();
  a.norm_sq_after = squared_norm();
  audits_.push_back(a);
  ++t_;
}

void DenseWalker::run_to(long t_target) {
  // support after t steps stays within x+y <= t (|x|+|y| <= t on the plane),
  // so capping at the horizon keeps every move inside the allocated window
  if (t_target > horizon_)
    throw std::invalid_argument("target time exceeds the dense horizon");
  while (t_ < t_target) step();
}

StateVector DenseWalker::snapshot(double prune_tol) const {
  StateVector s;
  s.time = t_;
  const int copies = spec_.model == Model::Joined ? spec_.k : 1;
  const std::int64_t nsites =
      spec_.model == Model::Plane
          ? static_cast<std::int64_t>(nrows_) * nrows_
          : row_off_[nrows_];
  auto scan = [&](int copy, int x, int y) {
    long base = (static_cast<long>(copy) * nsites + site_index(x, y)) * block_;
    Eigen::VectorXcd block(block_);
    bool live = false;
    for (int i = 0; i < block_; ++i) {
      block[i] = cur_[base + i];
      live = live || std::abs(block[i]) > prune_tol;
    }
    if (live) s.amp[SiteKey{copy, x, y}] = block;
  };
  if (spec_.model == Model::Plane) {
    for (int y = -plane_off_; y <= plane_off_; ++y)
      for (int x = -plane_off_; x <= plane_off_; ++x) scan(0, x, y);
  } else {
    for (int copy = 0; copy < copies; ++copy)
      for (int y = 0; y < nrows_; ++y)
        for (int x = (y == 0 ? 1 : 0); x + y <= nrows_ - 1; ++x)
          scan(copy, x, y);
    if (origin_cur_.size() > 0 &&
        origin_cur_.lpNorm<Eigen::Infinity>() > prune_tol)
      s.amp[origin_key()] = origin_cur_;
  }
  return s;
}

DistributionTable DenseWalker::distribution() const {
  DistributionTable table;
  StateVector s = snapshot(1e-300);
  for (const auto& [site, block] : s.amp) table[site] = block.squaredNorm();
  return table;
}

}  // namespace qwalk
