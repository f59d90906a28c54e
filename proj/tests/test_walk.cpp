#include <omp.h>

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "qwalk/walk.hpp"
#include "test_util.hpp"

using namespace qwalk;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

Eigen::VectorXcd unit_origin(int k, int hot = 0) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(k);
  v[hot] = 1.0;
  return v;
}

WalkSpec quarter_spec(Mode mode, Boundary b = Boundary::Slide,
                      cplx ctilde = cplx{1.0, 0.0}) {
  return build_walk(Model::Quarter, 1, CoinParams::hadamard(ctilde),
                    ReducedCoinParams::defaults(1, ctilde), mode, b,
                    unit_origin(1));
}

cplx site_amp(const StateVector& s, SiteKey key, int idx, int dim) {
  return s.at_or_zero(key, dim)[idx];
}

// every populated site obeys x+y = t (mod 2); returns worst off-parity mass
double off_parity_mass(const StateVector& s) {
  double worst = 0.0;
  for (const auto& [site, block] : s.amp) {
    long coord = (site.copy == kOriginCopy) ? 0 : site.x + site.y;
    if (((coord - s.time) % 2 + 2) % 2 != 0)
      worst = std::max(worst, block.squaredNorm());
  }
  return worst;
}

}  // namespace

TEST_CASE("plane walk, hadamard, one step from a pure Left state") {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi[CH_L] = 1.0;
  WalkSpec spec =
      build_walk(Model::Plane, 1, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(1), Mode::Literal,
                 Boundary::Slide, psi);
  StateVector s = evolve_reference(spec, 1);
  CHECK(std::abs(site_amp(s, {0, -1, 0}, CH_L, 4) - 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 1, 0}, CH_R, 4) - 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, -1}, CH_D, 4) - 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, 1}, CH_U, 4) - 0.5) < 1e-14);
  CHECK(std::abs(s.squared_norm() - 1.0) < 1e-14);
}

TEST_CASE("plane walk conserves norm and parity for random coins") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    Eigen::VectorXcd psi(4);
    psi << cplx{0.5, 0.0}, cplx{0.0, 0.5}, cplx{-0.5, 0.0}, cplx{0.0, -0.5};
    WalkSpec spec = build_walk(Model::Plane, 1, CoinParams::random(seed),
                               ReducedCoinParams::defaults(1), Mode::Literal,
                               Boundary::Slide, psi);
    StateVector s = evolve_reference(spec, 31);
    CHECK(std::abs(s.squared_norm() - 1.0) < 1e-12);
    CHECK(off_parity_mass(s) == 0.0);
  }
}

TEST_CASE("quarter walk, literal: first step doubles the norm, exact exits") {
  cplx ct = std::polar(1.0, 0.4);
  WalkSpec spec = quarter_spec(Mode::Literal, Boundary::Slide, ct);
  std::vector<StepAudit> audits;
  StateVector s = evolve_reference(spec, 1, &audits);
  REQUIRE(audits.size() == 1);
  CHECK(audits[0].norm_sq_before == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(audits[0].norm_sq_after == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(site_amp(s, {0, 1, 0}, CH_R, 4) - ct) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, 1}, CH_U, 4) - ct) < 1e-14);
}

TEST_CASE("quarter walk, literal, slide wall: exact t=2 amplitudes") {
  // hand-expanded: coin column Right at (1,0) is (1,-1,1,-1)/2, coin column
  // Up at (0,1) is (1,-1,-1,1)/2; the two origin re-entries cancel exactly
  WalkSpec spec = quarter_spec(Mode::Literal);
  StateVector s = evolve_reference(spec, 2);
  CHECK(s.amp.count(origin_key()) == 0);  // 1/2 - 1/2 pruned away
  CHECK(std::abs(site_amp(s, {0, 2, 0}, CH_R, 4) - cplx{-0.5, 0.0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 2, 0}, CH_U, 4) - cplx{0.5, 0.0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 1, 1}, CH_R, 4) - cplx{-0.5, 0.0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 1, 1}, CH_U, 4) - cplx{-0.5, 0.0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, 2}, CH_R, 4) - cplx{0.5, 0.0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, 2}, CH_U, 4) - cplx{0.5, 0.0}) < 1e-14);
  CHECK(std::abs(s.squared_norm() - 1.5) < 1e-14);
  CHECK(off_parity_mass(s) == 0.0);
}

TEST_CASE("quarter walk, literal, stay-flip wall: t=2 puts mass off parity") {
  WalkSpec spec = quarter_spec(Mode::Literal, Boundary::StayFlip);
  StateVector s = evolve_reference(spec, 2);
  CHECK(std::abs(site_amp(s, {0, 1, 0}, CH_U, 4) - cplx{0.5, 0.0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, 1}, CH_R, 4) - cplx{0.5, 0.0}) < 1e-14);
  CHECK(off_parity_mass(s) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("quarter walk, unitarized: exact t=2 state and unit norm") {
  WalkSpec spec = quarter_spec(Mode::Unitarized);
  StateVector s = evolve_reference(spec, 2);
  Eigen::VectorXcd o = s.at_or_zero(origin_key(), 2);
  CHECK(std::abs(o[0] - cplx{r2 / 2.0, 0.0}) < 1e-14);
  CHECK(std::abs(o[1] - cplx{-r2 / 2.0, 0.0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 2, 0}, CH_R, 4) + r2 / 2.0) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 2, 0}, CH_U, 4) - r2 / 2.0) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, 2}, CH_R, 4) - r2 / 2.0) < 1e-14);
  CHECK(std::abs(s.squared_norm() - 1.0) < 1e-14);
}

TEST_CASE("joined(1) unitarized spreads the first step half/half") {
  WalkSpec spec =
      build_walk(Model::Joined, 1, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(1), Mode::Unitarized,
                 Boundary::Slide, unit_origin(1));
  DistributionTable d = distribution(evolve_reference(spec, 1));
  CHECK(d.size() == 2);
  CHECK(d[SiteKey{0, 1, 0}] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d[SiteKey{0, 0, 1}] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("joined(2) unitarized from psi=(1,0): first step exits on copy 1") {
  WalkSpec spec =
      build_walk(Model::Joined, 2, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(2), Mode::Unitarized,
                 Boundary::Slide, unit_origin(2, 0));
  StateVector s = evolve_reference(spec, 1);
  // G_4 on (1,1,0,0)/sqrt2 over (eps0H, eps1H, eps0V, eps1V)... the H half is
  // psi/sqrt2 = (r2, 0), V half (r2, 0); output hits labels 1 and 3 only
  CHECK(std::abs(site_amp(s, {1, 1, 0}, CH_R, 4) - r2) < 1e-14);
  CHECK(std::abs(site_amp(s, {1, 0, 1}, CH_U, 4) - r2) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 1, 0}, CH_R, 4)) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, 1}, CH_U, 4)) < 1e-14);
  CHECK(std::abs(s.squared_norm() - 1.0) < 1e-14);
}

TEST_CASE("joined(3) literal first step carries the grover column") {
  WalkSpec spec =
      build_walk(Model::Joined, 3, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(3), Mode::Literal,
                 Boundary::Slide, unit_origin(3, 0));
  std::vector<StepAudit> audits;
  StateVector s = evolve_reference(spec, 1, &audits);
  CHECK(audits[0].norm_sq_after == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(site_amp(s, {0, 1, 0}, CH_R, 4) - cplx{-1.0 / 3.0, 0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {1, 1, 0}, CH_R, 4) - cplx{2.0 / 3.0, 0}) < 1e-14);
  CHECK(std::abs(site_amp(s, {2, 0, 1}, CH_U, 4) - cplx{2.0 / 3.0, 0}) < 1e-14);
}

TEST_CASE("unitarized walks conserve norm for random coins, all models") {
  for (std::uint64_t seed : {21u, 22u}) {
    CoinParams coin = CoinParams::random(seed, std::polar(1.0, 0.7));
    for (int k : {1, 2, 3}) {
      WalkSpec spec = build_walk(Model::Joined, k, coin,
                                 ReducedCoinParams::defaults(k, coin.ctilde),
                                 Mode::Unitarized, Boundary::Slide,
                                 Eigen::VectorXcd::Ones(k) / std::sqrt(double(k)));
      std::vector<StepAudit> audits;
      StateVector s = evolve_reference(spec, 41, &audits);
      CHECK(std::abs(s.squared_norm() - 1.0) < 1e-12);
      for (const auto& a : audits)
        CHECK(std::abs(a.norm_sq_after - a.norm_sq_before) < 1e-13);
      CHECK(off_parity_mass(s) == 0.0);
    }
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(16);
    e1[1] = 1.0;
    WalkSpec rs = build_walk(Model::ReducedStar, 3, coin,
                             ReducedCoinParams::defaults(3, coin.ctilde),
                             Mode::Unitarized, Boundary::Slide, e1);
    StateVector s = evolve_reference(rs, 41);
    CHECK(std::abs(s.squared_norm() - 1.0) < 1e-12);
    CHECK(off_parity_mass(s) == 0.0);
  }
}

TEST_CASE("channel walk bulk step keeps the channel and applies one coin row") {
  StateVector init;
  init.time = 0;
  init.add(SiteKey{0, 2, 3}, 4 * 2 + CH_R, cplx{1.0, 0.0}, 16);
  WalkSpec spec;
  spec.model = Model::ReducedStar;
  spec.coin = CoinParams::hadamard();
  spec.reduced = ReducedCoinParams::defaults(2);
  spec.mode = Mode::Literal;
  spec.initial = init;
  StateVector s = step_reference(spec, init);
  // hadamard: ab=1/2, ad=-1/2, bc=1/2, cd=-1/2 along (L,R,D,U) targets
  CHECK(std::abs(site_amp(s, {0, 1, 3}, 4 * 2 + CH_L, 16) - 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 3, 3}, 4 * 2 + CH_R, 16) + 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 2, 2}, 4 * 2 + CH_D, 16) - 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 2, 4}, 4 * 2 + CH_U, 16) + 0.5) < 1e-14);
  for (const auto& [site, block] : s.amp)
    for (int m = 0; m < 4; ++m)
      if (m != 2) CHECK(block.segment<4>(4 * m).norm() == 0.0);
}

TEST_CASE("channel walk origin step emits the origin-coin columns twice") {
  cplx ct = std::polar(1.0, 0.2);
  ReducedCoinParams rp = ReducedCoinParams::defaults(3, ct);
  Eigen::Matrix4cd star = origin_coin_star(rp);
  for (int m = 0; m < 4; ++m) {
    StateVector init;
    init.time = 0;
    init.add(origin_key(), m, cplx{1.0, 0.0}, 4);
    WalkSpec spec;
    spec.model = Model::ReducedStar;
    spec.coin = CoinParams::hadamard(ct);
    spec.reduced = rp;
    spec.mode = Mode::Literal;
    spec.initial = init;
    StateVector s = step_reference(spec, init);
    for (int mm = 0; mm < 4; ++mm) {
      cplx want = ct * star(mm, m);
      CHECK(std::abs(site_amp(s, {0, 1, 0}, 4 * mm + CH_R, 16) - want) < 1e-13);
      CHECK(std::abs(site_amp(s, {0, 0, 1}, 4 * mm + CH_U, 16) - want) < 1e-13);
    }
  }
}

TEST_CASE("quarter and joined(1) agree site by site") {
  WalkSpec q = quarter_spec(Mode::Literal);
  WalkSpec j = build_walk(Model::Joined, 1, CoinParams::hadamard(),
                          ReducedCoinParams::defaults(1), Mode::Literal,
                          Boundary::Slide, unit_origin(1));
  CHECK(max_site_deviation(evolve_reference(q, 20), evolve_reference(j, 20)) ==
        0.0);
}

TEST_CASE("wall rule is injective on a 20x20 window and isometric in-engine") {
  // rule-level check: targets of all bulk and wall moves collide nowhere
  std::map<std::tuple<int, int, int>, int> hits;
  auto mark = [&hits](int x, int y, int slot) { ++hits[{x, y, slot}]; };
  for (int x = 0; x <= 20; ++x)
    for (int y = 0; y <= 20; ++y) {
      if (x + y == 0) continue;
      // L
      if (x == 1 && y == 0)
        ;  // origin entry, tracked separately below
      else if (x == 0)
        mark(0, y + 1, CH_R);
      else
        mark(x - 1, y, CH_L);
      // R
      mark(x + 1, y, CH_R);
      // D
      if (x == 0 && y == 1)
        ;
      else if (y == 0)
        mark(x + 1, 0, CH_U);
      else
        mark(x, y - 1, CH_D);
      // U
      mark(x, y + 1, CH_U);
    }
  mark(1, 0, CH_R);  // origin exits
  mark(0, 1, CH_U);
  for (const auto& [key, n] : hits) CHECK(n == 1);

  // engine-level witness: a unitarized step on a dense random window state
  // preserves the norm to machine precision
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StateVector init;
  init.time = 0;
  for (int x = 0; x <= 12; ++x)
    for (int y = 0; y + x <= 12; ++y) {
      if (x + y == 0) continue;
      for (int slot = 0; slot < 4; ++slot)
        init.add(SiteKey{0, x, y}, slot, cplx{u(rng), u(rng)}, 4);
    }
  init.add(origin_key(), 0, cplx{u(rng), u(rng)}, 2);
  init.add(origin_key(), 1, cplx{u(rng), u(rng)}, 2);
  double n0 = init.squared_norm();
  WalkSpec spec = quarter_spec(Mode::Unitarized);
  spec.initial = init;
  StateVector s = step_reference(spec, init);
  CHECK(std::abs(s.squared_norm() - n0) < 1e-12 * n0);
}

TEST_CASE("dense engine matches the sparse reference across configurations") {
  struct Case {
    Model model;
    int k;
    Mode mode;
    Boundary boundary;
  };
  std::vector<Case> cases = {
      {Model::Plane, 1, Mode::Literal, Boundary::Slide},
      {Model::Quarter, 1, Mode::Literal, Boundary::Slide},
      {Model::Quarter, 1, Mode::Literal, Boundary::StayFlip},
      {Model::Quarter, 1, Mode::Unitarized, Boundary::Slide},
      {Model::Joined, 3, Mode::Literal, Boundary::Slide},
      {Model::Joined, 3, Mode::Unitarized, Boundary::Slide},
      {Model::Joined, 2, Mode::Unitarized, Boundary::StayFlip},
      {Model::ReducedStar, 2, Mode::Literal, Boundary::Slide},
      {Model::ReducedStar, 3, Mode::Unitarized, Boundary::Slide},
  };
  CoinParams coin = CoinParams::random(5, std::polar(1.0, 0.3));
  for (const Case& c : cases) {
    Eigen::VectorXcd psi;
    if (c.model == Model::Plane) {
      psi = Eigen::VectorXcd::Zero(4);
      psi[CH_R] = cplx{0.6, 0.0};
      psi[CH_U] = cplx{0.0, 0.8};
    } else if (c.model == Model::ReducedStar) {
      psi = Eigen::VectorXcd::Zero(16);
      psi[1] = 1.0;
    } else {
      psi = Eigen::VectorXcd::Ones(c.k) / std::sqrt(double(c.k));
    }
    WalkSpec spec =
        build_walk(c.model, c.k, coin,
                   ReducedCoinParams::defaults(c.k, coin.ctilde), c.mode,
                   c.boundary, psi);
    StateVector ref = evolve_reference(spec, 25);
    DenseWalker dense(spec, 30);
    dense.run_to(25);
    CHECK(max_site_deviation(ref, dense.snapshot(1e-14)) < 1e-12);
  }
}

TEST_CASE("dense engine output does not depend on the thread count") {
  WalkSpec spec =
      build_walk(Model::Joined, 2, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(2), Mode::Unitarized,
                 Boundary::Slide, unit_origin(2));
  int max_threads = omp_get_max_threads();
  omp_set_num_threads(1);
  DenseWalker one(spec, 80);
  one.run_to(80);
  omp_set_num_threads(max_threads);
  DenseWalker many(spec, 80);
  many.run_to(80);
  CHECK(max_site_deviation(one.snapshot(), many.snapshot()) == 0.0);
  REQUIRE(one.audits().size() == many.audits().size());
  for (size_t i = 0; i < one.audits().size(); ++i) {
    CHECK(one.audits()[i].norm_sq_before == many.audits()[i].norm_sq_before);
    CHECK(one.audits()[i].norm_sq_after == many.audits()[i].norm_sq_after);
  }
}

TEST_CASE("audit trail of the reference engine is bit-reproducible") {
  WalkSpec spec =
      build_walk(Model::Joined, 2, CoinParams::random(77),
                 ReducedCoinParams::defaults(2), Mode::Literal,
                 Boundary::Slide, unit_origin(2));
  std::vector<StepAudit> a, b;
  evolve_reference(spec, 30, &a);
  evolve_reference(spec, 30, &b);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].norm_sq_before == b[i].norm_sq_before);
    CHECK(a[i].norm_sq_after == b[i].norm_sq_after);
  }
}

TEST_CASE("off-convention start site evolves by the plain bulk rules") {
  StateVector s0 = reduced_star_initial_state(ReducedStart::YSiteVariant);
  WalkSpec spec;
  spec.model = Model::ReducedStar;
  spec.coin = CoinParams::hadamard();
  spec.reduced = ReducedCoinParams::defaults(2);
  spec.initial = s0;
  StateVector s = step_reference(spec, s0);
  // from (0,1) Right: L slides to (0,2) Right, D enters the origin
  CHECK(std::abs(site_amp(s, {0, 0, 2}, CH_R, 16) - 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 1, 1}, CH_R, 16) + 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, origin_key(), 0, 4) - 0.5) < 1e-14);
  CHECK(std::abs(site_amp(s, {0, 0, 2}, CH_U, 16) + 0.5) < 1e-14);
}

TEST_CASE("build_walk rejects malformed requests") {
  CHECK_THROWS_AS(build_walk(Model::Joined, 2, CoinParams::hadamard(),
                             ReducedCoinParams::defaults(2), Mode::Literal,
                             Boundary::Slide, Eigen::VectorXcd::Ones(2)),
                  std::invalid_argument);  // norm sqrt(2)
  CHECK_THROWS_AS(build_walk(Model::Joined, 3, CoinParams::hadamard(),
                             ReducedCoinParams::defaults(3), Mode::Literal,
                             Boundary::Slide, unit_origin(2)),
                  std::invalid_argument);  // wrong length
  CHECK_THROWS_AS(build_walk(Model::ReducedStar, 2, CoinParams::hadamard(),
                             ReducedCoinParams::defaults(2, std::polar(1.0, 1.0)),
                             Mode::Literal, Boundary::Slide,
                             unit_origin(16, 1)),
                  std::invalid_argument);  // phase mismatch
  CHECK_THROWS_AS(build_walk(Model::Joined, 0, CoinParams::hadamard(),
                             ReducedCoinParams::defaults(1), Mode::Literal,
                             Boundary::Slide, unit_origin(1)),
                  std::invalid_argument);
}

TEST_CASE("dense engine guards its resources") {
  WalkSpec spec =
      build_walk(Model::Joined, 2, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(2), Mode::Unitarized,
                 Boundary::Slide, unit_origin(2));
  CHECK_THROWS_AS(DenseWalker(spec, 50000), resource_guard_error);
  DenseWalker w(spec, 16);
  CHECK_THROWS_AS(w.run_to(17), std::invalid_argument);
}

TEST_CASE("literal norm trace is model-consistent over longer runs") {
  // the joined literal walk keeps a finite norm trace; spot-check decay
  // between consecutive audits stays within the doubling/collapse envelope
  WalkSpec spec =
      build_walk(Model::Joined, 2, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(2), Mode::Literal,
                 Boundary::Slide, unit_origin(2));
  std::vector<StepAudit> audits;
  StateVector s = evolve_reference(spec, 60, &audits);
  for (const auto& a : audits) {
    CHECK(a.norm_sq_after <= 2.0 * a.norm_sq_before + 1e-12);
    CHECK(a.norm_sq_after > 0.0);
  }
  CHECK(off_parity_mass(s) == 0.0);
}
