#include "qwalk/reduction.hpp"

namespace qwalk {

Eigen::VectorXcd coined_initial(const Eigen::VectorXcd& psi, cplx ctilde) {
  return ctilde * (grover(static_cast<int>(psi.size())) * psi);
}

double EnlargedState::squared_norm() const {
  double s = 0.0;
  for (const StateVector& c : copies) s += c.squared_norm();
  return s;
}

EnlargedState lift_initial(int k, LiftBranch branch) {
  if (k < 1 || k > 64) throw std::invalid_argument("k out of range");
  EnlargedState e;
  e.time = 1;
  e.copies.resize(k);
  for (int j = 0; j < k; ++j) {
    StateVector& s = e.copies[j];
    s.time = 1;
    if (branch != LiftBranch::YBranch)
      s.add(SiteKey{j, 1, 0}, CH_R, cplx{1.0, 0.0}, 4);
    if (branch != LiftBranch::XBranch)
      s.add(SiteKey{j, 0, 1}, CH_U, cplx{1.0, 0.0}, 4);
  }
  return e;
}

EnlargedState enlarged_evolve(const WalkSpec& spec, EnlargedState s,
                              long t_target) {
  for (StateVector& c : s.copies)
    while (c.time < t_target) c = step_reference(spec, c);
  s.time = t_target;
  return s;
}

StateVector lambda_contract(const EnlargedState& s,
                            const Eigen::VectorXcd& psi_prime) {
  if (psi_prime.size() != static_cast<long>(s.copies.size()))
    throw std::invalid_argument("contraction vector has wrong length");
  StateVector out;
  out.time = s.time;
  for (size_t j = 0; j < s.copies.size(); ++j) {
    for (const auto& [site, block] : s.copies[j].amp) {
      auto [it, inserted] = out.amp.try_emplace(
          site, Eigen::VectorXcd::Zero(block.size()));
      it->second += psi_prime[static_cast<long>(j)] * block;
    }
  }
  out.prune(1e-300);
  return out;
}

double lemma2_deviation(int k, const CoinParams& coin,
                        const Eigen::VectorXcd& psi, long t,
                        LiftBranch branch) {
  WalkSpec spec = build_walk(Model::Joined, k, coin,
                             ReducedCoinParams::defaults(k, coin.ctilde),
                             Mode::Literal, Boundary::Slide, psi);
  StateVector direct = evolve_reference(spec, t);
  EnlargedState lifted = enlarged_evolve(spec, lift_initial(k, branch), t);
  StateVector contracted =
      lambda_contract(lifted, coined_initial(psi, coin.ctilde));
  return max_site_deviation(direct, contracted);
}

DistributionTable event_probability_direct(const WalkSpec& joined_spec,
                                           long t) {
  return event_probability_snapshot(joined_spec,
                                    evolve_reference(joined_spec, t));
}

DistributionTable event_probability_snapshot(const WalkSpec& spec,
                                             const StateVector& s) {
  if (spec.model != Model::Joined && spec.model != Model::Quarter)
    throw std::invalid_argument("event extraction needs a glued-plane walk");
  const int k = spec.k;
  DistributionTable table;
  for (const auto& [site, block] : s.amp) {
    if (site.copy == kOriginCopy) {
      for (int r = 0; r < k; ++r) {
        double p = std::norm(block[r]);
        if (spec.mode == Mode::Unitarized) p += std::norm(block[k + r]);
        table[SiteKey{r, 0, 0}] = p;
      }
    } else {
      table[site] = block.squaredNorm();
    }
  }
  return table;
}

DistributionTable event_probability_reduced(const CoinParams& coin,
                                            const ReducedCoinParams& rp,
                                            const Eigen::VectorXcd& psi,
                                            long t) {
  WalkSpec spec;
  spec.model = Model::ReducedStar;
  spec.k = rp.k;
  spec.coin = coin;
  spec.reduced = rp;
  spec.mode = Mode::Literal;
  spec.boundary = Boundary::Slide;
  spec.initial = reduced_star_initial_state(ReducedStart::BothBranches);
  StateVector s = spec.initial;
  while (s.time < t) s = step_reference(spec, s);

  const Eigen::VectorXcd psi_prime = coined_initial(psi, coin.ctilde);
  const cplx total = psi_prime.sum();
  DistributionTable table;
  for (int r = 0; r < rp.k; ++r) {
    const cplx own = psi_prime[r];
    const cplx other = total - own;
    // channel order: Own-L, Own-D, Other-R, Other-U
    Eigen::Vector4cd coeff(own, own, other, other);
    for (const auto& [site, block] : s.amp) {
      if (site.copy == kOriginCopy) {
        cplx v = 0.0;
        for (int m = 0; m < 4; ++m) v += coeff[m] * block[m];
        table[SiteKey{r, 0, 0}] = std::norm(v);
      } else {
        Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
        for (int m = 0; m < 4; ++m) v += coeff[m] * block.segment<4>(4 * m);
        table[SiteKey{r, site.x, site.y}] = v.squaredNorm();
      }
    }
  }
  return table;
}

double event_table_deviation(const DistributionTable& a,
                             const DistributionTable& b) {
  double worst = 0.0;
  for (const auto& [site, p] : a) {
    auto it = b.find(site);
    worst = std::max(worst, std::abs(p - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [site, p] : b)
    if (!a.count(site)) worst = std::max(worst, p);
  return worst;
}

}  // namespace qwalk
