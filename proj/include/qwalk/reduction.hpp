#pragma once
// Relations between three views of the glued-plane walk: the literal walk on
// k quarter planes, its k-fold enlargement with an inert copy label, and the
// 16-dimensional channel walk. Also extracts per-copy event probabilities
// from both the literal walk and the channel machinery so the two routes can
// be compared site by site.

#include <vector>

#include "qwalk/walk.hpp"

namespace qwalk {

// coined start vector psi' = ctilde * G_k * psi
Eigen::VectorXcd coined_initial(const Eigen::VectorXcd& psi, cplx ctilde);

enum class LiftBranch { XBranch, YBranch, Both };

// k independent literal walks, one per inert label j; label j starts on its
// own copy at |h_j(1,0), Right> and/or |h_j(0,1), Up> with unit coefficients
// (time 1, squared norm k per branch).
struct EnlargedState {
  std::vector<StateVector> copies;
  long time{1};
  double squared_norm() const;
};

EnlargedState lift_initial(int k, LiftBranch branch);
EnlargedState enlarged_evolve(const WalkSpec& spec, EnlargedState s,
                              long t_target);

// contraction over the inert label: sum_j psi_prime[j] * copies[j]
StateVector lambda_contract(const EnlargedState& s,
                            const Eigen::VectorXcd& psi_prime);

// max site deviation between the direct literal walk from psi and the
// contracted enlarged walk at time t
double lemma2_deviation(int k, const CoinParams& coin,
                        const Eigen::VectorXcd& psi, long t,
                        LiftBranch branch);

// Per-copy site probabilities keyed {r, x, y}; {r, 0, 0} carries the shared
// origin as seen from copy r (label component r, both origin labels of a
// copy in unitarized mode).
DistributionTable event_probability_direct(const WalkSpec& joined_spec,
                                           long t);
// Same extraction from an already-evolved snapshot of the walk.
DistributionTable event_probability_snapshot(const WalkSpec& spec,
                                             const StateVector& s);

// Same table from the 16-channel walk: evolve the two-branch channel start,
// then contract each site block with (psi'_r, psi'_r, S_r, S_r) over the
// channel index, S_r = sum of psi'_j for j != r.
DistributionTable event_probability_reduced(const CoinParams& coin,
                                            const ReducedCoinParams& rp,
                                            const Eigen::VectorXcd& psi,
                                            long t);

// max absolute probability difference over the union of keys
double event_table_deviation(const DistributionTable& a,
                             const DistributionTable& b);

}  // namespace qwalk
