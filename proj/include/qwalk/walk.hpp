#pragma once
// Discrete-time coined walks on the plane, the quarter plane, and k glued
// quarter planes, plus the 16-dimensional channel walk used by the reduction
// machinery. Two engines share the same update rule: a sparse serial
// reference (step_reference) and a dense OpenMP gather kernel (DenseWalker).

#include <optional>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

enum class Model { Plane, Quarter, Joined, ReducedStar };
enum class Mode { Literal, Unitarized };
// Completion of the walk at the two boundary rays, where the printed shift
// rules are silent. Slide moves a wall-bound component one site outward along
// the wall (keeps the support parity x+y = t mod 2 and stays injective);
// StayFlip keeps it in place with the chirality reversed (breaks parity).
enum class Boundary { Slide, StayFlip };

struct StepAudit {
  double norm_sq_before{0.0};
  double norm_sq_after{0.0};
};

struct WalkSpec {
  Model model{Model::Joined};
  int k{1};
  CoinParams coin{CoinParams::hadamard()};
  ReducedCoinParams reduced{ReducedCoinParams::defaults(1)};
  Mode mode{Mode::Literal};
  Boundary boundary{Boundary::Slide};
  double prune_tol{1e-14};
  // replaces the tensor-square bulk coin when set (used by comparisons whose
  // 4x4 lattice coin has zero entries and so cannot come from CoinParams)
  std::optional<Eigen::Matrix4cd> bulk_coin;
  StateVector initial;

  bool has_origin() const { return model != Model::Plane; }
  // block length stored at the shared origin (0 for the plane)
  int origin_dim() const;
  // block length at a lattice site (4, or 16 for the channel walk)
  int site_dim() const;
  // coin applied to the origin block during one step
  Eigen::MatrixXcd origin_coin() const;
};

// Validates parameters and the initial condition and assembles a WalkSpec.
//   Plane:       initial_psi is the 4 chirality amplitudes at (0,0).
//   Quarter:     k is forced to 1; initial_psi is the single origin amplitude.
//   Joined:      initial_psi has k entries, one per glued copy.
//   ReducedStar: initial_psi has 16 entries, placed at site (1,0); the
//                canonical start is e_1 (channel 0, chirality Right).
// Unit norm is required to 1e-12. Unitarized joined walks spread psi over the
// doubled origin labels as psi/sqrt(2) on each of the H and V halves.
WalkSpec build_walk(Model model, int k, const CoinParams& coin,
                    const ReducedCoinParams& reduced, Mode mode,
                    Boundary boundary, const Eigen::VectorXcd& initial_psi);

// Handy starting states for the 16-dimensional channel walk (time = 1).
// XBranch:      |channel 0, (1,0), Right>                      (canonical)
// YBranch:      |channel 0, (0,1), Up>
// BothBranches: sum of the two, unnormalised (squared norm 2), mirroring the
//               first step of a joined walk started from a unit vector.
// YSiteVariant: |channel 0, (0,1), Right>, the off-convention placement kept
//               selectable for comparison.
enum class ReducedStart { XBranch, YBranch, BothBranches, YSiteVariant };
StateVector reduced_star_initial_state(ReducedStart which);

// One coin+shift update of the sparse state. Serial, deterministic.
StateVector step_reference(const WalkSpec& spec, const StateVector& s,
                           StepAudit* audit = nullptr);
// Evolve spec.initial to time t_target with step_reference.
StateVector evolve_reference(const WalkSpec& spec, long t_target,
                             std::vector<StepAudit>* audits = nullptr);

// Site probabilities (squared block norms); origin mass sits at origin_key().
DistributionTable distribution(const StateVector& s);

// Dense two-buffer gather engine. Lattice storage covers x+y <= horizon+1
// (a centred square of radius horizon for the plane). Gather order per target
// site is fixed, so results are bit-identical for any OpenMP thread count.
class DenseWalker {
 public:
  DenseWalker(const WalkSpec& spec, long horizon);

  void step();
  void run_to(long t_target);
  long time() const { return t_; }
  double squared_norm() const;
  StateVector snapshot(double prune_tol = 0.0) const;
  DistributionTable distribution() const;
  const std::vector<StepAudit>& audits() const { return audits_; }

 private:
  WalkSpec spec_;
  long horizon_{0};
  long t_{0};
  int nrows_{0};       // quarter-plane rows (horizon+2) or plane side length
  int plane_off_{0};   // coordinate offset for the plane layout
  int block_{4};
  std::vector<long> row_off_;
  std::vector<cplx> cur_, nxt_;
  Eigen::VectorXcd origin_cur_, origin_nxt_;
  std::vector<StepAudit> audits_;

  long site_index(int x, int y) const;
  bool in_lattice(int x, int y) const;
  void coin_pass();
  void shift_pass();
};

}  // namespace qwalk
