#pragma once
// Sparse walker states keyed by (copy, x, y). The shared gluing origin of the
// quarter-plane family uses copy = kOriginCopy; plane-model sites use copy 0.

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace qwalk {

using cplx = std::complex<double>;

// hard failures of a declared invariant (CLI exit code 1)
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// configured memory/size bound exceeded (CLI exit code 3)
struct resource_guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kOriginCopy = -1;

struct SiteKey {
  int copy{0};
  int x{0};
  int y{0};

  friend bool operator<(const SiteKey& a, const SiteKey& b) {
    if (a.copy != b.copy) return a.copy < b.copy;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  }
  friend bool operator==(const SiteKey& a, const SiteKey& b) {
    return a.copy == b.copy && a.x == b.x && a.y == b.y;
  }
};

inline SiteKey origin_key() { return SiteKey{kOriginCopy, 0, 0}; }

// Block sizes by site kind:
//   plane/joined lattice site: 4 (Left, Right, Down, Up)
//   joined origin:             k literal, 2k unitarized (H half then V half)
//   16-channel lattice site:   16 (channel-major, chirality within)
//   16-channel walk origin:    4 literal (channel), 8 unitarized (H then V)
struct StateVector {
  std::map<SiteKey, Eigen::VectorXcd> amp;
  long time{0};

  double squared_norm() const;
  void prune(double tol = 1e-14);
  void add(const SiteKey& site, int index, cplx value, int block_dim);
  Eigen::VectorXcd at_or_zero(const SiteKey& site, int dim) const;
};

// max over sites of the euclidean norm of the per-site amplitude difference
double max_site_deviation(const StateVector& a, const StateVector& b);

using DistributionTable = std::map<SiteKey, double>;

double total_mass(const DistributionTable& table);

}  // namespace qwalk
