#include "qwalk/state.hpp"

namespace qwalk {

double StateVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [site, block] : amp) s += block.squaredNorm();
  return s;
}

void StateVector::prune(double tol) {
  for (auto it = amp.begin(); it != amp.end();) {
    if (it->second.lpNorm<Eigen::Infinity>() < tol)
      it = amp.erase(it);
    else
      ++it;
  }
}

void StateVector::add(const SiteKey& site, int index, cplx value, int block_dim) {
  auto [it, inserted] = amp.try_emplace(site, Eigen::VectorXcd::Zero(block_dim));
  if (it->second.size() != block_dim)
    throw invariant_error("mixed block sizes at one site");
  it->second[index] += value;
}

Eigen::VectorXcd StateVector::at_or_zero(const SiteKey& site, int dim) const {
  auto it = amp.find(site);
  if (it == amp.end()) return Eigen::VectorXcd::Zero(dim);
  return it->second;
}

double max_site_deviation(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (const auto& [site, block] : a.amp) {
    auto it = b.amp.find(site);
    double d = (it == b.amp.end()) ? block.norm() : (block - it->second).norm();
    if (it != b.amp.end() && block.size() != it->second.size()) return 1e300;
    worst = std::max(worst, d);
  }
  for (const auto& [site, block] : b.amp) {
    if (a.amp.find(site) == a.amp.end()) worst = std::max(worst, block.norm());
  }
  return worst;
}

double total_mass(const DistributionTable& table) {
  double s = 0.0;
  for (const auto& [site, p] : table) s += p;
  return s;
}

}  // namespace qwalk
