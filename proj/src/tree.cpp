#include "qwalk/tree.hpp"

#include "qwalk/coin.hpp"

namespace qwalk {

Word prepend_reduced(Word w, std::uint8_t letter) {
  if (!w.empty() && w.back() == letter)
    w.pop_back();
  else
    w.push_back(letter);
  return w;
}

double TreeState::squared_norm() const {
  double s = 0.0;
  for (const auto& [key, block] : amp) s += block.squaredNorm();
  return s;
}

TreeState tree_initial(int k, const Eigen::VectorXcd& psi_x,
                       const Eigen::VectorXcd& psi_y) {
  if (psi_x.size() != k || psi_y.size() != k)
    throw std::invalid_argument("tree coin state needs k amplitudes per axis");
  TreeState s;
  s.amp[{Word{}, Word{}}] = psi_x * psi_y.transpose();
  return s;
}

TreeState tree_step(const TreeWalkSpec& spec, const TreeState& s) {
  if (spec.k < 1 || spec.k > spec.max_k)
    throw resource_guard_error("tree walk capped at k <= 4");
  const Eigen::MatrixXcd G = grover(spec.k);
  TreeState out;
  out.time = s.time + 1;
  const long block_amps = static_cast<long>(spec.k) * spec.k;
  for (const auto& [key, block] : s.amp) {
    // grover is real symmetric, so the pair coin acts as G * block * G
    Eigen::MatrixXcd mixed = G * block * G;
    if (key.first.empty() && key.second.empty()) mixed *= spec.ctilde;
    for (int i = 0; i < spec.k; ++i) {
      Word nx = prepend_reduced(key.first, static_cast<std::uint8_t>(i));
      for (int j = 0; j < spec.k; ++j) {
        if (mixed(i, j) == cplx{0.0, 0.0}) continue;
        Word ny = prepend_reduced(key.second, static_cast<std::uint8_t>(j));
        auto [it, inserted] = out.amp.try_emplace(
            std::pair<Word, Word>{nx, ny},
            Eigen::MatrixXcd::Zero(spec.k, spec.k));
        if (inserted &&
            static_cast<long>(out.amp.size()) * block_amps >
                spec.max_amplitudes)
          throw resource_guard_error("tree state exceeds the amplitude guard");
        it->second(i, j) += mixed(i, j);
      }
    }
  }
  return out;
}

TreeState tree_evolve(const TreeWalkSpec& spec, const TreeState& start,
                      long t_target) {
  if (t_target > spec.max_t)
    throw resource_guard_error("tree walk capped at t <= 8");
  TreeState s = start;
  while (s.time < t_target) s = tree_step(spec, s);
  return s;
}

DistributionTable project_to_joined(const TreeState& s) {
  DistributionTable table;
  for (const auto& [key, block] : s.amp) {
    const Word& wx = key.first;
    const Word& wy = key.second;
    SiteKey site;
    if (wx.empty() && wy.empty()) {
      site = origin_key();
    } else {
      site.copy = static_cast<int>(wx.empty() ? wy.back() : wx.back());
      site.x = static_cast<int>(wx.size());
      site.y = static_cast<int>(wy.size());
    }
    table[site] += block.squaredNorm();
  }
  return table;
}

std::map<int, double> length_marginal(const TreeState& s, int axis) {
  std::map<int, double> m;
  for (const auto& [key, block] : s.amp) {
    int len = static_cast<int>(axis == 0 ? key.first.size()
                                         : key.second.size());
    m[len] += block.squaredNorm();
  }
  return m;
}

}  // namespace qwalk
