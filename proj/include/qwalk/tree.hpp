#pragma once
// Coined walk on a pair of k-regular trees (free products of k order-2
// generators): positions are pairs of reduced words, the coin space is the
// k*k grid of generator pairs, and one step prepends the coin's generator
// pair to both words, cancelling against the outermost letters.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qwalk/state.hpp"

namespace qwalk {

// reduced word over generators 0..k-1; back() is the outermost letter
using Word = std::vector<std::uint8_t>;

// group multiplication by one generator: cancels or extends
Word prepend_reduced(Word w, std::uint8_t letter);

struct TreeWalkSpec {
  int k{2};
  cplx ctilde{1.0, 0.0};
  // refuse to materialise more stored amplitudes than this
  long max_amplitudes{40'000'000};
  // hard depth/arity caps; beyond them the state count explodes
  int max_k{4};
  long max_t{8};
};

struct TreeState {
  // k x k coin block per word pair; entry (i, j) carries generator pair (i, j)
  std::map<std::pair<Word, Word>, Eigen::MatrixXcd> amp;
  long time{0};
  double squared_norm() const;
};

// product start at the root pair: block = psi_x * psi_y^T
TreeState tree_initial(int k, const Eigen::VectorXcd& psi_x,
                       const Eigen::VectorXcd& psi_y);

TreeState tree_step(const TreeWalkSpec& spec, const TreeState& s);
TreeState tree_evolve(const TreeWalkSpec& spec, const TreeState& start,
                      long t_target);

// Collapse to (copy, |x|, |y|) probabilities: the copy is the outermost
// letter of the x word, falling back to the y word when x is empty; the pair
// of empty words maps to the shared origin key.
DistributionTable project_to_joined(const TreeState& s);

// marginal of word length |x| (axis 0) or |y| (axis 1)
std::map<int, double> length_marginal(const TreeState& s, int axis);

}  // namespace qwalk
