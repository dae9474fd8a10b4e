#pragma once

#include <random>
#include <vector>

#include "dlmath/graph/graph.hpp"
#include "dlmath/nn/mlp.hpp"

namespace dlmath::cem {

class Objective;

/// Position in the edge-selection game: the edges accepted so far and a
/// one-hot marker for the edge on offer. Rejected and not-yet-offered edges
/// are both 0 in `taken`.
struct GameState {
  graph::EdgeBits taken;
  graph::EdgeBits current;

  static GameState at_step(std::span<const std::uint8_t> actions, std::size_t step);

  std::size_t edge_count() const { return taken.size(); }
  /// Index of the offered edge. Throws std::invalid_argument if the state is malformed.
  std::size_t current_index() const;
  /// Throws std::invalid_argument unless current has exactly one 1 and all
  /// taken edges precede it.
  void validate() const;
};

/// taken ++ current, length 2E.
nn::Vec encode_state(const GameState& s);

/// One playthrough. The states are a function of the actions, so they are
/// reconstructed on demand rather than stored.
struct Episode {
  std::size_t index = 0;
  graph::EdgeBits actions;
  graph::Graph graph{1};
  double score = 0.0;

  std::size_t length() const { return actions.size(); }
  GameState state(std::size_t step) const { return GameState::at_step(actions, step); }
  std::vector<GameState> states() const;
};

/// Policy input dimension for n vertices.
inline std::size_t policy_input_dim(std::size_t n) { return 2 * graph::EdgeOrder::edge_count(n); }

/// Offers every edge in order; each is accepted with probability
/// sigmoid(policy(encode_state)).
Episode play_episode(const nn::Mlp& policy, std::size_t n, const Objective& objective, std::mt19937_64& rng);

/// Plays a block of episodes in lockstep, one batched forward pass per step.
/// rngs[i] drives episode first_index + i.
std::vector<Episode> play_block(const nn::Mlp& policy, std::size_t n, const Objective& objective,
                                std::size_t first_index, std::span<std::mt19937_64> rngs);

}  // namespace dlmath::cem
