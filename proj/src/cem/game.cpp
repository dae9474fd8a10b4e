#include "dlmath/cem/game.hpp"

#include <algorithm>

#include "dlmath/cem/objective.hpp"

namespace dlmath::cem {

GameState GameState::at_step(std::span<const std::uint8_t> actions, std::size_t step) {
  const std::size_t e = actions.size();
  if (step >= e) throw std::out_of_range("game step out of range");
  GameState s{graph::EdgeBits(e, 0), graph::EdgeBits(e, 0)};
  std::copy(actions.begin(), actions.begin() + static_cast<std::ptrdiff_t>(step), s.taken.begin());
  s.current[step] = 1;
  return s;
}

std::size_t GameState::current_index() const {
  if (current.size() != taken.size()) throw std::invalid_argument("game state: vector lengths differ");
  std::size_t index = current.size();
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (current[i] > 1) throw std::invalid_argument("game state: current must be 0/1");
    if (current[i] == 0) continue;
    if (index != current.size()) throw std::invalid_argument("game state: current has more than one 1");
    index = i;
  }
  if (index == current.size()) throw std::invalid_argument("game state: current has no 1");
  return index;
}

void GameState::validate() const {
  const std::size_t idx = current_index();
  for (std::size_t i = 0; i < taken.size(); ++i) {
    if (taken[i] > 1) throw std::invalid_argument("game state: taken must be 0/1");
    if (taken[i] && i >= idx)
      throw std::invalid_argument("game state: edge " + std::to_string(i) + " taken before being offered");
  }
}

nn::Vec encode_state(const GameState& s) {
  s.validate();
  const auto e = static_cast<Eigen::Index>(s.taken.size());
  nn::Vec v(2 * e);
  for (Eigen::Index i = 0; i < e; ++i) {
    v[i] = s.taken[static_cast<std::size_t>(i)];
    v[e + i] = s.current[static_cast<std::size_t>(i)];
  }
  return v;
}

std::vector<GameState> Episode::states() const {
  std::vector<GameState> out;
  out.reserve(actions.size());
  for (std::size_t t = 0; t < actions.size(); ++t) out.push_back(state(t));
  return out;
}

std::vector<Episode> play_block(const nn::Mlp& policy, std::size_t n, const Objective& objective,
                                std::size_t first_index, std::span<std::mt19937_64> rngs) {
  const std::size_t e = graph::EdgeOrder::edge_count(n);
  if (policy.input_dim() != 2 * e || policy.output_dim() != 1)
    throw nn::ShapeError("policy dims do not match n=" + std::to_string(n));
  const auto batch = static_cast<Eigen::Index>(rngs.size());
  const auto ee = static_cast<Eigen::Index>(e);

  std::vector<Episode> episodes(rngs.size());
  for (std::size_t b = 0; b < rngs.size(); ++b) {
    episodes[b].index = first_index + b;
    episodes[b].actions.assign(e, 0);
  }
  // Row b holds encode_state for episode b; updated in place each step.
  nn::Mat x = nn::Mat::Zero(batch, 2 * ee);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = 0; t < e; ++t) {
    const auto tt = static_cast<Eigen::Index>(t);
    if (t > 0) x.col(ee + tt - 1).setZero();
    x.col(ee + tt).setOnes();
    const nn::Mat logits = nn::forward(policy, x);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const double p = nn::sigmoid(logits(b, 0));
      const bool accept = unit(rngs[static_cast<std::size_t>(b)]) < p;
      episodes[static_cast<std::size_t>(b)].actions[t] = accept;
      x(b, tt) = accept ? 1.0 : 0.0;
    }
  }
  for (auto& ep : episodes) {
    ep.graph = graph::Graph::from_bits(n, ep.actions);
    ep.score = objective.score(ep.graph);
  }
  return episodes;
}

Episode play_episode(const nn::Mlp& policy, std::size_t n, const Objective& objective, std::mt19937_64& rng) {
  auto episodes = play_block(policy, n, objective, 0, std::span<std::mt19937_64>(&rng, 1));
  return std::move(episodes.front());
}

}  // namespace dlmath::cem
