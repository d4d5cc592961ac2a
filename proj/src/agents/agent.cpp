#include "mcg/agents/agent.hpp"

#include "mcg/util/errors.hpp"

namespace mcg {

Action RandomAgent::choose(const GameState& s) {
  ActionList actions;
  legal_actions(*rules_, s, actions);
  return actions[static_cast<int>(rng_.next_below(actions.size()))];
}

GameRecord play_game(const Rules& rules, Agent& player0, Agent& player1,
                     std::span<const uint8_t> deck0, std::span<const uint8_t> deck1,
                     uint64_t game_seed, bool keep_trace) {
  GameRecord rec;
  rec.game_seed = game_seed;
  GameState s = new_game(rules, deck0, deck1, game_seed);
  rec.initial = s;
  player0.reset(game_seed, 0);
  player1.reset(game_seed, 1);
  while (s.outcome == Outcome::InProgress) {
    Agent& mover = s.active_player == 0 ? player0 : player1;
    Action a = mover.choose(s);
    if (keep_trace) rec.actions.push_back(a);
    player0.observe(s, a);
    player1.observe(s, a);
    step_unchecked(rules, s, a);
    if (s.turn_number > 1000)
      throw Error("match exceeded 1000 turns; agents or rules are broken");
  }
  rec.outcome = s.outcome;
  rec.final_turn = s.turn_number;
  return rec;
}

}  // namespace mcg
