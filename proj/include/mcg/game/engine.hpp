#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcg/game/cards.hpp"
#include "mcg/game/state.hpp"
#include "mcg/util/rng.hpp"

namespace mcg {

// Deck validation + seeded Fisher-Yates shuffle + opening draws.
// Shuffle contract (language independent, relied on by the reference-shuffle
// test): a SplitMix64 generator is seeded with `seed`; player 0's deck is
// shuffled first, then player 1's with the same generator, each with
// Fisher-Yates from the top index down:
//     for i = 29 .. 1:  j = rng.next_below(i + 1);  swap(deck[i], deck[j])
// The next card drawn is deck[deck_size - 1]. Player 0 then draws 3 cards,
// player 1 draws 4 (second-player compensation), player 0 starts turn 1 with
// 1/1 mana. Throws InvalidDeckError on wrong size, unknown id or more than
// two copies of an id.
GameState new_game(const Rules& rules, std::span<const uint8_t> deck0,
                   std::span<const uint8_t> deck1, uint64_t seed);

// Enumerates every legal action, ascending by action index. Never empty for
// an in-progress state: EndTurn is always legal outside a pending choice and
// pending choices always have at least one completion. Throws GameOverError
// on a terminal state.
void legal_actions(const Rules& rules, const GameState& s, ActionList& out);
ActionList legal_actions(const Rules& rules, const GameState& s);

bool is_legal(const Rules& rules, const GameState& s, Action a);

// Pure successor function; validates and throws IllegalActionError.
GameState apply_action(const Rules& rules, const GameState& s, Action a);

// In-place variant for hot loops. Precondition: is_legal(rules, s, a).
void step_unchecked(const Rules& rules, GameState& s, Action a);

// Uniform random playout to a terminal state; returns that outcome. The
// caller owns the generator (fork substreams per worker). Returns the
// outcome unchanged if `s` is already terminal.
Outcome playout_random(const Rules& rules, GameState s, SplitMix64& rng);

// Mirror image of the state: the two seats swap, including the active-player
// flag and the outcome. Involution; used by encoder symmetry checks.
GameState swap_players(const GameState& s);

namespace detail {
// Recomputes `outcome` from hero healths. If both heroes are at or below
// zero after the same action, the active player wins (documented tie-break).
void resolve_outcome(GameState& s);

// Draws one card for `player`, applying fatigue and overdraw-burn rules.
void draw_card(const Rules& rules, GameState& s, int player);
}  // namespace detail

// Order-independent FNV-1a hash of a deck list (identifies the deck in
// dataset records regardless of shuffle).
uint64_t deck_hash(std::span<const uint8_t> deck);

}  // namespace mcg
