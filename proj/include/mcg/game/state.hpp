#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mcg/game/cards.hpp"
#include "mcg/util/static_vector.hpp"

namespace mcg {

inline constexpr int kBoardSlots = 7;
inline constexpr int kHandLimit = 10;
inline constexpr int kTargetCount = 16;  // 0..6 own board, 7 own hero,
                                         // 8..14 enemy board, 15 enemy hero

// Global atomic-action enumeration. Fixed layout:
//   0              EndTurn
//   1              UseHeroPower
//   2  .. 11       SelectHandCard(hand_pos 0..9)
//   12 .. 18       SelectBoardSlot(slot 0..6)
//   19 .. 34       SelectTarget(target 0..15)
//   35 .. 41       AttackWith(slot 0..6)
inline constexpr int kActionCount = 1 + 1 + kHandLimit + kBoardSlots + kTargetCount + kBoardSlots;
static_assert(kActionCount == 42);

enum class ActionType : uint8_t {
  EndTurn,
  UseHeroPower,
  SelectHandCard,
  SelectBoardSlot,
  SelectTarget,
  AttackWith,
};

struct Action {
  uint8_t index = 0;

  constexpr ActionType type() const {
    if (index == 0) return ActionType::EndTurn;
    if (index == 1) return ActionType::UseHeroPower;
    if (index < 12) return ActionType::SelectHandCard;
    if (index < 19) return ActionType::SelectBoardSlot;
    if (index < 35) return ActionType::SelectTarget;
    return ActionType::AttackWith;
  }

  // Positional argument of the decoded action (hand pos, slot or target).
  constexpr int arg() const {
    switch (type()) {
      case ActionType::SelectHandCard: return index - 2;
      case ActionType::SelectBoardSlot: return index - 12;
      case ActionType::SelectTarget: return index - 19;
      case ActionType::AttackWith: return index - 35;
      default: return 0;
    }
  }

  static constexpr Action end_turn() { return {0}; }
  static constexpr Action hero_power() { return {1}; }
  static constexpr Action select_hand(int pos) { return {static_cast<uint8_t>(2 + pos)}; }
  static constexpr Action select_slot(int slot) { return {static_cast<uint8_t>(12 + slot)}; }
  static constexpr Action select_target(int t) { return {static_cast<uint8_t>(19 + t)}; }
  static constexpr Action attack_with(int slot) { return {static_cast<uint8_t>(35 + slot)}; }

  bool operator==(const Action&) const = default;
};

std::string to_string(Action a);

using ActionList = StaticVector<Action, kActionCount>;

struct Minion {
  uint8_t card_id = 0;
  int8_t attack = 0;
  int8_t health = 0;  // current health; a minion at <= 0 is removed at once
  bool can_attack = false;
  bool present = false;

  bool operator==(const Minion&) const = default;
};

struct PlayerState {
  int16_t hero_health = 0;  // kept exact when negative (lethal overkill)
  uint8_t mana_crystals = 0;
  uint8_t mana_available = 0;
  uint8_t fatigue = 0;
  bool hero_power_used = false;
  uint8_t hand_size = 0;
  uint8_t deck_size = 0;
  std::array<uint8_t, kHandLimit> hand{};  // card ids; slots >= hand_size are 0
  std::array<uint8_t, kDeckSize> deck{};   // deck[deck_size-1] is the next draw
  std::array<Minion, kBoardSlots> board{};

  int board_count() const {
    int n = 0;
    for (const Minion& m : board) n += m.present ? 1 : 0;
    return n;
  }

  bool operator==(const PlayerState&) const = default;
};

// A decomposed move in progress: the first atomic action has been taken and
// the state is waiting for its slot/target completion.
enum class PendingKind : uint8_t {
  None,
  MinionPlacement,  // param = hand position of the minion card
  SpellTarget,      // param = hand position of the spell card
  AttackTarget,     // param = attacking board slot
  HeroPowerTarget,  // param unused
};

struct Pending {
  PendingKind kind = PendingKind::None;
  uint8_t param = 0;

  bool operator==(const Pending&) const = default;
};

enum class Outcome : uint8_t { InProgress, Player0Wins, Player1Wins };

struct GameState {
  std::array<PlayerState, 2> players;
  uint8_t active_player = 0;
  uint16_t turn_number = 1;  // one player's turn; increments on every EndTurn
  Pending pending;
  uint64_t rng_state = 0;  // stream for in-game stochastic effects (none in
                           // the current card set; reserved and carried)
  Outcome outcome = Outcome::InProgress;

  const PlayerState& active() const { return players[active_player]; }
  PlayerState& active() { return players[active_player]; }
  const PlayerState& opponent() const { return players[active_player ^ 1]; }
  PlayerState& opponent() { return players[active_player ^ 1]; }

  bool operator==(const GameState&) const = default;
};

// FNV-1a over the canonical field serialization (padding never leaks in).
uint64_t state_hash(const GameState& s);

}  // namespace mcg
