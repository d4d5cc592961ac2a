#include "mcg/game/engine.hpp"

#include <algorithm>
#include <array>

#include "mcg/util/errors.hpp"

namespace mcg {

const char* to_string(IllegalReason r) {
  switch (r) {
    case IllegalReason::GameOver: return "game over";
    case IllegalReason::BadIndex: return "action index out of range";
    case IllegalReason::PendingMismatch: return "action does not match pending choice";
    case IllegalReason::NotEnoughMana: return "not enough mana";
    case IllegalReason::HeroPowerUsed: return "hero power already used this turn";
    case IllegalReason::EmptyHandSlot: return "no card at that hand position";
    case IllegalReason::BoardFull: return "board is full";
    case IllegalReason::SlotOccupied: return "board slot not empty";
    case IllegalReason::NoSuchMinion: return "no minion at that slot";
    case IllegalReason::CannotAttack: return "minion cannot attack";
    case IllegalReason::NoLegalTarget: return "no legal target exists";
    case IllegalReason::BadTarget: return "invalid target";
  }
  return "?";
}

std::string to_string(Action a) {
  switch (a.type()) {
    case ActionType::EndTurn: return "EndTurn";
    case ActionType::UseHeroPower: return "UseHeroPower";
    case ActionType::SelectHandCard: return "SelectHandCard(" + std::to_string(a.arg()) + ")";
    case ActionType::SelectBoardSlot: return "SelectBoardSlot(" + std::to_string(a.arg()) + ")";
    case ActionType::SelectTarget: return "SelectTarget(" + std::to_string(a.arg()) + ")";
    case ActionType::AttackWith: return "AttackWith(" + std::to_string(a.arg()) + ")";
  }
  return "?";
}

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

inline void fnv(uint64_t& h, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xff;
    h *= kFnvPrime;
  }
}

// ---- targeting ---------------------------------------------------------
// Target indices: 0..6 own board slot, 7 own hero, 8..14 enemy board slot,
// 15 enemy hero. "Own" is always relative to the active player.

inline bool target_is_character(const GameState& s, int t) {
  if (t == 7 || t == 15) return true;
  if (t < 7) return s.active().board[t].present;
  return s.opponent().board[t - 8].present;
}

inline bool target_is_damaged(const Rules& rules, const GameState& s, int t) {
  if (t == 7) return s.active().hero_health < rules.hero_health;
  if (t == 15) return s.opponent().hero_health < rules.hero_health;
  const Minion& m = (t < 7) ? s.active().board[t] : s.opponent().board[t - 8];
  if (!m.present) return false;
  return m.health < rules.card(m.card_id).health;
}

inline bool any_damaged_character(const Rules& rules, const GameState& s) {
  for (int t = 0; t < kTargetCount; ++t)
    if (target_is_damaged(rules, s, t)) return true;
  return false;
}

inline bool any_friendly_minion(const GameState& s) {
  for (const Minion& m : s.active().board)
    if (m.present) return true;
  return false;
}

inline bool target_legal_for_pending(const Rules& rules, const GameState& s, int t) {
  const Pending& p = s.pending;
  switch (p.kind) {
    case PendingKind::HeroPowerTarget:
      return target_is_character(s, t);
    case PendingKind::AttackTarget:
      // Enemy characters only.
      if (t == 15) return true;
      return t >= 8 && t < 15 && s.opponent().board[t - 8].present;
    case PendingKind::SpellTarget: {
      const CardDef& c = rules.card(s.active().hand[p.param]);
      switch (c.effect) {
        case SpellEffect::DealDamage: return target_is_character(s, t);
        case SpellEffect::Heal: return target_is_damaged(rules, s, t);
        case SpellEffect::BuffAttack: return t < 7 && s.active().board[t].present;
        case SpellEffect::DrawCards: return false;  // resolves without a target
      }
      return false;
    }
    default:
      return false;
  }
}

inline bool has_empty_slot(const PlayerState& p) {
  for (const Minion& m : p.board)
    if (!m.present) return true;
  return false;
}

// A hand card may be selected only when its full move can complete.
inline bool hand_card_playable(const Rules& rules, const GameState& s, int pos) {
  const PlayerState& me = s.active();
  if (pos >= me.hand_size) return false;
  const CardDef& c = rules.card(me.hand[pos]);
  if (c.mana_cost > me.mana_available) return false;
  if (c.kind == CardKind::Minion) return has_empty_slot(me);
  switch (c.effect) {
    case SpellEffect::DealDamage: return true;  // heroes are always targets
    case SpellEffect::DrawCards: return true;
    case SpellEffect::Heal: return any_damaged_character(rules, s);
    case SpellEffect::BuffAttack: return any_friendly_minion(s);
  }
  return false;
}

inline void remove_from_hand(PlayerState& p, int pos) {
  for (int i = pos; i + 1 < p.hand_size; ++i) p.hand[i] = p.hand[i + 1];
  p.hand[--p.hand_size] = 0;
}

inline void clear_slot(Minion& m) { m = Minion{}; }

inline void damage_target(GameState& s, int t, int amount) {
  if (t == 7) {
    s.active().hero_health -= static_cast<int16_t>(amount);
    return;
  }
  if (t == 15) {
    s.opponent().hero_health -= static_cast<int16_t>(amount);
    return;
  }
  Minion& m = (t < 7) ? s.active().board[t] : s.opponent().board[t - 8];
  m.health -= static_cast<int8_t>(amount);
  if (m.health <= 0) clear_slot(m);
}

inline void heal_target(const Rules& rules, GameState& s, int t, int amount) {
  if (t == 7 || t == 15) {
    PlayerState& p = (t == 7) ? s.active() : s.opponent();
    p.hero_health = std::min<int16_t>(static_cast<int16_t>(rules.hero_health),
                                      static_cast<int16_t>(p.hero_health + amount));
    return;
  }
  Minion& m = (t < 7) ? s.active().board[t] : s.opponent().board[t - 8];
  int cap = rules.card(m.card_id).health;
  m.health = static_cast<int8_t>(std::min(cap, m.health + amount));
}

}  // namespace

namespace detail {

void resolve_outcome(GameState& s) {
  bool dead0 = s.players[0].hero_health <= 0;
  bool dead1 = s.players[1].hero_health <= 0;
  if (dead0 && dead1) {
    // Both heroes fell to the same action: the active player wins.
    s.outcome = (s.active_player == 0) ? Outcome::Player0Wins : Outcome::Player1Wins;
  } else if (dead0) {
    s.outcome = Outcome::Player1Wins;
  } else if (dead1) {
    s.outcome = Outcome::Player0Wins;
  }
}

void draw_card(const Rules& rules, GameState& s, int player) {
  PlayerState& p = s.players[player];
  if (p.deck_size == 0) {
    p.fatigue += 1;
    p.hero_health -= static_cast<int16_t>(p.fatigue);
    return;
  }
  uint8_t card = p.deck[--p.deck_size];
  p.deck[p.deck_size] = 0;
  if (p.hand_size < rules.hand_limit) {
    p.hand[p.hand_size++] = card;
  }
  // else: overdraw, the card burns.
}

}  // namespace detail

uint64_t deck_hash(std::span<const uint8_t> deck) {
  std::array<uint8_t, kDeckSize> sorted{};
  std::copy(deck.begin(), deck.end(), sorted.begin());
  std::sort(sorted.begin(), sorted.begin() + deck.size());
  uint64_t h = kFnvOffset;
  for (size_t i = 0; i < deck.size(); ++i) {
    h ^= sorted[i];
    h *= kFnvPrime;
  }
  return h;
}

uint64_t state_hash(const GameState& s) {
  uint64_t h = kFnvOffset;
  for (const PlayerState& p : s.players) {
    fnv(h, static_cast<uint64_t>(static_cast<uint16_t>(p.hero_health)));
    fnv(h, (uint64_t(p.mana_crystals) << 32) | (uint64_t(p.mana_available) << 16) |
               (uint64_t(p.fatigue) << 8) | uint64_t(p.hero_power_used));
    fnv(h, (uint64_t(p.hand_size) << 8) | uint64_t(p.deck_size));
    for (int i = 0; i < p.hand_size; ++i) fnv(h, p.hand[i]);
    for (int i = 0; i < p.deck_size; ++i) fnv(h, p.deck[i]);
    for (const Minion& m : p.board)
      fnv(h, (uint64_t(m.present) << 40) | (uint64_t(m.can_attack) << 32) |
                 (uint64_t(m.card_id) << 24) |
                 (uint64_t(static_cast<uint8_t>(m.attack)) << 16) |
                 uint64_t(static_cast<uint8_t>(m.health)));
  }
  fnv(h, (uint64_t(s.active_player) << 48) | (uint64_t(s.turn_number) << 32) |
             (uint64_t(static_cast<uint8_t>(s.pending.kind)) << 16) |
             (uint64_t(s.pending.param) << 8) | uint64_t(static_cast<uint8_t>(s.outcome)));
  fnv(h, s.rng_state);
  return h;
}

GameState new_game(const Rules& rules, std::span<const uint8_t> deck0,
                   std::span<const uint8_t> deck1, uint64_t seed) {
  auto validate = [&](std::span<const uint8_t> deck, int who) {
    if (static_cast<int>(deck.size()) != kDeckSize)
      throw InvalidDeckError("deck " + std::to_string(who) + " has " +
                             std::to_string(deck.size()) + " cards, expected 30");
    std::array<int, kPoolSize> copies{};
    for (uint8_t id : deck) {
      if (id >= kPoolSize)
        throw InvalidDeckError("deck " + std::to_string(who) + " contains unknown card id " +
                               std::to_string(int(id)));
      if (++copies[id] > kMaxCopies)
        throw InvalidDeckError("deck " + std::to_string(who) + " has more than 2 copies of '" +
                               rules.card(id).name + "'");
    }
  };
  validate(deck0, 0);
  validate(deck1, 1);

  GameState s;
  s.players[0].hero_health = static_cast<int16_t>(rules.hero_health);
  s.players[1].hero_health = static_cast<int16_t>(rules.hero_health);
  std::copy(deck0.begin(), deck0.end(), s.players[0].deck.begin());
  std::copy(deck1.begin(), deck1.end(), s.players[1].deck.begin());
  s.players[0].deck_size = kDeckSize;
  s.players[1].deck_size = kDeckSize;

  SplitMix64 rng(seed);
  for (PlayerState& p : s.players) {
    for (int i = kDeckSize - 1; i >= 1; --i) {
      int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
      std::swap(p.deck[i], p.deck[j]);
    }
  }
  for (int i = 0; i < 3; ++i) detail::draw_card(rules, s, 0);
  for (int i = 0; i < 4; ++i) detail::draw_card(rules, s, 1);

  s.players[0].mana_crystals = 1;
  s.players[0].mana_available = 1;
  s.active_player = 0;
  s.turn_number = 1;
  s.rng_state = rng.state();
  s.outcome = Outcome::InProgress;
  return s;
}

void legal_actions(const Rules& rules, const GameState& s, ActionList& out) {
  out.clear();
  if (s.outcome != Outcome::InProgress)
    throw GameOverError("legal_actions on a finished game");

  const PlayerState& me = s.active();
  switch (s.pending.kind) {
    case PendingKind::None: {
      out.push_back(Action::end_turn());
      if (!me.hero_power_used && me.mana_available >= rules.hero_power_cost)
        out.push_back(Action::hero_power());
      for (int pos = 0; pos < me.hand_size; ++pos)
        if (hand_card_playable(rules, s, pos)) out.push_back(Action::select_hand(pos));
      for (int slot = 0; slot < kBoardSlots; ++slot) {
        const Minion& m = me.board[slot];
        if (m.present && m.can_attack && m.attack >= 1)
          out.push_back(Action::attack_with(slot));
      }
      return;
    }
    case PendingKind::MinionPlacement: {
      for (int slot = 0; slot < kBoardSlots; ++slot)
        if (!me.board[slot].present) out.push_back(Action::select_slot(slot));
      return;
    }
    default: {
      for (int t = 0; t < kTargetCount; ++t)
        if (target_legal_for_pending(rules, s, t)) out.push_back(Action::select_target(t));
      return;
    }
  }
}

ActionList legal_actions(const Rules& rules, const GameState& s) {
  ActionList out;
  legal_actions(rules, s, out);
  return out;
}

bool is_legal(const Rules& rules, const GameState& s, Action a) {
  if (s.outcome != Outcome::InProgress) return false;
  if (a.index >= kActionCount) return false;
  const PlayerState& me = s.active();
  switch (a.type()) {
    case ActionType::EndTurn:
      return s.pending.kind == PendingKind::None;
    case ActionType::UseHeroPower:
      return s.pending.kind == PendingKind::None && !me.hero_power_used &&
             me.mana_available >= rules.hero_power_cost;
    case ActionType::SelectHandCard:
      return s.pending.kind == PendingKind::None && hand_card_playable(rules, s, a.arg());
    case ActionType::SelectBoardSlot:
      return s.pending.kind == PendingKind::MinionPlacement && !me.board[a.arg()].present;
    case ActionType::SelectTarget:
      return target_legal_for_pending(rules, s, a.arg());
    case ActionType::AttackWith: {
      if (s.pending.kind != PendingKind::None) return false;
      const Minion& m = me.board[a.arg()];
      return m.present && m.can_attack && m.attack >= 1;
    }
  }
  return false;
}

void step_unchecked(const Rules& rules, GameState& s, Action a) {
  PlayerState& me = s.active();
  switch (a.type()) {
    case ActionType::EndTurn: {
      s.active_player ^= 1;
      s.turn_number += 1;
      PlayerState& next = s.active();
      next.mana_crystals = static_cast<uint8_t>(
          std::min<int>(rules.mana_cap, next.mana_crystals + 1));
      next.mana_available = next.mana_crystals;
      next.hero_power_used = false;
      for (Minion& m : next.board)
        if (m.present) m.can_attack = true;
      detail::draw_card(rules, s, s.active_player);
      detail::resolve_outcome(s);
      return;
    }
    case ActionType::UseHeroPower: {
      s.pending = {PendingKind::HeroPowerTarget, 0};
      return;
    }
    case ActionType::SelectHandCard: {
      int pos = a.arg();
      const CardDef& c = rules.card(me.hand[pos]);
      if (c.kind == CardKind::Minion) {
        s.pending = {PendingKind::MinionPlacement, static_cast<uint8_t>(pos)};
        return;
      }
      if (c.effect == SpellEffect::DrawCards) {
        me.mana_available -= static_cast<uint8_t>(c.mana_cost);
        remove_from_hand(me, pos);
        for (int i = 0; i < c.effect_amount; ++i)
          detail::draw_card(rules, s, s.active_player);
        detail::resolve_outcome(s);  // fatigue can be lethal
        return;
      }
      s.pending = {PendingKind::SpellTarget, static_cast<uint8_t>(pos)};
      return;
    }
    case ActionType::SelectBoardSlot: {
      int pos = s.pending.param;
      const CardDef& c = rules.card(me.hand[pos]);
      me.mana_available -= static_cast<uint8_t>(c.mana_cost);
      remove_from_hand(me, pos);
      Minion& m = me.board[a.arg()];
      m.card_id = c.id;
      m.attack = static_cast<int8_t>(c.attack);
      m.health = static_cast<int8_t>(c.health);
      m.can_attack = false;  // summoning sickness
      m.present = true;
      s.pending = {};
      return;
    }
    case ActionType::SelectTarget: {
      int t = a.arg();
      switch (s.pending.kind) {
        case PendingKind::HeroPowerTarget: {
          me.mana_available -= static_cast<uint8_t>(rules.hero_power_cost);
          me.hero_power_used = true;
          s.pending = {};
          damage_target(s, t, rules.hero_power_damage);
          detail::resolve_outcome(s);
          return;
        }
        case PendingKind::SpellTarget: {
          int pos = s.pending.param;
          const CardDef& c = rules.card(me.hand[pos]);
          me.mana_available -= static_cast<uint8_t>(c.mana_cost);
          remove_from_hand(me, pos);
          s.pending = {};
          switch (c.effect) {
            case SpellEffect::DealDamage:
              damage_target(s, t, c.effect_amount);
              break;
            case SpellEffect::Heal:
              heal_target(rules, s, t, c.effect_amount);
              break;
            case SpellEffect::BuffAttack:
              me.board[t].attack += static_cast<int8_t>(c.effect_amount);
              break;
            case SpellEffect::DrawCards:
              break;  // unreachable; resolved at SelectHandCard
          }
          detail::resolve_outcome(s);
          return;
        }
        case PendingKind::AttackTarget: {
          Minion& attacker = me.board[s.pending.param];
          s.pending = {};
          if (t == 15) {
            s.opponent().hero_health -= static_cast<int16_t>(attacker.attack);
            attacker.can_attack = false;
          } else {
            // Simultaneous damage.
            Minion& defender = s.opponent().board[t - 8];
            defender.health -= attacker.attack;
            attacker.health -= defender.attack;
            if (defender.health <= 0) clear_slot(defender);
            if (attacker.health <= 0)
              clear_slot(attacker);
            else
              attacker.can_attack = false;
          }
          detail::resolve_outcome(s);
          return;
        }
        default:
          return;  // unreachable under the precondition
      }
    }
    case ActionType::AttackWith: {
      s.pending = {PendingKind::AttackTarget, static_cast<uint8_t>(a.arg())};
      return;
    }
  }
}

GameState apply_action(const Rules& rules, const GameState& s, Action a) {
  if (s.outcome != Outcome::InProgress)
    throw IllegalActionError(IllegalReason::GameOver, "apply_action: " + to_string(a));
  if (a.index >= kActionCount)
    throw IllegalActionError(IllegalReason::BadIndex, "apply_action: index " +
                                                          std::to_string(int(a.index)));
  if (!is_legal(rules, s, a)) {
    // Re-derive the reason for the diagnostic.
    IllegalReason r = IllegalReason::PendingMismatch;
    const PlayerState& me = s.active();
    switch (a.type()) {
      case ActionType::UseHeroPower:
        if (s.pending.kind != PendingKind::None) r = IllegalReason::PendingMismatch;
        else if (me.hero_power_used) r = IllegalReason::HeroPowerUsed;
        else r = IllegalReason::NotEnoughMana;
        break;
      case ActionType::SelectHandCard:
        if (s.pending.kind != PendingKind::None) r = IllegalReason::PendingMismatch;
        else if (a.arg() >= me.hand_size) r = IllegalReason::EmptyHandSlot;
        else if (rules.card(me.hand[a.arg()]).mana_cost > me.mana_available)
          r = IllegalReason::NotEnoughMana;
        else if (rules.card(me.hand[a.arg()]).kind == CardKind::Minion)
          r = IllegalReason::BoardFull;
        else r = IllegalReason::NoLegalTarget;
        break;
      case ActionType::SelectBoardSlot:
        r = (s.pending.kind == PendingKind::MinionPlacement) ? IllegalReason::SlotOccupied
                                                             : IllegalReason::PendingMismatch;
        break;
      case ActionType::SelectTarget:
        r = (s.pending.kind == PendingKind::None) ? IllegalReason::PendingMismatch
                                                  : IllegalReason::BadTarget;
        break;
      case ActionType::AttackWith:
        if (s.pending.kind != PendingKind::None) r = IllegalReason::PendingMismatch;
        else if (!me.board[a.arg()].present) r = IllegalReason::NoSuchMinion;
        else r = IllegalReason::CannotAttack;
        break;
      default:
        break;
    }
    throw IllegalActionError(r, "apply_action: " + to_string(a));
  }
  GameState next = s;
  step_unchecked(rules, next, a);
  return next;
}

Outcome playout_random(const Rules& rules, GameState s, SplitMix64& rng) {
  ActionList actions;
  while (s.outcome == Outcome::InProgress) {
    legal_actions(rules, s, actions);
    Action a = actions[static_cast<int>(rng.next_below(actions.size()))];
    step_unchecked(rules, s, a);
    if (s.turn_number > 1000)
      throw Error("playout exceeded 1000 turns; termination invariant broken");
  }
  return s.outcome;
}

GameState swap_players(const GameState& s) {
  GameState r = s;
  std::swap(r.players[0], r.players[1]);
  r.active_player = s.active_player ^ 1;
  if (s.outcome == Outcome::Player0Wins) r.outcome = Outcome::Player1Wins;
  else if (s.outcome == Outcome::Player1Wins) r.outcome = Outcome::Player0Wins;
  return r;
}

}  // namespace mcg
