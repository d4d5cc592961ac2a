#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcg {

inline constexpr int kPoolSize = 30;   // distinct cards in the global pool
inline constexpr int kDeckSize = 30;   // cards per deck
inline constexpr int kMaxCopies = 2;   // per card id per deck

enum class CardKind : uint8_t { Minion, Spell };

enum class SpellEffect : uint8_t { DealDamage, Heal, DrawCards, BuffAttack };

struct CardDef {
  uint8_t id = 0;  // stable index into the pool, 0..29
  std::string name;
  int mana_cost = 0;
  CardKind kind = CardKind::Minion;
  int attack = 0;                                  // minions only
  int health = 0;                                  // minions only
  SpellEffect effect = SpellEffect::DealDamage;    // spells only
  int effect_amount = 0;                           // spells only

  bool operator==(const CardDef&) const = default;
};

// All rule constants plus the card pool, loaded from one key-value config
// file. `rules_version` is embedded in every exported dataset and report.
struct Rules {
  std::string rules_version;
  int hero_health = 30;
  int board_slots = 7;
  int hand_limit = 10;
  int mana_cap = 10;
  int hero_power_cost = 2;
  int hero_power_damage = 1;
  int max_turns = 200;  // soundness bound asserted by tests, not an engine cap
  std::vector<CardDef> pool;  // exactly kPoolSize entries, ids contiguous

  const CardDef& card(uint8_t id) const { return pool[id]; }

  bool operator==(const Rules&) const = default;
};

// Parses the documented `key = value` rules file. Throws ConfigError on
// malformed input and validates all pool invariants.
Rules load_rules(const std::string& path);

// The built-in pool, byte-for-byte equal to configs/rules_default.cfg
// (a unit test keeps the two in sync).
const Rules& default_rules();

// Validates pool invariants (30 contiguous ids, minion/spell field split).
// Throws ConfigError with a description of the first violation.
void validate_rules(const Rules& rules);

const char* to_string(CardKind k);
const char* to_string(SpellEffect e);

}  // namespace mcg
