#include "mcg/game/cards.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mcg/game/state.hpp"
#include "mcg/util/errors.hpp"

namespace mcg {

const char* to_string(CardKind k) {
  return k == CardKind::Minion ? "minion" : "spell";
}

const char* to_string(SpellEffect e) {
  switch (e) {
    case SpellEffect::DealDamage: return "deal_damage";
    case SpellEffect::Heal: return "heal";
    case SpellEffect::DrawCards: return "draw_cards";
    case SpellEffect::BuffAttack: return "buff_attack";
  }
  return "?";
}

namespace {

SpellEffect parse_effect(const std::string& s) {
  if (s == "deal_damage") return SpellEffect::DealDamage;
  if (s == "heal") return SpellEffect::Heal;
  if (s == "draw_cards") return SpellEffect::DrawCards;
  if (s == "buff_attack") return SpellEffect::BuffAttack;
  throw ConfigError("unknown spell effect: " + s);
}

CardDef minion(uint8_t id, const char* name, int cost, int attack, int health) {
  CardDef c;
  c.id = id;
  c.name = name;
  c.mana_cost = cost;
  c.kind = CardKind::Minion;
  c.attack = attack;
  c.health = health;
  return c;
}

CardDef spell(uint8_t id, const char* name, int cost, SpellEffect e, int amount) {
  CardDef c;
  c.id = id;
  c.name = name;
  c.mana_cost = cost;
  c.kind = CardKind::Spell;
  c.effect = e;
  c.effect_amount = amount;
  return c;
}

Rules make_default_rules() {
  Rules r;
  r.rules_version = "mcg-rules-1";
  r.pool = {
      spell(0, "Spark", 1, SpellEffect::DealDamage, 2),
      spell(1, "Mend", 2, SpellEffect::Heal, 3),
      spell(2, "Insight", 3, SpellEffect::DrawCards, 2),
      spell(3, "Sharpen", 1, SpellEffect::BuffAttack, 2),
      minion(4, "Scrapper", 1, 2, 1),
      minion(5, "Lookout", 1, 1, 2),
      minion(6, "Squire", 1, 1, 1),
      minion(7, "Raider", 2, 3, 2),
      minion(8, "Shieldhand", 2, 2, 3),
      minion(9, "Duelist", 2, 3, 1),
      minion(10, "Tracker", 2, 2, 2),
      minion(11, "Marauder", 3, 4, 2),
      minion(12, "Vanguard", 3, 3, 3),
      minion(13, "Warden", 3, 2, 4),
      minion(14, "Lancer", 3, 4, 3),
      minion(15, "Berserker", 4, 5, 3),
      minion(16, "Captain", 4, 4, 4),
      minion(17, "Sentinel", 4, 3, 5),
      minion(18, "Warbringer", 5, 6, 4),
      minion(19, "Champion", 5, 5, 5),
      minion(20, "Guardian", 5, 4, 6),
      minion(21, "Destroyer", 6, 7, 5),
      minion(22, "Warlord", 6, 6, 6),
      minion(23, "Colossus", 6, 5, 7),
      minion(24, "Juggernaut", 7, 8, 6),
      minion(25, "Titan", 7, 7, 7),
      minion(26, "Bulwark", 7, 6, 8),
      minion(27, "GlassBlade", 2, 4, 1),
      minion(28, "Reaver", 4, 6, 2),
      minion(29, "Skirmisher", 3, 5, 2),
  };
  validate_rules(r);
  return r;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& s, const std::string& where) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected integer for " + where + ", got '" + s + "'");
  }
}

}  // namespace

void validate_rules(const Rules& r) {
  if (r.rules_version.empty()) throw ConfigError("rules_version missing");
  if (static_cast<int>(r.pool.size()) != kPoolSize)
    throw ConfigError("card pool must have exactly 30 cards, got " +
                      std::to_string(r.pool.size()));
  for (int i = 0; i < kPoolSize; ++i) {
    const CardDef& c = r.pool[i];
    if (c.id != i) throw ConfigError("card ids must be contiguous 0..29");
    if (c.name.empty()) throw ConfigError("card " + std::to_string(i) + " has no name");
    if (c.mana_cost < 0 || c.mana_cost > r.mana_cap)
      throw ConfigError("card " + c.name + ": mana cost out of range");
    if (c.kind == CardKind::Minion) {
      if (c.attack < 0 || c.health < 1)
        throw ConfigError("card " + c.name + ": bad minion statline");
      if (c.effect_amount != 0)
        throw ConfigError("card " + c.name + ": minions have no spell effect");
    } else {
      if (c.attack != 0 || c.health != 0)
        throw ConfigError("card " + c.name + ": spells have no attack/health");
      if (c.effect_amount < 1)
        throw ConfigError("card " + c.name + ": spell amount must be >= 1");
    }
  }
  for (int i = 0; i < kPoolSize; ++i)
    for (int j = i + 1; j < kPoolSize; ++j)
      if (r.pool[i].name == r.pool[j].name)
        throw ConfigError("duplicate card name: " + r.pool[i].name);
  if (r.board_slots != kBoardSlots)
    throw ConfigError("board_slots is fixed at 7 by the action layout");
  if (r.hand_limit != kHandLimit)
    throw ConfigError("hand_limit is fixed at 10 by the action layout");
  if (r.hero_health < 1 || r.mana_cap < 1 || r.hero_power_cost < 0 ||
      r.hero_power_damage < 1 || r.max_turns < 1)
    throw ConfigError("rule constants out of range");
}

const Rules& default_rules() {
  static const Rules r = make_default_rules();
  return r;
}

Rules load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rules file: " + path);

  Rules r;
  r.rules_version.clear();
  r.pool.assign(kPoolSize, CardDef{});
  std::vector<bool> seen(kPoolSize, false);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = path + ":" + std::to_string(lineno);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (key == "rules_version") {
      r.rules_version = value;
    } else if (key == "hero_health") {
      r.hero_health = to_int(value, where);
    } else if (key == "board_slots") {
      r.board_slots = to_int(value, where);
    } else if (key == "hand_limit") {
      r.hand_limit = to_int(value, where);
    } else if (key == "mana_cap") {
      r.mana_cap = to_int(value, where);
    } else if (key == "hero_power_cost") {
      r.hero_power_cost = to_int(value, where);
    } else if (key == "hero_power_damage") {
      r.hero_power_damage = to_int(value, where);
    } else if (key == "max_turns") {
      r.max_turns = to_int(value, where);
    } else if (key.rfind("card.", 0) == 0) {
      int id = to_int(key.substr(5), where);
      if (id < 0 || id >= kPoolSize) throw ConfigError(where + ": card id out of range");
      if (seen[id]) throw ConfigError(where + ": duplicate card id " + std::to_string(id));
      seen[id] = true;

      std::istringstream tok(value);
      std::string kind, name;
      int cost = 0;
      if (!(tok >> kind >> name >> cost))
        throw ConfigError(where + ": expected '<kind> <name> <cost> ...'");
      if (kind == "minion") {
        int attack = 0, health = 0;
        if (!(tok >> attack >> health))
          throw ConfigError(where + ": minion needs '<attack> <health>'");
        r.pool[id] = minion(static_cast<uint8_t>(id), name.c_str(), cost, attack, health);
      } else if (kind == "spell") {
        std::string effect;
        int amount = 0;
        if (!(tok >> effect >> amount))
          throw ConfigError(where + ": spell needs '<effect> <amount>'");
        r.pool[id] = spell(static_cast<uint8_t>(id), name.c_str(), cost,
                           parse_effect(effect), amount);
      } else {
        throw ConfigError(where + ": card kind must be 'minion' or 'spell'");
      }
      std::string extra;
      if (tok >> extra) throw ConfigError(where + ": trailing tokens after card spec");
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }

  for (int i = 0; i < kPoolSize; ++i)
    if (!seen[i]) throw ConfigError(path + ": card " + std::to_string(i) + " missing");
  validate_rules(r);
  return r;
}

}  // namespace mcg
