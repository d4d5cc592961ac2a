#include "mcg/features/encoder.hpp"

#include <algorithm>
#include <cstring>

namespace mcg {

Encoder::Encoder(const Rules& rules) : rules_(&rules) {
  auto block = [&](const std::string& name, int length,
                   const std::vector<std::string>& names) {
    fields_.push_back({name, width_, length});
    for (const auto& n : names) columns_.push_back(n);
    width_ += length;
  };
  auto scalar = [&](const std::string& name) { block(name, 1, {name}); };

  for (const char* side : {"my", "opp"}) scalar(std::string(side) + "_hero_health");
  for (const char* side : {"my", "opp"}) {
    block(std::string(side) + "_mana", 2,
          {std::string(side) + "_mana_available", std::string(side) + "_mana_crystals"});
  }
  for (const char* side : {"my", "opp"}) {
    std::vector<std::string> names;
    for (int slot = 0; slot < kBoardSlots; ++slot)
      for (const char* f : {"attack", "health", "ready"})
        names.push_back(std::string(side) + "_board" + std::to_string(slot) + "_" + f);
    block(std::string(side) + "_board", kBoardSlots * 3, names);
  }
  {
    std::vector<std::string> names;
    for (int pos = 0; pos < kHandLimit; ++pos)
      for (int id = 0; id < kPoolSize; ++id)
        names.push_back("my_hand" + std::to_string(pos) + "_card" + std::to_string(id));
    block("my_hand_onehot", kHandLimit * kPoolSize, names);
  }
  scalar("opp_hand_size");
  for (const char* side : {"my", "opp"}) scalar(std::string(side) + "_deck_remaining");
  for (const char* side : {"my", "opp"}) scalar(std::string(side) + "_fatigue");
  for (const char* side : {"my", "opp"}) scalar(std::string(side) + "_hero_power_used");
  scalar("turn");
  scalar("active_flag");
  block("pending_kind", 4,
        {"pending_minion_placement", "pending_spell_target", "pending_attack_target",
         "pending_hero_power_target"});
  scalar("pending_param");
}

void Encoder::encode(const GameState& s, int perspective, float* out) const {
  std::memset(out, 0, sizeof(float) * static_cast<size_t>(width_));
  const Rules& rules = *rules_;
  const PlayerState& me = s.players[perspective];
  const PlayerState& opp = s.players[perspective ^ 1];
  float* p = out;

  auto hero = [&](const PlayerState& pl) {
    *p++ = static_cast<float>(std::clamp<int>(pl.hero_health, 0, rules.hero_health)) /
           static_cast<float>(rules.hero_health);
  };
  hero(me);
  hero(opp);

  auto mana = [&](const PlayerState& pl) {
    *p++ = static_cast<float>(pl.mana_available) / static_cast<float>(rules.mana_cap);
    *p++ = static_cast<float>(pl.mana_crystals) / static_cast<float>(rules.mana_cap);
  };
  mana(me);
  mana(opp);

  auto board = [&](const PlayerState& pl) {
    for (const Minion& m : pl.board) {
      if (m.present) {
        *p++ = static_cast<float>(std::min<int>(m.attack, 7)) / 7.0f;
        *p++ = static_cast<float>(std::min<int>(m.health, 7)) / 7.0f;
        *p++ = m.can_attack ? 1.0f : 0.0f;
      } else {
        p += 3;
      }
    }
  };
  board(me);
  board(opp);

  for (int pos = 0; pos < me.hand_size; ++pos) p[pos * kPoolSize + me.hand[pos]] = 1.0f;
  p += kHandLimit * kPoolSize;

  *p++ = static_cast<float>(opp.hand_size) / static_cast<float>(rules.hand_limit);
  *p++ = static_cast<float>(me.deck_size) / static_cast<float>(kDeckSize);
  *p++ = static_cast<float>(opp.deck_size) / static_cast<float>(kDeckSize);
  *p++ = static_cast<float>(std::min<int>(me.fatigue, 10)) / 10.0f;
  *p++ = static_cast<float>(std::min<int>(opp.fatigue, 10)) / 10.0f;
  *p++ = me.hero_power_used ? 1.0f : 0.0f;
  *p++ = opp.hero_power_used ? 1.0f : 0.0f;
  *p++ = static_cast<float>(std::min<int>(s.turn_number, rules.max_turns)) /
         static_cast<float>(rules.max_turns);
  *p++ = s.active_player == perspective ? 1.0f : 0.0f;

  switch (s.pending.kind) {
    case PendingKind::MinionPlacement: p[0] = 1.0f; break;
    case PendingKind::SpellTarget: p[1] = 1.0f; break;
    case PendingKind::AttackTarget: p[2] = 1.0f; break;
    case PendingKind::HeroPowerTarget: p[3] = 1.0f; break;
    case PendingKind::None: break;
  }
  p += 4;
  *p++ = static_cast<float>(s.pending.param) / 10.0f;
}

std::vector<float> Encoder::encode(const GameState& s, int perspective) const {
  std::vector<float> out(static_cast<size_t>(width_));
  encode(s, perspective, out.data());
  return out;
}

}  // namespace mcg
