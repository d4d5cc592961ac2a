#pragma once

#include <string>
#include <vector>

#include "mcg/game/engine.hpp"

namespace mcg {

// One named block of the feature layout.
struct FieldSpec {
  std::string name;
  int offset = 0;
  int length = 0;
};

// Fixed-width state vectorization from one player's point of view ("my"
// blocks always come first). Every value lands in [0,1]. The layout, in
// order (normalizers in parentheses):
//   my/opp hero health (/30, clamped at 0), my/opp mana available+crystals
//   (/10), my/opp board: 7 slots x (attack /7 capped, health /7 capped,
//   can_attack), my hand: 10 positions x 30-way card one-hot, opp hand size
//   (/10), my/opp deck remaining (/30), my/opp fatigue (/10 capped), my/opp
//   hero power used, turn (/200 capped), active-player flag, pending-choice
//   kind one-hot (4), pending param (/10).
// Minion identity on the board is abstracted to its stat line; hands are
// exact. Version string is embedded in every exported dataset.
class Encoder {
 public:
  static constexpr const char* kVersion = "mcg-enc-1";

  explicit Encoder(const Rules& rules);

  int width() const { return width_; }
  const std::vector<FieldSpec>& fields() const { return fields_; }
  // One name per scalar column, aligned with the vector layout.
  const std::vector<std::string>& column_names() const { return columns_; }

  void encode(const GameState& s, int perspective, float* out) const;
  std::vector<float> encode(const GameState& s, int perspective) const;

 private:
  const Rules* rules_;
  int width_ = 0;
  std::vector<FieldSpec> fields_;
  std::vector<std::string> columns_;
};

}  // namespace mcg
