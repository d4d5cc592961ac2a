#pragma once

#include <stdexcept>
#include <string>

namespace mcg {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed config file, missing path, inconsistent options.
// The CLI maps this family to exit code 2, everything else to 1.
struct ConfigError : Error {
  using Error::Error;
};

struct InvalidDeckError : ConfigError {
  using ConfigError::ConfigError;
};

struct GameOverError : Error {
  using Error::Error;
};

enum class IllegalReason {
  GameOver,
  BadIndex,
  PendingMismatch,
  NotEnoughMana,
  HeroPowerUsed,
  EmptyHandSlot,
  BoardFull,
  SlotOccupied,
  NoSuchMinion,
  CannotAttack,
  NoLegalTarget,
  BadTarget,
};

const char* to_string(IllegalReason r);

struct IllegalActionError : Error {
  IllegalActionError(IllegalReason r, const std::string& what)
      : Error(what + " (" + to_string(r) + ")"), reason(r) {}
  IllegalReason reason;
};

struct EmptyNodeError : Error {
  using Error::Error;
};

struct ShapeMismatchError : Error {
  using Error::Error;
};

struct EncodingMismatchError : Error {
  using Error::Error;
};

struct DivergedLossError : Error {
  using Error::Error;
};

struct DegenerateLabelsError : Error {
  using Error::Error;
};

}  // namespace mcg
