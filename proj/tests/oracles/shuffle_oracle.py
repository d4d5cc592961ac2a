#!/usr/bin/env python3
"""Independent reference for the documented shuffle/draw procedure.

Implements splitmix64 + Fisher-Yates + the opening draws from the documented
contract only (no C++ code consulted). Run to print the frozen constants used
by tests/test_game_core.cpp.
"""
MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def next_below(self, n):
        return self.next() % n


def new_game_decks(seed, deck0, deck1):
    rng = SplitMix64(seed)
    decks = [list(deck0), list(deck1)]
    for deck in decks:
        for i in range(29, 0, -1):
            j = rng.next_below(i + 1)
            deck[i], deck[j] = deck[j], deck[i]
    # Draws pop from the back; player 0 draws 3, player 1 draws 4.
    hand0 = [decks[0].pop() for _ in range(3)]
    hand1 = [decks[1].pop() for _ in range(4)]
    return hand0, hand1, decks[0], decks[1]


if __name__ == "__main__":
    ordered = list(range(30))
    h0, h1, d0, d1 = new_game_decks(0, ordered, ordered)
    print("seed=0, both decks = ids 0..29 in order")
    print("hand0 =", h0)
    print("hand1 =", h1)
    print("deck0 (bottom..top) =", d0)
    print("deck1 (bottom..top) =", d1)
