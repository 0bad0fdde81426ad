"""Deterministic pseudo-random number generator used for every seeded behaviour.

A 64-bit linear congruential generator with Knuth's MMIX constants:

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64

Floats are taken from the top 53 bits of the state, integers below a bound
by modulo reduction. The generator is deliberately simple and fully
specified so that seeded runs (weight init, shuffles, synthetic data)
reproduce bit-for-bit on any platform, independent of numpy or libc RNGs.
"""

MASK64 = (1 << 64) - 1

_MULTIPLIER = 6364136223846793005
_INCREMENT = 1442695040888963407


class Lcg:
    """Seeded 64-bit LCG stream."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (_MULTIPLIER * self.state + _INCREMENT) & MASK64
        return self.state

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 bits of resolution."""
        return (self.next_u64() >> 11) / 9007199254740992.0  # 2**53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_float()

    def below(self, n: int) -> int:
        """Integer in [0, n). Modulo bias is negligible for n << 2**64."""
        if n <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
