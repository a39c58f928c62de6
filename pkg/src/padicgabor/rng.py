"""Seeded, cross-platform pseudo-randomness for experiments and checks.

The generator is splitmix64: state advances by the 64-bit golden-gamma
0x9E3779B97F4A7C15 and each output is finalized by two xor-shift-multiply
rounds (constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).  Floats take
the top 53 bits over 2**53; bounded integers reduce a raw draw modulo the
bound.  Every consumer in the package draws through this class so that a
fixed seed reproduces byte-identical output anywhere.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * (2.0**-53)

    def next_below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % n

    def complex_vector(self, n: int) -> np.ndarray:
        """n complex draws with Re, Im independent uniform on [-1, 1)."""
        out = np.empty(n, dtype=complex)
        for i in range(n):
            re = 2.0 * self.next_float() - 1.0
            im = 2.0 * self.next_float() - 1.0
            out[i] = complex(re, im)
        return out
