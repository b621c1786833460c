"""Deterministic counter-based random stream.

The generator is splitmix64: a 64-bit counter advanced by a fixed odd
increment, with the output produced by an avalanching bit mix.  It is
trivially portable, which keeps the compiled kernel and the pure-Python
fallback bitwise identical, and seeding is O(1).

Stream layout used across the package:
  * ``uniform``  consumes one raw draw, returns a double in [0, 1).
  * ``gaussian`` consumes two raw draws (Box-Muller, no caching of the
    second deviate, so the draw count per call is fixed).
"""

from __future__ import annotations

import math

from .errors import ParameterError

_MASK = 0xFFFFFFFFFFFFFFFF
_INCREMENT = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53
_TWO_PI = 2.0 * math.pi


def mix64(z: int) -> int:
    """Avalanche a 64-bit value (the splitmix64 output function)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def next_state(state: int) -> int:
    """Advance the counter by one step."""
    return (state + _INCREMENT) & _MASK


def derive_seed(base: int, *indices: int) -> int:
    """Derive an independent child seed from a base seed and index tuple.

    Sequential absorb-and-mix hashing: unlike a plain XOR of the
    indices, the result is sensitive to position, so (trial=1, cell=2)
    and (trial=2, cell=1) never collide.
    """
    s = base & _MASK
    for ix in indices:
        s = (s + _INCREMENT * ((ix & _MASK) + 1)) & _MASK
        s = mix64(s)
    return s


class RngStream:
    """Scalar reference stream.  Bulk draws go through the backend kernels,
    which replay exactly this sequence."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = next_state(self.state)
        return mix64(self.state)

    def uniform(self) -> float:
        """One double in [0, 1), using the top 53 bits of the draw."""
        return (self.next_u64() >> 11) * _INV_2_53

    def gaussian(self, mean: float = 0.0, variance: float = 1.0) -> float:
        """One normal deviate via Box-Muller; always consumes two draws."""
        if variance < 0:
            raise ParameterError(f"variance must be nonnegative, got {variance}")
        u1 = ((self.next_u64() >> 11) + 1) * _INV_2_53  # in (0, 1], log-safe
        u2 = (self.next_u64() >> 11) * _INV_2_53
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)
        return mean + math.sqrt(variance) * z
