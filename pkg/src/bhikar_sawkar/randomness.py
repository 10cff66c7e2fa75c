"""Seeded random streams and the unbiased shuffle used by the engine.

Every game gets its own xoshiro256** stream whose seed is a pure hash of
``(master_seed, config_id, game_index)``. The fast kernel in
:mod:`bhikar_sawkar.fastpath` implements the same arithmetic, so a game
played by either route consumes exactly the same sequence of draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import MutableSequence

GENERATOR_NAME = "xoshiro256**(splitmix64-seeded)"
SEED_DERIVATION = "splitmix64-mix(master, config_id, game_index)"

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
CONFIG_MULT = 0xD1B54A32D192ED03
GAME_MULT = 0x8CB92BA72F3D8DD7
CONFIG_SALT = 0x6A09E667F3BCC909
GAME_SALT = 0xBB67AE8584CAA73B


def mix64(z: int) -> int:
    """splitmix64 finalizer; a bijection on 64-bit words."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, config_id: int, game_index: int) -> int:
    h = mix64(master_seed ^ GOLDEN_GAMMA)
    h = mix64(h + config_id * CONFIG_MULT + CONFIG_SALT)
    h = mix64(h + game_index * GAME_MULT + GAME_SALT)
    return h


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


def seed_state(seed: int) -> tuple[int, int, int, int]:
    """Expand a 64-bit seed into a xoshiro256** state via splitmix64."""
    x = seed & MASK64
    out = []
    for _ in range(4):
        x = (x + GOLDEN_GAMMA) & MASK64
        out.append(mix64(x))
    if not any(out):
        out[0] = GOLDEN_GAMMA
    return tuple(out)  # type: ignore[return-value]


class RandomStream:
    """xoshiro256** generator: period 2**256 - 1, 64-bit outputs."""

    __slots__ = ("_s",)

    def __init__(self, seed: int = 0, *, state: tuple[int, int, int, int] | None = None):
        self._s = list(state) if state is not None else list(seed_state(seed))

    @property
    def state(self) -> tuple[int, int, int, int]:
        return tuple(self._s)  # type: ignore[return-value]

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def bounded_uniform(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection; no modulo bias."""
        if n <= 0:
            raise ValueError(f"bound must be positive, got {n}")
        threshold = (1 << 64) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n


@dataclass(frozen=True)
class SeedPlan:
    master_seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must fit in an unsigned 64-bit word")

    def seed_for(self, config_id: int, game_index: int) -> int:
        return derive_seed(self.master_seed, config_id, game_index)


def stream_for(plan: SeedPlan | int, config_id: int, game_index: int) -> RandomStream:
    """Independent stream for one game of one grid cell."""
    master = plan.master_seed if isinstance(plan, SeedPlan) else plan
    return RandomStream(derive_seed(master, config_id, game_index))


def shuffle(cards: MutableSequence, rng: RandomStream) -> None:
    """In-place Fisher-Yates, walking from the back."""
    for i in range(len(cards) - 1, 0, -1):
        j = rng.bounded_uniform(i + 1)
        cards[i], cards[j] = cards[j], cards[i]
