"""Deterministic random chain generation.

Randomness comes from a self-contained PCG32 generator (the reference
permuted-congruential scheme: 64-bit LCG state, xorshift-rotate output)
so that identical seeds reproduce identical chains on any platform or
implementation.  Bounded draws use the textbook rejection method: draw
32-bit words, reject those below ``2**32 mod bound``, reduce modulo the
bound.  The draw order is fixed: n_1 first, then m_1..m_q, then the
edge counts E_1..E_q; interior input dimensions follow from conformance
(n_{i+1} = m_i), which keeps every sampled dimension uniform on the
configured range while the chain stays composable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import ElementalFunction, JacobianChain

_MASK64 = (1 << 64) - 1
_MULTIPLIER = 6364136223846793005
_DEFAULT_STREAM = 54


class Pcg32:
    """Minimal PCG32 (pcg32_random_r / pcg32_boundedrand_r)."""

    def __init__(self, seed: int, stream: int = _DEFAULT_STREAM) -> None:
        self.state = 0
        self.inc = ((stream << 1) | 1) & _MASK64
        self.next_word()
        self.state = (self.state + (seed & _MASK64)) & _MASK64
        self.next_word()

    def next_word(self) -> int:
        old = self.state
        self.state = (old * _MULTIPLIER + self.inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def bounded(self, bound: int) -> int:
        """Uniform draw from [0, bound) without modulo bias."""
        if not 1 <= bound <= 1 << 32:
            raise ValueError(f"bound must be in 1..2^32, got {bound}")
        threshold = (1 << 32) % bound
        while True:
            word = self.next_word()
            if word >= threshold:
                return word % bound

    def uniform(self, lo: int, hi: int) -> int:
        """Uniform draw from [lo, hi] inclusive."""
        return lo + self.bounded(hi - lo + 1)


@dataclass(frozen=True)
class GeneratorConfig:
    """Instance distribution: chain length, dimension and DAG-size ranges."""

    length: int
    size_range: tuple[int, int]
    dag_size_range: tuple[int, int]
    seed: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")
        for name, (lo, hi) in (("size_range", self.size_range), ("dag_size_range", self.dag_size_range)):
            if not 1 <= lo <= hi:
                raise ValueError(f"{name} must satisfy 1 <= lo <= hi, got ({lo}, {hi})")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def generate(cfg: GeneratorConfig, rng: Pcg32 | None = None) -> JacobianChain:
    """Draw one random chain; a pure function of the config seed.

    Passing an existing generator continues its stream, which is how a
    batch draws several instances from one seed.
    """
    if rng is None:
        rng = Pcg32(cfg.seed)
    lo, hi = cfg.size_range
    elo, ehi = cfg.dag_size_range
    n_first = rng.uniform(lo, hi)
    out_dims = [rng.uniform(lo, hi) for _ in range(cfg.length)]
    edge_counts = [rng.uniform(elo, ehi) for _ in range(cfg.length)]
    elements = []
    n_cur = n_first
    for idx in range(1, cfg.length + 1):
        elements.append(
            ElementalFunction(index=idx, n=n_cur, m=out_dims[idx - 1], edges=edge_counts[idx - 1])
        )
        n_cur = out_dims[idx - 1]
    return JacobianChain(elements)


def generate_many(cfg: GeneratorConfig, count: int) -> list[JacobianChain]:
    """Draw ``count`` chains from one seeded stream, deterministically."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = Pcg32(cfg.seed)
    return [generate(cfg, rng) for _ in range(count)]
