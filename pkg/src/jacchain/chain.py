"""Jacobian chain instances and the scalar fma cost primitives.

A chain is a sequence of q elemental functions, each a dense linear map
of known dimensions together with the edge count of its computational
DAG.  All solver cost arithmetic is exact integer arithmetic: a cost is
a plain nonnegative Python ``int`` counting scalar fused multiply-add
operations, so comparisons between solver results are never subject to
rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

#: Effective memory limit: ``None`` means unlimited (the config file
#: encodes unlimited as 0; translation happens at the config boundary).
MemoryLimit = Optional[int]


def check_cost(value: int, what: str = "cost") -> int:
    """Validate a scalar fma count (nonnegative integer)."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{what} must be an int, got {type(value).__name__}")
    if value < 0:
        raise ValueError(f"{what} must be nonnegative, got {value}")
    return value


@dataclass(frozen=True)
class ElementalFunction:
    """One link of the chain: a map from R^n to R^m with a DAG of `edges` edges."""

    index: int
    n: int
    m: int
    edges: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"index must be >= 1, got {self.index}")
        for name in ("n", "m", "edges"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")


@dataclass(frozen=True)
class JacobianChain:
    """An ordered chain of elemental functions with conforming dimensions.

    The product of the elemental Jacobians, last times first, is the
    Jacobian of the composite map.  Conformance requires the input
    dimension of link i+1 to equal the output dimension of link i.
    Immutable after construction; safe to share across solver runs.
    """

    elements: tuple[ElementalFunction, ...]

    def __init__(self, elements: Iterable[ElementalFunction]) -> None:
        elems = tuple(elements)
        if not elems:
            raise ValueError("chain must contain at least one element")
        for pos, f in enumerate(elems, start=1):
            if f.index != pos:
                raise ValueError(
                    f"element at position {pos} has index {f.index}; "
                    "indices must be 1..q in order"
                )
        for lo, hi in zip(elems, elems[1:]):
            if hi.n != lo.m:
                raise ValueError(
                    f"dimension mismatch between links {lo.index} and {hi.index}: "
                    f"n_{hi.index}={hi.n} != m_{lo.index}={lo.m}"
                )
        object.__setattr__(self, "elements", elems)

    @property
    def q(self) -> int:
        return len(self.elements)

    def link(self, i: int) -> ElementalFunction:
        """Element i, 1-based."""
        if not 1 <= i <= self.q:
            raise IndexError(f"link index {i} out of range 1..{self.q}")
        return self.elements[i - 1]

    def n(self, i: int) -> int:
        """Input dimension of link i (columns of its Jacobian)."""
        return self.link(i).n

    def m(self, i: int) -> int:
        """Output dimension of link i (rows of its Jacobian)."""
        return self.link(i).m

    def edges(self, i: int) -> int:
        return self.link(i).edges

    def edge_sum(self, i: int, k: int) -> int:
        """Sum of edge counts over links i..k inclusive."""
        if not 1 <= i <= k <= self.q:
            raise IndexError(f"invalid edge_sum range ({i}, {k}) for q={self.q}")
        return sum(f.edges for f in self.elements[i - 1 : k])

    def to_text(self) -> str:
        """Serialize: header line "q <length>", then "index n m edges" per link."""
        lines = [f"q {self.q}"]
        lines += [f"{f.index} {f.n} {f.m} {f.edges}" for f in self.elements]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "JacobianChain":
        """Parse the serialization produced by :meth:`to_text`."""
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or rows[0][0] != "q" or len(rows[0]) != 2:
            raise ValueError('chain text must start with a header line "q <length>"')
        q = int(rows[0][1])
        if len(rows) - 1 != q:
            raise ValueError(f"header declares q={q} but {len(rows) - 1} links follow")
        elems = []
        for row in rows[1:]:
            if len(row) != 4:
                raise ValueError(f"link line must have 4 fields, got {row!r}")
            idx, n, m, edges = (int(x) for x in row)
            elems.append(ElementalFunction(index=idx, n=n, m=m, edges=edges))
        return cls(elems)


@dataclass(frozen=True)
class MachineConfig:
    """Execution environment: machine count, total memory and its model.

    ``memory_limit`` is the total tape memory, 0 meaning unlimited.  The
    memory model decides how the total is split: "distributed" gives
    every task a fixed per-machine share, "shared" lets a task's share
    grow with the number of machines granted to it.
    """

    machines: int
    memory_limit: int = 0
    memory_model: str = "distributed"

    def __post_init__(self) -> None:
        if self.machines < 1:
            raise ValueError(f"machines must be >= 1, got {self.machines}")
        if self.memory_limit < 0:
            raise ValueError(f"memory_limit must be >= 0, got {self.memory_limit}")
        if self.memory_model not in ("distributed", "shared"):
            raise ValueError(f"unknown memory model {self.memory_model!r}")


def accumulation_cost(f: ElementalFunction, limit: MemoryLimit = None) -> int:
    """fma cost of accumulating one elemental Jacobian.

    The cheaper of tangent (n sweeps) and adjoint (m sweeps) seeding is
    taken, except that adjoint mode needs a tape of `f.edges` persistent
    memory: when that exceeds the limit, tangent mode is forced.
    """
    if limit is not None and f.edges > limit:
        return f.edges * f.n
    return f.edges * min(f.n, f.m)


def multiply_cost(rows: int, inner: int, cols: int) -> int:
    """fma cost of a dense (rows x inner) by (inner x cols) product."""
    for name, v in (("rows", rows), ("inner", inner), ("cols", cols)):
        if v < 1:
            raise ValueError(f"{name} must be positive, got {v}")
    return rows * inner * cols


def edge_sum(chain: JacobianChain, i: int, k: int) -> int:
    """Sum of DAG edge counts over links i..k of the chain."""
    return chain.edge_sum(i, k)


def memory_limit_for(config: MachineConfig, t: int) -> MemoryLimit:
    """Effective tape memory for a task granted t of the configured machines.

    Distributed memory gives the fixed per-machine share total//machines;
    shared memory scales that share with t.  Unlimited stays unlimited.
    """
    if not 1 <= t <= config.machines:
        raise ValueError(f"t={t} out of range 1..{config.machines}")
    if config.memory_limit == 0:
        return None
    if config.memory_model == "shared":
        return (t * config.memory_limit) // config.machines
    return config.memory_limit // config.machines
