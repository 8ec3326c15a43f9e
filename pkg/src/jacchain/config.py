"""Configuration file parsing.

The format is one "key value..." line per setting, for example::

    length 10
    size_range 5 500
    dag_size_range 1000 100000
    available_threads 1
    available_memory 0
    matrix_free 1
    time_to_solve 5
    seed 2165743199

Instance keys (length, size_range, dag_size_range, seed) are required;
solver keys default to the values above.  Unknown and duplicate keys are
rejected with the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dp import Mode
from .generator import GeneratorConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ConfigFile:
    length: int
    size_range: tuple[int, int]
    dag_size_range: tuple[int, int]
    available_threads: int
    available_memory: int  # 0 means unlimited
    matrix_free: bool
    time_to_solve: int  # seconds; 0 means unlimited
    seed: int

    @property
    def mode(self) -> Mode:
        """Dense when matrix_free is off; otherwise the limited-memory
        variant (which degenerates to plain matrix-free when memory is
        unlimited)."""
        return Mode.LIMITED_MEMORY if self.matrix_free else Mode.DENSE

    def generator_config(self) -> GeneratorConfig:
        return GeneratorConfig(
            length=self.length,
            size_range=self.size_range,
            dag_size_range=self.dag_size_range,
            seed=self.seed,
        )


_KEY_ARITY = {
    "length": 1,
    "size_range": 2,
    "dag_size_range": 2,
    "available_threads": 1,
    "available_memory": 1,
    "matrix_free": 1,
    "time_to_solve": 1,
    "seed": 1,
}
_REQUIRED = ("length", "size_range", "dag_size_range", "seed")
_DEFAULTS = {
    "available_threads": (1,),
    "available_memory": (0,),
    "matrix_free": (1,),
    "time_to_solve": (5,),
}


def parse_config(text: str) -> ConfigFile:
    """Strict parse of config text; raises ConfigError with line numbers."""
    values: dict[str, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        key, args = fields[0], fields[1:]
        if key not in _KEY_ARITY:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if len(args) != _KEY_ARITY[key]:
            raise ConfigError(
                f"line {lineno}: key {key!r} takes {_KEY_ARITY[key]} value(s), got {len(args)}"
            )
        try:
            values[key] = tuple(int(a) for a in args)
        except ValueError:
            raise ConfigError(f"line {lineno}: key {key!r} needs integer values, got {args}") from None
    for key in _REQUIRED:
        if key not in values:
            raise ConfigError(f"missing key: {key}")
    for key, default in _DEFAULTS.items():
        values.setdefault(key, default)

    def one(key: str) -> int:
        return values[key][0]

    if one("matrix_free") not in (0, 1):
        raise ConfigError(f"matrix_free must be 0 or 1, got {one('matrix_free')}")
    for key in ("available_threads",):
        if one(key) < 1:
            raise ConfigError(f"{key} must be >= 1, got {one(key)}")
    for key in ("available_memory", "time_to_solve"):
        if one(key) < 0:
            raise ConfigError(f"{key} must be >= 0, got {one(key)}")
    cfg = ConfigFile(
        length=one("length"),
        size_range=values["size_range"],
        dag_size_range=values["dag_size_range"],
        available_threads=one("available_threads"),
        available_memory=one("available_memory"),
        matrix_free=bool(one("matrix_free")),
        time_to_solve=one("time_to_solve"),
        seed=one("seed"),
    )
    try:
        cfg.generator_config()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def load_config(path) -> ConfigFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
