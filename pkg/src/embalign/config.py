"""Training configuration: defaults, key=value config files, flag overlay.

Precedence is flags over config file over defaults. ``config_lines`` echoes
the effective configuration so every run records what it actually used.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .exceptions import ConfigError


@dataclass
class TrainConfig:
    lam: float = 10000.0
    tau: float = 0.1
    k: int = 10
    m1_iters: int = 5
    hmm_iters: int = 5
    vocab_limit: int = 200000
    p0: float = 0.2
    max_jump: int = 7
    neighborhood: str = "own"           # own | cross
    enhance: bool = True                # use the prior when vectors are given
    enhance_initial: bool = False       # also update the uniform init table
    symmetrization: str = "grow-diag-final"  # intersect | union | grow-diag-final
    gold_indexing: str = "one"          # one | zero
    lowercase: bool = False             # lowercase corpus tokens at load
    lowercase_fallback: bool = False    # retry vector lookup lowercased

    def validate(self) -> None:
        if self.lam < 0:
            raise ConfigError(f"lambda must be >= 0, got {self.lam}")
        if self.tau <= 0:
            raise ConfigError(f"tau must be > 0, got {self.tau}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.m1_iters < 0 or self.hmm_iters < 0:
            raise ConfigError("iteration counts must be >= 0")
        if self.m1_iters + self.hmm_iters < 1:
            raise ConfigError("at least one EM iteration is required")
        if self.vocab_limit < 1:
            raise ConfigError(f"vocab_limit must be >= 1, got {self.vocab_limit}")
        if not 0.0 < self.p0 < 1.0:
            raise ConfigError(f"p0 must be in (0, 1), got {self.p0}")
        if self.max_jump < 1:
            raise ConfigError(f"max_jump must be >= 1, got {self.max_jump}")
        if self.neighborhood not in ("own", "cross"):
            raise ConfigError(f"neighborhood must be own|cross, got {self.neighborhood!r}")
        if self.symmetrization not in ("intersect", "union", "grow-diag-final"):
            raise ConfigError(
                "symmetrization must be intersect|union|grow-diag-final, "
                f"got {self.symmetrization!r}"
            )
        if self.gold_indexing not in ("one", "zero"):
            raise ConfigError(f"gold_indexing must be one|zero, got {self.gold_indexing!r}")


# file/flag key -> dataclass field ("lambda" is a Python keyword)
CONFIG_KEYS = {"lambda": "lam"}
CONFIG_KEYS.update({f.name: f.name for f in fields(TrainConfig) if f.name != "lam"})

_BOOL_FIELDS = {"enhance", "enhance_initial", "lowercase", "lowercase_fallback"}
_INT_FIELDS = {"k", "m1_iters", "hmm_iters", "vocab_limit", "max_jump"}
_FLOAT_FIELDS = {"lam", "tau", "p0"}


def _coerce(field_name: str, raw: str):
    try:
        if field_name in _BOOL_FIELDS:
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if field_name in _INT_FIELDS:
            return int(raw)
        if field_name in _FLOAT_FIELDS:
            return float(raw)
        return raw.strip()
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for config key {field_name}") from None


def load_config_file(path: str) -> dict[str, object]:
    """Parse a flat key=value file ('#' comments and blank lines ignored)."""
    values: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, raw = stripped.split("=", 1)
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            field_name = CONFIG_KEYS[key]
            values[field_name] = _coerce(field_name, raw)
    return values


def make_config(
    file_values: dict[str, object] | None = None,
    overrides: dict[str, object] | None = None,
) -> TrainConfig:
    """Defaults, overlaid by config-file values, overlaid by flag overrides."""
    cfg = TrainConfig()
    for source in (file_values or {}), (overrides or {}):
        for field_name, value in source.items():
            if value is None:
                continue
            setattr(cfg, field_name, value)
    cfg.validate()
    return cfg


def config_lines(cfg: TrainConfig) -> list[str]:
    """The effective configuration in config-file syntax."""
    names = {v: k for k, v in CONFIG_KEYS.items()}
    out = []
    for f in fields(TrainConfig):
        value = getattr(cfg, f.name)
        if isinstance(value, bool):
            value = str(value).lower()
        out.append(f"{names[f.name]}={value}")
    return out
