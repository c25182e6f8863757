"""Experiment sweeps: reference bounds, configs, and deterministic reports.

The bounds below are the reference envelopes with every o(1) exponent
set to zero, so sweeps assert bounded *ratios*, never ratio <= 1:

  interval, absolute average D (prime modulus):
      A X^(1/2) p^(-1/2) + A^(3/2) X^(1/2) p^(-5/8)
        + A^(1/2) X^(1/2) p^(-1/8) + A^(5/6) X^(5/18) p^(11/72),
      stated for A <= p and X >= p >= X^(4/7);

  interval, signed average E (any modulus):
      A X^(1/2) q^(-1/2) + A^(1/8) X^(1/4) q^(1/2) + A^(1/2) X^(1/4) q^(1/4),
      stated for A <= q and X >= q >= X^(19/31);

  arbitrary set, absolute average D (prime modulus):
      A^(3/4) X^(1/4) p^(1/4) + A^(2/3) X^(1/3),
      an improvement over the trivial bounds exactly when
      p <= min{A X^(1/3-eps), X^(1-eps)/A};

  exceptional-set cardinality:  max{p X^(-1/3+4 kappa), X^(3 kappa)}.

Each sweep row is labeled in/out of regime for every bound; nothing is
dropped.  Reports are byte-deterministic: sorted grids, a seeded PCG64
generator for random sets, %.12g float formatting, and the seed recorded
in every header.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .arith import is_prime
from .errors import ConfigInvalid
from .mainterm import error_vector, exceptional_set, interval_residues

REPORT_FLOAT_FORMAT = "%.12g"


# ---------------------------------------------------------------- bounds

def interval_abs_error_bound(A: int, X: int, p: int) -> float:
    """Reference envelope for D over a length-A interval, prime modulus."""
    return (
        A * X**0.5 * p**-0.5
        + A**1.5 * X**0.5 * p**-0.625
        + A**0.5 * X**0.5 * p**-0.125
        + A ** (5 / 6) * X ** (5 / 18) * p ** (11 / 72)
    )


def interval_abs_regime(A: int, X: int, p: int) -> bool:
    return A <= p and X >= p >= X ** (4 / 7) and is_prime(p)


def interval_signed_error_bound(A: int, X: int, q: int) -> float:
    """Reference envelope for |E| over a length-A interval, any modulus."""
    return A * X**0.5 * q**-0.5 + A**0.125 * X**0.25 * q**0.5 + A**0.5 * X**0.25 * q**0.25


def interval_signed_regime(A: int, X: int, q: int) -> bool:
    return A <= q and X >= q >= X ** (19 / 31)


def set_abs_error_bound(A: int, X: int, p: int) -> float:
    """Reference envelope for D over an arbitrary A-element set, prime p."""
    return A**0.75 * X**0.25 * p**0.25 + A ** (2 / 3) * X ** (1 / 3)


def set_abs_regime(A: int, X: int, p: int, eps: float = 0.05) -> bool:
    """The range where the set bound beats both trivial estimates."""
    return is_prime(p) and p <= min(A * X ** (1 / 3 - eps), X ** (1 - eps) / A)


def exceptional_count_bound(X: int, p: int, kappa: float) -> float:
    return max(p * X ** (-1 / 3 + 4 * kappa), X ** (3 * kappa))


# ------------------------------------------------------------- Y policies

def choose_y(policy: str, X: int, q: int, A: int | None = None, eps: float = 0.05,
             value: float | None = None) -> tuple[float, bool]:
    """Y for the transform-side machinery, clamped into [1, X/2].

    Policies: 'fixed' (explicit value), 'sqrt_qx' (sqrt(q X^(1+eps))),
    'interval_abs' (the three-way max used for the interval-D bound),
    'set_abs' (X^(1/3) p / A^(1/3)).  Returns (Y, clamped?).
    """
    if policy == "fixed":
        if value is None:
            raise ConfigInvalid("y_policy.value: required when kind is 'fixed'")
        y = float(value)
    elif policy == "sqrt_qx":
        y = math.sqrt(q * X ** (1.0 + eps))
    elif policy == "interval_abs":
        if A is None:
            raise ConfigInvalid("y_policy: 'interval_abs' needs a set length A")
        y = max(
            A**0.5 * X ** (0.5 + eps / 2) * q**0.375,
            A**-0.5 * X ** (0.5 + eps / 2) * q**0.875,
            A ** (-1 / 6) * X ** (5 / 18) * q ** (83 / 72),
        )
    elif policy == "set_abs":
        if A is None:
            raise ConfigInvalid("y_policy: 'set_abs' needs a set length A")
        y = X ** (1 / 3) * q / A ** (1 / 3)
    else:
        raise ConfigInvalid(f"y_policy.kind: unknown policy {policy!r}")
    clamped = not 1.0 <= y <= X / 2.0
    return min(max(y, 1.0), X / 2.0), clamped


# ---------------------------------------------------------------- config

_EXPERIMENTS = ("interval_abs", "interval_signed", "set_abs", "exceptional")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    x_grid: tuple[int, ...]
    modulus_grid: tuple[int, ...]
    set_kind: str = "interval"  # interval | random
    lengths: tuple[Any, ...] = ()  # ints, or "sqrt" for floor(sqrt(q))
    offsets: tuple[int, ...] = (0,)
    kappas: tuple[float, ...] = ()
    seed: int = 0
    eps: float = 0.05
    thresholds: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in _EXPERIMENTS:
            raise ConfigInvalid(f"experiment: expected one of {_EXPERIMENTS}, got {self.experiment!r}")
        if not self.x_grid:
            raise ConfigInvalid("x_grid: must be nonempty")
        if not self.modulus_grid:
            raise ConfigInvalid("modulus_grid: must be nonempty")
        for X in self.x_grid:
            for q in self.modulus_grid:
                if q > X:
                    raise ConfigInvalid(f"grid: modulus {q} exceeds X {X}")
                if q < 2:
                    raise ConfigInvalid(f"modulus_grid: need q >= 2, got {q}")
        if self.experiment == "exceptional":
            if not self.kappas:
                raise ConfigInvalid("kappas: required for the exceptional experiment")
            for k in self.kappas:
                if not 0 < k < 1 / 3:
                    raise ConfigInvalid(f"kappas: need values in (0, 1/3), got {k}")
        elif not self.lengths:
            raise ConfigInvalid("lengths: must be nonempty")
        if self.set_kind not in ("interval", "random"):
            raise ConfigInvalid(f"set_kind: expected interval or random, got {self.set_kind!r}")
        if self.experiment == "exceptional":
            allowed = {"ratio_exceptional"}
        else:
            allowed = {"ratio_interval_abs", "ratio_interval_signed", "ratio_set_abs"}
        for name in self.thresholds:
            if name.removeprefix("max_") not in allowed:
                raise ConfigInvalid(
                    f"thresholds: unknown key {name!r}; expected one of {sorted(allowed)}"
                )

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"{path}:{exc.lineno}: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise ConfigInvalid("config root must be an object")
        known = {
            "experiment", "x_grid", "modulus_grid", "sets", "kappas",
            "seed", "eps", "thresholds",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        sets = raw.get("sets", {})
        if not isinstance(sets, dict):
            raise ConfigInvalid("sets: must be an object")
        try:
            return cls(
                experiment=raw.get("experiment", ""),
                x_grid=tuple(int(x) for x in raw.get("x_grid", ())),
                modulus_grid=tuple(int(q) for q in raw.get("modulus_grid", ())),
                set_kind=sets.get("kind", "interval"),
                lengths=tuple(sets.get("lengths", ())),
                offsets=tuple(int(b) for b in sets.get("offsets", (0,))),
                kappas=tuple(float(k) for k in raw.get("kappas", ())),
                seed=int(raw.get("seed", 0)),
                eps=float(raw.get("eps", 0.05)),
                thresholds=dict(raw.get("thresholds", {})),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigInvalid):
                raise
            raise ConfigInvalid(f"malformed config field: {exc}") from exc


def _resolve_length(spec: Any, q: int) -> int:
    if spec == "sqrt":
        return max(1, math.isqrt(q))
    A = int(spec)
    if A < 1:
        raise ConfigInvalid(f"lengths: need positive lengths, got {A}")
    return A


# ----------------------------------------------------------------- sweep

@dataclass(frozen=True)
class SweepResult:
    rows: list[dict]
    summary: dict
    paths: tuple[str, ...]
    breaches: tuple[str, ...]


def _format_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return REPORT_FLOAT_FORMAT % v
    return str(v)


def emit_report(rows: list[dict], fmt: str, path: str | Path, seed: int | None = None) -> str:
    """Write rows deterministically; returns the path written."""
    path = Path(path)
    if fmt == "csv":
        lines = []
        if seed is not None:
            lines.append(f"# seed={seed}")
        if rows:
            keys = list(rows[0].keys())
            lines.append(",".join(keys))
            for row in rows:
                lines.append(",".join(_format_value(row[k]) for k in keys))
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        doc: dict[str, Any] = {"rows": rows}
        if seed is not None:
            doc["seed"] = seed
        path.write_text(_json_dumps(doc) + "\n")
    else:
        raise ConfigInvalid(f"format: expected csv or json, got {fmt!r}")
    return str(path)


def _json_default(v):
    raise TypeError(f"not JSON serializable: {type(v)}")


def _json_normalize(v):
    if isinstance(v, dict):
        return {k: _json_normalize(x) for k, x in sorted(v.items())}
    if isinstance(v, (list, tuple)):
        return [_json_normalize(x) for x in v]
    if isinstance(v, bool):
        return v
    if isinstance(v, float):
        return float(REPORT_FLOAT_FORMAT % v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(REPORT_FLOAT_FORMAT % float(v))
    return v


def _json_dumps(doc) -> str:
    return json.dumps(_json_normalize(doc), sort_keys=True, indent=1, default=_json_default)


def _interval_rows(cfg: ExperimentConfig, rng: np.random.Generator) -> list[dict]:
    rows = []
    for X in sorted(cfg.x_grid):
        for q in sorted(cfg.modulus_grid):
            R = error_vector(X, q).R
            units = [a for a in range(1, q) if math.gcd(a, q) == 1]
            for spec in cfg.lengths:
                A_req = _resolve_length(spec, q)
                for B in sorted(cfg.offsets):
                    if cfg.set_kind == "interval":
                        residues, dropped = interval_residues(q, B, A_req, strict=False)
                        descriptor = f"interval({B},{A_req})"
                    else:
                        size = min(A_req, len(units))
                        residues = sorted(
                            int(a) for a in rng.choice(np.asarray(units), size=size, replace=False)
                        )
                        dropped = 0
                        descriptor = f"random({size})"
                    vals = [float(R[a]) for a in residues]
                    D = math.fsum(abs(v) for v in vals)
                    E = math.fsum(vals)
                    A_eff = len(residues)
                    prime = is_prime(q)
                    r11 = interval_abs_error_bound(A_eff, X, q) if A_eff else float("nan")
                    r12 = interval_signed_error_bound(A_eff, X, q) if A_eff else float("nan")
                    r13 = set_abs_error_bound(A_eff, X, q) if A_eff else float("nan")
                    rows.append({
                        "experiment": cfg.experiment,
                        "X": X,
                        "q": q,
                        "prime": prime,
                        "set": descriptor,
                        "B": B,
                        "A": A_eff,
                        "dropped": dropped,
                        "D": D,
                        "E": E,
                        "interval_set": cfg.set_kind == "interval",
                        "rhs_interval_abs": r11,
                        "ratio_interval_abs": D / r11 if A_eff else float("nan"),
                        "in_regime_interval_abs": bool(
                            A_eff and cfg.set_kind == "interval" and interval_abs_regime(A_eff, X, q)
                        ),
                        "rhs_interval_signed": r12,
                        "ratio_interval_signed": abs(E) / r12 if A_eff else float("nan"),
                        "in_regime_interval_signed": bool(
                            A_eff and cfg.set_kind == "interval"
                            and interval_signed_regime(A_eff, X, q)
                        ),
                        "rhs_set_abs": r13,
                        "ratio_set_abs": D / r13 if A_eff else float("nan"),
                        "in_regime_set_abs": bool(
                            A_eff and prime and set_abs_regime(A_eff, X, q, cfg.eps)
                        ),
                    })
    return rows


def _exceptional_rows(cfg: ExperimentConfig) -> list[dict]:
    rows = []
    for X in sorted(cfg.x_grid):
        for p in sorted(cfg.modulus_grid):
            if not is_prime(p):
                raise ConfigInvalid(f"modulus_grid: exceptional sweep needs primes, got {p}")
            for kappa in sorted(cfg.kappas):
                members = exceptional_set(X, p, kappa)
                rhs = exceptional_count_bound(X, p, kappa)
                rows.append({
                    "experiment": "exceptional",
                    "X": X,
                    "p": p,
                    "kappa": kappa,
                    "threshold": X ** (1 / 3 - kappa),
                    "count": len(members),
                    "rhs_exceptional": rhs,
                    "ratio_exceptional": len(members) / rhs,
                    "in_regime_exceptional": True,
                })
    return rows


def run_theorem_sweep(cfg: ExperimentConfig, out_dir: str | Path, fmt: str = "csv") -> SweepResult:
    """Measure D/E/#A_kappa over the grid, emit rows plus a summary file."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(np.random.PCG64(cfg.seed))
    if cfg.experiment == "exceptional":
        rows = _exceptional_rows(cfg)
    else:
        rows = _interval_rows(cfg, rng)

    ratio_keys = [k for k in (rows[0].keys() if rows else []) if k.startswith("ratio_")]
    summary: dict[str, Any] = {"experiment": cfg.experiment, "seed": cfg.seed, "rows": len(rows)}
    breaches: list[str] = []
    for key in ratio_keys:
        regime_key = "in_regime_" + key.removeprefix("ratio_")
        in_rows = [r[key] for r in rows if r.get(regime_key) and math.isfinite(r[key])]
        all_rows = [r[key] for r in rows if math.isfinite(r[key])]
        summary["max_" + key] = max(all_rows) if all_rows else None
        summary["max_" + key + "_in_regime"] = max(in_rows) if in_rows else None
        limit = cfg.thresholds.get("max_" + key, cfg.thresholds.get(key))
        if limit is not None and in_rows and max(in_rows) > limit:
            breaches.append(f"max_{key}={max(in_rows):.6g} exceeds threshold {limit}")
    summary["breaches"] = breaches

    rows_path = out_dir / f"sweep_{cfg.experiment}.{fmt}"
    emit_report(rows, fmt, rows_path, seed=cfg.seed)
    summary_path = out_dir / f"sweep_{cfg.experiment}_summary.json"
    summary_path.write_text(_json_dumps(summary) + "\n")
    return SweepResult(
        rows=rows,
        summary=summary,
        paths=(str(rows_path), str(summary_path)),
        breaches=tuple(breaches),
    )
