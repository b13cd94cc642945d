"""Jacobi-type pencils ``(J3, J5, alpha, beta)`` and their coefficient sources.

``J3`` is a Jacobi matrix with diagonal ``b`` and positive off-diagonal ``a``;
``J5`` is a real symmetric five-diagonal matrix with diagonal ``alpha_seq``,
first off-diagonal ``beta_seq`` and positive second off-diagonal
``gamma_seq``.  All sequences are finite: entry ``k`` exists for
``k <= len(seq) - 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .numeric import F64, RATIONAL, Field, QuadField, field_for_mode

__all__ = [
    "CoefficientSource",
    "ConfigError",
    "JacobiPencil",
    "Violation",
    "from_oprl",
    "load_pencil",
    "pencil_from_config",
    "theta1",
    "validate_pencil",
]


class ConfigError(ValueError):
    """Malformed pencil configuration."""


SEQUENCE_NAMES = ("a", "b", "alpha_seq", "beta_seq", "gamma_seq")


@dataclass(frozen=True)
class JacobiPencil:
    a: tuple
    b: tuple
    alpha_seq: tuple
    beta_seq: tuple
    gamma_seq: tuple
    alpha: Any
    beta: Any
    field: Field = F64
    name: str = "pencil"
    origin: str = "explicit"

    @property
    def max_index(self) -> int:
        """Largest index for which every sequence has an entry."""
        return min(len(getattr(self, s)) for s in SEQUENCE_NAMES) - 1

    # Boundary conventions: entries with negative index are zero.
    def a_at(self, k: int):
        return self.a[k] if k >= 0 else self.field.zero

    def b_at(self, k: int):
        return self.b[k] if k >= 0 else self.field.zero

    def alpha_at(self, k: int):
        return self.alpha_seq[k] if k >= 0 else self.field.zero

    def beta_at(self, k: int):
        return self.beta_seq[k] if k >= 0 else self.field.zero

    def gamma_at(self, k: int):
        return self.gamma_seq[k] if k >= 0 else self.field.zero

    def require(self, index: int, what: str = "operation") -> None:
        if index > self.max_index:
            raise IndexError(
                f"{what} needs pencil entries up to index {index}, "
                f"but {self.name} only defines up to {self.max_index}"
            )

    def j3_matrix(self, size: int) -> list[list]:
        """Dense ``size x size`` truncation of J3."""
        z = self.field.zero
        m = [[z] * size for _ in range(size)]
        for i in range(size):
            m[i][i] = self.b[i]
            if i + 1 < size:
                m[i][i + 1] = m[i + 1][i] = self.a[i]
        return m

    def j5_matrix(self, size: int) -> list[list]:
        """Dense ``size x size`` truncation of J5."""
        z = self.field.zero
        m = [[z] * size for _ in range(size)]
        for i in range(size):
            m[i][i] = self.alpha_seq[i]
            if i + 1 < size:
                m[i][i + 1] = m[i + 1][i] = self.beta_seq[i]
            if i + 2 < size:
                m[i][i + 2] = m[i + 2][i] = self.gamma_seq[i]
        return m

    def truncated(self, max_index: int) -> JacobiPencil:
        kw = {s: getattr(self, s)[: max_index + 1] for s in SEQUENCE_NAMES}
        return JacobiPencil(
            alpha=self.alpha, beta=self.beta, field=self.field, name=self.name,
            origin=self.origin, **kw
        )


@dataclass(frozen=True)
class Violation:
    sequence: str
    index: int | None
    constraint: str

    def __str__(self):
        where = self.sequence if self.index is None else f"{self.sequence}[{self.index}]"
        return f"{where}: {self.constraint}"


def validate_pencil(p: JacobiPencil) -> list[Violation]:
    """Check the defining constraints; an empty list means the pencil is valid.

    Positivity is strict in every mode (no tolerance for floats).
    """
    out: list[Violation] = []
    f = p.field
    for name in SEQUENCE_NAMES:
        seq = getattr(p, name)
        if len(seq) == 0:
            out.append(Violation(name, None, "sequence is empty"))
        if f.exact:
            for k, v in enumerate(seq):
                try:
                    f.coerce(v)
                except (TypeError, ValueError):
                    out.append(Violation(name, k, f"entry not in field {f.name}"))
    for name in ("a", "gamma_seq"):
        for k, v in enumerate(getattr(p, name)):
            if not f.is_positive(v):
                out.append(Violation(name, k, "must be > 0"))
    if not f.is_positive(p.alpha):
        out.append(Violation("alpha", None, "must be > 0"))
    if f.exact:
        try:
            f.coerce(p.beta)
        except (TypeError, ValueError):
            out.append(Violation("beta", None, f"not in field {f.name}"))
    return out


def from_oprl(a: Sequence, b: Sequence, field: Field = RATIONAL, name: str = "oprl") -> JacobiPencil:
    """Pencil of a classical orthonormal system: ``J5 = J3**2``.

    ``p_1 = (x - b_0) / a_0`` so ``alpha = 1/a_0`` and ``beta = -b_0/a_0``.
    With ``L = min(len(a), len(b))`` the J5 bands are defined up to index
    ``L - 2`` (they need ``a_{n+1}`` and ``b_{n+1}``).
    """
    if len(a) == 0 or len(b) == 0:
        raise ValueError("from_oprl needs nonempty a and b")
    a = tuple(field.coerce(x) for x in a)
    b = tuple(field.coerce(x) for x in b)
    for k, v in enumerate(a):
        if not field.is_positive(v):
            raise ValueError(f"a[{k}] must be > 0")
    L = min(len(a), len(b))
    z = field.zero
    if L < 2:
        raise ValueError("from_oprl needs at least two recurrence coefficients")
    n_bands = L - 1
    alpha_seq, beta_seq, gamma_seq = [], [], []
    for n in range(n_bands):
        prev = a[n - 1] if n >= 1 else z
        alpha_seq.append(prev * prev + b[n] * b[n] + a[n] * a[n])
        beta_seq.append(a[n] * (b[n] + b[n + 1]))
        gamma_seq.append(a[n] * a[n + 1])
    return JacobiPencil(
        a=a[:n_bands],
        b=b[:n_bands],
        alpha_seq=tuple(alpha_seq),
        beta_seq=tuple(beta_seq),
        gamma_seq=tuple(gamma_seq),
        alpha=field.one / a[0],
        beta=-b[0] / a[0],
        field=field,
        name=name,
        origin="oprl_square",
    )


def theta1(max_index: int = 64, field: Field | None = None) -> JacobiPencil:
    """Constant-coefficient pencil with ``a_k = sqrt2, b_k = 2, alpha_n = beta_n = 0, gamma_n = 1``,
    ``alpha = beta = sqrt2``."""
    if field is None:
        field = QuadField(2)
    if field is F64:
        r2 = 2.0 ** 0.5
    elif isinstance(field, QuadField):
        if field.d != 2:
            raise ValueError(f"theta1 needs sqrt(2); Q(sqrt({field.d})) cannot represent it")
        r2 = field.root
    else:
        raise ValueError(f"theta1 cannot be represented exactly in {field.name} mode")
    n = max_index + 1
    two, zero, one = field.coerce(2), field.zero, field.one
    return JacobiPencil(
        a=(r2,) * n,
        b=(two,) * n,
        alpha_seq=(zero,) * n,
        beta_seq=(zero,) * n,
        gamma_seq=(one,) * n,
        alpha=r2,
        beta=r2,
        field=field,
        name="theta1",
        origin="theta1",
    )


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientSource:
    """Rule producing the entries of one coefficient sequence.

    kinds: ``constant`` (payload ``value``), ``list`` (``values``),
    ``eventually_periodic`` (``prefix`` then ``period`` repeated).
    """

    kind: str
    payload: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj) -> CoefficientSource:
        if isinstance(obj, (str, int, float)):
            return cls("constant", {"value": obj})
        if isinstance(obj, list):
            return cls("list", {"values": obj})
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ConfigError(f"coefficient source must be an object with 'kind': {obj!r}")
        kind = obj["kind"].replace("-", "_")
        payload = {k: v for k, v in obj.items() if k != "kind"}
        if kind == "explicit_list":
            kind = "list"
        if kind == "constant" and "value" not in payload:
            raise ConfigError("constant source needs 'value'")
        if kind == "list" and "values" not in payload:
            raise ConfigError("list source needs 'values'")
        if kind == "eventually_periodic" and not payload.get("period"):
            raise ConfigError("eventually_periodic source needs a nonempty 'period'")
        if kind not in ("constant", "list", "eventually_periodic"):
            raise ConfigError(f"unknown coefficient source kind {obj['kind']!r}")
        return cls(kind, payload)

    def available(self) -> int | None:
        """Number of entries the source can produce (None means unbounded)."""
        if self.kind == "list":
            return len(self.payload["values"])
        return None

    def take(self, count: int, fld: Field) -> tuple:
        if self.kind == "constant":
            v = fld.coerce(_scalar_text(self.payload["value"]))
            return (v,) * count
        if self.kind == "list":
            vals = self.payload["values"]
            if len(vals) < count:
                raise ConfigError(f"list source has {len(vals)} entries, {count} needed")
            return tuple(fld.coerce(_scalar_text(v)) for v in vals[:count])
        prefix = [fld.coerce(_scalar_text(v)) for v in self.payload.get("prefix", [])]
        period = [fld.coerce(_scalar_text(v)) for v in self.payload["period"]]
        out = prefix[:count]
        k = 0
        while len(out) < count:
            out.append(period[k % len(period)])
            k += 1
        return tuple(out)


def _scalar_text(v):
    if isinstance(v, bool):
        raise ConfigError("booleans are not scalars")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return v


def _read_field(cfg: dict, default: Field) -> Field:
    mode = cfg.get("scalar_mode")
    if mode is None:
        return default
    try:
        if mode == "quadext" and "radicand" not in cfg:
            raise ConfigError("scalar_mode 'quadext' requires 'radicand'")
        return field_for_mode(mode, cfg.get("radicand"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def pencil_from_config(cfg: dict, max_index: int, field: Field | None = None) -> JacobiPencil:
    """Build a pencil with sequences defined up to ``max_index``.

    ``field`` overrides the config's ``scalar_mode``.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("pencil config must be a JSON object")
    builtin = cfg.get("builtin")
    try:
        if builtin == "theta1":
            fld = field or _read_field(cfg, QuadField(2))
            return theta1(max_index, fld)
        if builtin in ("oprl_square", "oprl-square"):
            fld = field or _read_field(cfg, RATIONAL)
            n = max_index + 2
            a = CoefficientSource.from_json(cfg["a"]).take(n, fld)
            b = CoefficientSource.from_json(cfg["b"]).take(n, fld)
            return from_oprl(a, b, fld, name=cfg.get("name", "oprl"))
        if builtin is not None:
            raise ConfigError(f"unknown builtin {builtin!r}")
        fld = field or _read_field(cfg, F64)
        n = max_index + 1
        seqs = {}
        for s in SEQUENCE_NAMES:
            if s not in cfg:
                raise ConfigError(f"missing coefficient sequence {s!r}")
            seqs[s] = CoefficientSource.from_json(cfg[s]).take(n, fld)
        for s in ("alpha", "beta"):
            if s not in cfg:
                raise ConfigError(f"missing scalar {s!r}")
        return JacobiPencil(
            alpha=fld.coerce(_scalar_text(cfg["alpha"])),
            beta=fld.coerce(_scalar_text(cfg["beta"])),
            field=fld,
            name=cfg.get("name", "pencil"),
            **seqs,
        )
    except KeyError as exc:
        raise ConfigError(f"missing key {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_pencil(path: str | Path, max_index: int, field: Field | None = None) -> JacobiPencil:
    try:
        cfg = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return pencil_from_config(cfg, max_index, field)
