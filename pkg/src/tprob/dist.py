"""Finite sub-distributions over terms with exact rational weights.

A ``Dist`` stores strictly positive weights plus a ``residual``: mass that a
truncated computation has not resolved.  Residual is an error bar, never a
value: the true weight of ``t`` lies in ``[d[t], d[t] + residual]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from .syntax import Term, as_nat, is_value, print_term

Prob = Fraction

ZERO_P = Fraction(0)
ONE_P = Fraction(1)


def parse_prob(text: str) -> Fraction:
    """Accept ``p/q``, decimals, and powers such as ``2^-16``."""
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return Fraction(int(base)) ** int(exp)
    return Fraction(text)


def format_prob(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


@dataclass(frozen=True)
class Dist:
    support: Mapping[Term, Fraction] = field(default_factory=dict)
    residual: Fraction = ZERO_P

    def __post_init__(self) -> None:
        if any(w <= 0 for w in self.support.values()):
            object.__setattr__(self, "support", {t: w for t, w in self.support.items() if w > 0})
        if self.residual < 0:
            raise ValueError("negative residual")

    # mapping-like access
    def __getitem__(self, t: Term) -> Fraction:
        return self.support.get(t, ZERO_P)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.support)

    def __len__(self) -> int:
        return len(self.support)

    def items(self):
        return self.support.items()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dist):
            return NotImplemented
        return dict(self.support) == dict(other.support) and self.residual == other.residual

    __hash__ = None  # type: ignore[assignment]

    def norm(self) -> Fraction:
        return sum(self.support.values(), ZERO_P)

    def total(self) -> Fraction:
        return self.norm() + self.residual

    def by_nat(self) -> dict[int, Fraction]:
        """Weights keyed by numeral; non-numeral support is an error."""
        out: dict[int, Fraction] = {}
        for t, w in self.support.items():
            k = as_nat(t)
            if k is None:
                raise ValueError(f"not a numeral: {print_term(t)}")
            out[k] = out.get(k, ZERO_P) + w
        return out

    def to_json(self) -> dict:
        rows = sorted(self.support.items(), key=lambda kv: _sort_key(kv[0]))
        return {
            "support": [{"term": print_term(t), "nat": as_nat(t), "prob": format_prob(w)}
                        for t, w in rows],
            "residual": format_prob(self.residual),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _sort_key(t: Term) -> tuple:
    k = as_nat(t)
    return (0, k, "") if k is not None else (1, 0, print_term(t))


def dirac(t: Term) -> Dist:
    return Dist({t: ONE_P})


def from_weights(pairs: Iterable[tuple[Term, Fraction]], residual: Fraction = ZERO_P) -> Dist:
    acc: dict[Term, Fraction] = {}
    for t, w in pairs:
        if w:
            acc[t] = acc.get(t, ZERO_P) + w
    return Dist(acc, residual)


def from_nats(weights: Mapping[int, Fraction], residual: Fraction = ZERO_P) -> Dist:
    from .syntax import Num

    return Dist({Num(k): Fraction(w) for k, w in weights.items() if w}, Fraction(residual))


def bind_integral(d: Dist, k: Callable[[Term], Dist]) -> Dist:
    acc: dict[Term, Fraction] = {}
    residual = d.residual
    for t, w in d.support.items():
        sub = k(t)
        residual += w * sub.residual
        for u, v in sub.support.items():
            acc[u] = acc.get(u, ZERO_P) + w * v
    return Dist(acc, residual)


def norm(d: Dist) -> Fraction:
    return d.norm()


def tv_distance(d1: Dist, d2: Dist) -> Fraction:
    """Half the L1 distance, with both residuals counted as pure discrepancy."""
    keys = set(d1.support) | set(d2.support)
    diff = sum((abs(d1[t] - d2[t]) for t in keys), ZERO_P)
    return (diff + d1.residual + d2.residual) / 2


def l1_distance(d1: Dist, d2: Dist) -> Fraction:
    keys = set(d1.support) | set(d2.support)
    return sum((abs(d1[t] - d2[t]) for t in keys), ZERO_P)


def supp_V(d: Dist) -> set[Term]:
    return {t for t in d.support if is_value(t)}


def supp_R(d: Dist) -> set[Term]:
    return {t for t in d.support if not is_value(t)}


def is_dyadic(p: Fraction) -> bool:
    q = p.denominator
    return q & (q - 1) == 0
