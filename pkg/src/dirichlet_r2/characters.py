"""Dirichlet characters modulo k: construction from the structure of (Z/kZ)*,
conductor and primitivity, Gauss sums and the autocorrelation g(r).

A character is stored exactly: each unit residue n carries an integer
``numerator`` with ``chi(n) = exp(2 pi i numerator / exponent)``, where
``exponent`` is the exponent of the unit group. Complex values are a cached
view of that table.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .arith import factorize, totient

MAX_MODULUS = 10**6


class NonPrimitiveWarning(UserWarning):
    """An identity that needs a primitive character was applied to an imprimitive one."""


def _primitive_root(q: int, p: int) -> int:
    """Smallest primitive root modulo the odd prime power q = p^e."""
    order = totient(q)
    ell = factorize(order).primes
    for g in range(2, q):
        if g % p and all(pow(g, order // l, q) != 1 for l in ell):
            return g
    raise ArithmeticError(f"no primitive root mod {q}")


@dataclass(frozen=True)
class _Component:
    q: int  # prime power the component lives on
    generator: int  # generator modulo q
    order: int
    lifted: int  # generator lifted to Z/kZ by CRT, 1 on the other prime powers
    dlog: np.ndarray = field(repr=False)  # dlog[n mod q], -1 off the units


def _lift(g: int, q: int, k: int) -> int:
    rest = k // q
    if rest == 1:
        return g % k
    # x = g mod q, x = 1 mod rest
    return (g * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % k


def _cyclic_dlog(q: int, g: int, order: int) -> np.ndarray:
    table = np.full(q, -1, dtype=np.int64)
    x = 1
    for j in range(order):
        table[x] = j
        x = x * g % q
    return table


@lru_cache(maxsize=64)
def character_group(k: int) -> "CharacterGroup":
    return CharacterGroup(k)


class CharacterGroup:
    """Generators and discrete-log tables for (Z/kZ)*."""

    def __init__(self, k: int):
        if not 1 <= k <= MAX_MODULUS:
            raise ValueError(f"modulus must lie in [1, {MAX_MODULUS}], got {k}")
        self.modulus = k
        comps: list[_Component] = []
        for p, e in factorize(k).factors:
            q = p**e
            if p == 2:
                if e == 1:
                    continue
                # -1 generates the order-2 part
                sign = np.full(q, -1, dtype=np.int64)
                sign[1::4] = 0
                sign[3::4] = 1
                comps.append(_Component(q, q - 1, 2, _lift(q - 1, q, k), sign))
                if e >= 3:
                    order = q // 4
                    five = _cyclic_dlog(q, 5, order)
                    # n = (-1)^a 5^b: b = dlog_5(n * (-1)^a)
                    dl = np.full(q, -1, dtype=np.int64)
                    odd = np.arange(1, q, 2)
                    folded = np.where(odd % 4 == 1, odd, q - odd)
                    dl[odd] = five[folded]
                    comps.append(_Component(q, 5, order, _lift(5, q, k), dl))
            else:
                g = _primitive_root(q, p)
                order = q - q // p
                comps.append(_Component(q, g, order, _lift(g, q, k), _cyclic_dlog(q, g, order)))
        self.components = tuple(comps)
        self.orders = tuple(c.order for c in comps)
        self.exponent = math.lcm(*self.orders) if comps else 1
        residues = np.arange(k)
        self.is_unit = np.gcd(residues, k) == 1
        # logs[i, n] = discrete log of n in component i
        self.logs = np.stack([c.dlog[residues % c.q] for c in comps]) if comps else np.zeros((0, k), np.int64)

    @property
    def order(self) -> int:
        return int(self.is_unit.sum())

    def labels(self):
        return itertools.product(*(range(o) for o in self.orders))


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """Character mod ``modulus`` labelled by its exponent vector on the
    canonical generators: ``chi(g_i) = exp(2 pi i label[i] / order_i)``."""

    modulus: int
    label: tuple[int, ...]

    def __post_init__(self):
        grp = character_group(self.modulus)
        if len(self.label) != len(grp.orders) or any(not 0 <= a < o for a, o in zip(self.label, grp.orders)):
            raise ValueError(f"label {self.label} invalid for modulus {self.modulus} (orders {grp.orders})")

    @property
    def group(self) -> CharacterGroup:
        return character_group(self.modulus)

    @property
    def exponent(self) -> int:
        return self.group.exponent

    @cached_property
    def numerators(self) -> np.ndarray:
        """``chi(n) = exp(2 pi i num[n] / exponent)``; -1 marks chi(n) = 0."""
        grp = self.group
        e = grp.exponent
        weights = np.array([a * (e // o) for a, o in zip(self.label, grp.orders)], dtype=np.int64)
        num = (weights @ grp.logs) % e if weights.size else np.zeros(self.modulus, np.int64)
        num = np.where(grp.is_unit, num, -1)
        num.setflags(write=False)
        return num

    @cached_property
    def values(self) -> np.ndarray:
        num = self.numerators
        vals = np.exp(2j * np.pi * np.where(num >= 0, num, 0) / self.exponent)
        # snap components that are integers up to rounding (1, -1, i, ...)
        re, im = vals.real.copy(), vals.imag.copy()
        for part in (re, im):
            snap = np.abs(part - np.round(part)) < 1e-15
            part[snap] = np.round(part[snap])
        vals = re + 1j * im
        vals[num < 0] = 0
        vals.setflags(write=False)
        return vals

    def __call__(self, n):
        return self.values[np.asarray(n) % self.modulus]

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and (self.modulus, self.label) == (other.modulus, other.label)

    def __hash__(self):
        return hash((self.modulus, self.label))

    def __repr__(self):
        return f"DirichletCharacter(modulus={self.modulus}, label={self.label})"

    @property
    def label_str(self) -> str:
        return ",".join(map(str, self.label))

    @property
    def is_principal(self) -> bool:
        return not any(self.label)

    @property
    def is_real(self) -> bool:
        num = self.numerators
        return bool(np.all((num < 0) | (2 * num % self.exponent == 0)))

    @cached_property
    def parity(self) -> int:
        """0 if chi(-1) = 1, else 1."""
        return 0 if self.numerators[(self.modulus - 1) % self.modulus] == 0 else 1

    @cached_property
    def conductor(self) -> int:
        return conductor(self)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple((-a) % o for a, o in zip(self.label, self.group.orders)))

    def order(self) -> int:
        num = self.numerators
        return self.exponent // math.gcd(self.exponent, *num[num >= 0].tolist())

    def induce(self, modulus: int) -> "DirichletCharacter":
        """The character mod ``modulus`` (a multiple of ours) induced by this one."""
        if modulus % self.modulus:
            raise ValueError(f"{modulus} is not a multiple of {self.modulus}")
        n = np.arange(modulus)
        target = np.where(np.gcd(n, modulus) == 1, self.numerators[n % self.modulus], -1)
        return character_from_numerators(modulus, target, self.exponent)

    def to_dict(self) -> dict:
        e = self.exponent
        values = []
        for v in self.numerators.tolist():
            if v < 0:
                values.append(None)
            else:
                g = math.gcd(v, e)
                values.append([v // g, e // g])
        return {
            "modulus": self.modulus,
            "conductor": self.conductor,
            "parity": self.parity,
            "label": list(self.label),
            "values": values,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "DirichletCharacter":
        chi = cls(int(data["modulus"]), tuple(int(a) for a in data["label"]))
        if "values" in data:
            num = chi.numerators
            for n, v in enumerate(data["values"]):
                ok = num[n] < 0 if v is None else (num[n] >= 0 and num[n] * v[1] == v[0] * chi.exponent)
                if not ok:
                    raise ValueError(f"serialized value at residue {n} disagrees with label {chi.label}")
        return chi


def character_from_numerators(k: int, numerators: np.ndarray, exponent: int) -> DirichletCharacter:
    """Find the character mod k whose values are exp(2 pi i num / exponent)."""
    grp = character_group(k)
    label = []
    for comp in grp.components:
        num = int(numerators[comp.lifted])
        # chi(g) = exp(2 pi i num/exponent) = exp(2 pi i a/order)
        a = num * comp.order
        if num < 0 or a % exponent:
            raise ValueError("numerator table is not a character mod k")
        label.append((a // exponent) % comp.order)
    chi = DirichletCharacter(k, tuple(label))
    mine = chi.numerators
    scaled = np.where(numerators >= 0, numerators * chi.exponent, -1)
    if not np.array_equal(np.where(mine >= 0, mine * exponent, -1), scaled):
        raise ValueError("numerator table is not a character mod k")
    return chi


def enumerate_characters(k: int) -> list[DirichletCharacter]:
    """All phi(k) characters mod k, ordered lexicographically by label."""
    if k < 1:
        raise ValueError(f"modulus must be >= 1, got {k}")
    return [DirichletCharacter(k, lab) for lab in character_group(k).labels()]


def primitive_characters(k: int) -> list[DirichletCharacter]:
    return [chi for chi in enumerate_characters(k) if chi.is_primitive]


def get_character(k: int, label: str | tuple[int, ...] | None = None) -> DirichletCharacter:
    """Character mod k by label (``"1,2"`` or a tuple); default is the first
    primitive character in canonical order."""
    if label is None or label == "":
        prim = primitive_characters(k)
        if not prim:
            raise ValueError(f"no primitive character modulo {k}")
        return prim[0]
    if isinstance(label, str):
        label = tuple(int(x) for x in label.split(",") if x.strip() != "")
    return DirichletCharacter(k, tuple(label))


def conductor(chi: DirichletCharacter) -> int:
    """Smallest f | k such that chi is trivial on units n = 1 (mod f)."""
    k = chi.modulus
    num = chi.numerators
    for f in factorize(k).divisors():
        n = np.arange(1, k, f) if k > 1 else np.array([0])
        vals = num[n]
        if np.all((vals == 0) | (vals < 0)):
            return f
    return k


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_{m=1}^{k} chi(m) e^{2 pi i m / k}."""
    return twisted_gauss(chi, 1, check=False)


def twisted_gauss(chi: DirichletCharacter, s: int, check: bool = True) -> complex:
    """sum_{m=1}^{k} chi(m) e^{2 pi i m s / k}; equals conj(chi(s)) tau(chi)
    for primitive chi."""
    k = chi.modulus
    if check and not chi.is_primitive:
        warnings.warn(
            f"character {chi.label} mod {k} has conductor {chi.conductor}; "
            "twisted_gauss = conj(chi(s)) tau(chi) is not guaranteed",
            NonPrimitiveWarning,
            stacklevel=2,
        )
    m = np.arange(1, k + 1)
    phase = (m * (s % k)) % k
    return complex(np.sum(chi(m) * np.exp(2j * np.pi * phase / k)))


def autocorrelation_g(chi: DirichletCharacter, r: int) -> complex:
    """g(r) = sum_{r1 = 0}^{k-1} chi(r1) conj(chi(r1 + r))."""
    r1 = np.arange(chi.modulus)
    return complex(np.sum(chi(r1) * np.conj(chi(r1 + r))))


def g_fourier(chi: DirichletCharacter, s: int) -> complex:
    """sum_{r=0}^{k-1} g(r) e^{2 pi i r s / k}."""
    k = chi.modulus
    g = np.array([autocorrelation_g(chi, r) for r in range(k)])
    r = np.arange(k)
    return complex(np.sum(g * np.exp(2j * np.pi * ((r * s) % k) / k)))


def root_number(chi: DirichletCharacter) -> complex:
    """tau(chi) / (i^a sqrt(k)), the functional-equation constant."""
    return gauss_sum(chi) / (1j**chi.parity * math.sqrt(chi.modulus))
