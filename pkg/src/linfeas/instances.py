"""Instance files, the planted-solution generator, and exact verification.

File format: a header line "M N", then M lines of N space-separated decimal
integers (arbitrary precision), then optional comment lines starting with
'#' carrying metadata (seed, bits, margin, planted witness).  Canonical
writes round-trip byte-identically.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction


class MalformedHeader(ValueError):
    pass


class RowLengthMismatch(ValueError):
    pass


class NonIntegerEntry(ValueError):
    pass


class ZeroRow(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class RejectionBudgetExceeded(RuntimeError):
    """The margin screen rejected too many candidate rows."""


@dataclass(frozen=True)
class Instance:
    """An integer constraint matrix, optionally with generator provenance.

    `witness` is a planted rational separator x with A x > 0; it is scaled
    so that after row normalization the lifted witness has margin exactly
    >= 1 on every normalized row (with equality on the binding row).
    """

    a: tuple[tuple[int, ...], ...]
    witness: tuple[Fraction, ...] | None = None
    seed: int | None = None
    bits: int | None = None
    margin: Fraction | None = None

    def __post_init__(self):
        if not self.a:
            raise MalformedHeader("instance needs at least one row")
        width = len(self.a[0])
        for i, row in enumerate(self.a):
            if len(row) != width:
                raise RowLengthMismatch(f"row {i} has {len(row)} entries, expected {width}")
            if all(e == 0 for e in row):
                raise ZeroRow(f"row {i} is zero")
        if self.witness is not None and len(self.witness) != width:
            raise DimensionMismatch("witness length does not match column count")

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def n(self) -> int:
        return len(self.a[0])

    @property
    def entry_bits(self) -> int:
        """B: the largest bit length over all entries."""
        return max(abs(e).bit_length() for row in self.a for e in row)

    @property
    def total_bits(self) -> int:
        """L: the summed bit lengths of all entries (<= M*N*B)."""
        return sum(abs(e).bit_length() for row in self.a for e in row)

    def witness_squared_norm(self) -> Fraction | None:
        if self.witness is None:
            return None
        return sum((w * w for w in self.witness), Fraction(0))


def _format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def write_instance(inst: Instance) -> str:
    lines = [f"{inst.m} {inst.n}"]
    for row in inst.a:
        lines.append(" ".join(str(e) for e in row))
    if inst.seed is not None:
        lines.append(f"# seed: {inst.seed}")
    if inst.bits is not None:
        lines.append(f"# bits: {inst.bits}")
    if inst.margin is not None:
        lines.append(f"# margin: {_format_fraction(inst.margin)}")
    if inst.witness is not None:
        lines.append("# witness: " + " ".join(_format_fraction(w) for w in inst.witness))
    return "\n".join(lines) + "\n"


def _parse_int(token: str) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise NonIntegerEntry(f"not an integer: {token!r}") from exc


def parse_instance(text: str) -> Instance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedHeader("empty input")
    header = lines[0].split()
    if len(header) != 2:
        raise MalformedHeader(f"expected 'M N', got {lines[0]!r}")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError as exc:
        raise MalformedHeader(f"expected 'M N', got {lines[0]!r}") from exc
    if m < 1 or n < 1:
        raise MalformedHeader(f"dimensions must be positive, got {m} x {n}")
    if len(lines) < 1 + m:
        raise MalformedHeader(f"expected {m} rows, found {len(lines) - 1}")
    rows = []
    for i in range(m):
        tokens = lines[1 + i].split()
        if lines[1 + i].lstrip().startswith("#"):
            raise MalformedHeader(f"expected {m} rows before comments")
        if len(tokens) != n:
            raise RowLengthMismatch(f"row {i} has {len(tokens)} entries, expected {n}")
        rows.append(tuple(_parse_int(t) for t in tokens))
    meta = {"seed": None, "bits": None, "margin": None, "witness": None}
    for ln in lines[1 + m:]:
        stripped = ln.strip()
        if not stripped.startswith("#"):
            raise MalformedHeader(f"unexpected trailing content: {ln!r}")
        body = stripped[1:].strip()
        if ":" not in body:
            continue
        key, _, value = body.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "seed":
            meta["seed"] = int(value)
        elif key == "bits":
            meta["bits"] = int(value)
        elif key == "margin":
            meta["margin"] = Fraction(value)
        elif key == "witness":
            meta["witness"] = tuple(Fraction(t) for t in value.split())
    return Instance(tuple(rows), witness=meta["witness"], seed=meta["seed"],
                    bits=meta["bits"], margin=meta["margin"])


def _draw_vector(rng: random.Random, n: int, bound: int) -> list[int]:
    return [rng.randint(-bound, bound) for _ in range(n)]


def generate_feasible_instance(m: int, n: int, bits: int, margin,
                               seed: int, tight_rows: int = 0,
                               max_tries: int = 200_000) -> Instance:
    """A feasible instance with a planted separator of known quality.

    Entries live in [-2**bits, 2**bits].  A nonzero direction x* is drawn
    first; each row is drawn, sign-flipped to point with x*, and accepted
    only if its exact squared margin clears margin**2 (floats pre-screen,
    integers decide).  The first `tight_rows` rows must additionally sit
    within a factor 2 of the requested margin, which pins the instance's
    true margin near `margin` (used by the benchmark families).  The stored
    witness is x* scaled so the lifted witness has normalized margin
    exactly >= 1.
    """
    if m < 1 or n < 1 or bits < 1:
        raise ValueError("m, n, bits must all be >= 1")
    margin = Fraction(margin)
    if not 0 < margin <= 1:
        raise ValueError("margin must lie in (0, 1]")
    rng = random.Random(seed)
    bound = 1 << bits
    gp, gq = margin.numerator, margin.denominator

    xstar = _draw_vector(rng, n, bound)
    while all(e == 0 for e in xstar):
        xstar = _draw_vector(rng, n, bound)
    xx = sum(e * e for e in xstar)
    xf = math.sqrt(float(xx))

    rows: list[tuple[int, ...]] = []
    dots: list[int] = []
    tries = 0
    while len(rows) < m:
        if tries >= max_tries:
            raise RejectionBudgetExceeded(
                f"{tries} draws produced only {len(rows)}/{m} rows "
                f"(margin {margin} too demanding for {bits} bits?)")
        tries += 1
        r = _draw_vector(rng, n, bound)
        dot = sum(a * b for a, b in zip(r, xstar))
        if dot < 0:
            r = [-e for e in r]
            dot = -dot
        if dot == 0:
            continue
        rr = sum(e * e for e in r)
        # float pre-screen, then the exact integer test decides
        if dot < 0.999 * float(margin) * math.sqrt(float(rr)) * xf:
            continue
        if dot * dot * gq * gq < gp * gp * rr * xx:
            continue
        if len(rows) < tight_rows and dot * dot * gq * gq > 4 * gp * gp * rr * xx:
            continue  # keep the binding rows within a factor 2 of the margin
        rows.append(tuple(r))
        dots.append(dot)

    # scale x* so the lifted witness has normalized margin exactly >= 1:
    # row m of the normalized instance needs r_m . w >= s_m + 1/2
    scale = max(Fraction(2 * rr_sum + 1, 2 * dot)
                for rr_sum, dot in ((sum(e * e for e in row), d)
                                    for row, d in zip(rows, dots)))
    witness = tuple(scale * e for e in xstar)
    return Instance(tuple(rows), witness=witness, seed=seed, bits=bits,
                    margin=margin)


def lifted_witness(inst: Instance) -> tuple[Fraction, ...] | None:
    """The planted witness padded with the two homogenization coordinates."""
    if inst.witness is None:
        return None
    return inst.witness + (Fraction(0), Fraction(0))


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    margin: Fraction


def verify_solution_exact(inst: Instance, x, relation: str = "strict",
                          rhs=None) -> VerifyResult:
    """Exact check of A x > b (strict) or A x >= b (weak), default b = 0."""
    if len(x) != inst.n:
        raise DimensionMismatch(f"solution has {len(x)} entries, expected {inst.n}")
    if relation not in ("strict", "weak"):
        raise ValueError(f"unknown relation {relation!r}")
    if rhs is None:
        rhs = [0] * inst.m
    if len(rhs) != inst.m:
        raise DimensionMismatch(f"rhs has {len(rhs)} entries, expected {inst.m}")
    xs = [xi if isinstance(xi, Fraction) else Fraction(xi) for xi in x]
    margin = None
    ok = True
    for row, b in zip(inst.a, rhs):
        s = sum((e * xi for e, xi in zip(row, xs) if e), Fraction(0)) - Fraction(b)
        if margin is None or s < margin:
            margin = s
        if relation == "strict" and s <= 0:
            ok = False
        if relation == "weak" and s < 0:
            ok = False
    return VerifyResult(ok, margin)
