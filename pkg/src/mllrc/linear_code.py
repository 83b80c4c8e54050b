"""Linear codes over GF(p^m) with exhaustive, exact code-level primitives.

Everything here is enumeration-based and exact: minimum distance, coordinate
locality, repair-set witnesses.  Enumerations are bounded by a hard budget
(number of vectors touched); exceeding it raises BudgetError rather than
falling back to any approximation.  Coordinates are 0-based throughout the
library API (the CLI layer presents them 1-based).
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import BudgetError, ParseError, PreconditionError
from .galois import FiniteField, MatrixGF, field_new, mat_kernel, mat_rank

__all__ = [
    "DEFAULT_BUDGET",
    "LinearCode",
    "LocalityClass",
    "LocalityProfile",
    "RepairSet",
    "code_from_generator",
    "code_from_lines",
    "code_from_parity_check",
    "code_to_lines",
    "dual",
    "entropy",
    "format_profile_shape",
    "load_code",
    "locality_of_coordinate",
    "locality_profile",
    "min_distance",
    "parse_profile_shape",
    "resolve_budget",
    "save_code",
    "shorten",
    "verify_profile",
]

DEFAULT_BUDGET = 10**8
_BUDGET_ENV = "MLLRC_BUDGET"
_BLOCK = 1 << 15


def resolve_budget(budget: int | None = None) -> int:
    """Explicit argument, else the MLLRC_BUDGET env var, else 10^8."""
    if budget is None:
        env = os.environ.get(_BUDGET_ENV)
        budget = int(env) if env else DEFAULT_BUDGET
    budget = int(budget)
    if budget <= 0:
        raise PreconditionError(f"enumeration budget must be positive, got {budget}")
    return budget


# ---------------------------------------------------------------------------
# enumeration kernels
# ---------------------------------------------------------------------------


def _digits_block(q: int, k: int, lo: int, hi: int) -> np.ndarray:
    """Rows lo..hi-1 of the q-ary message enumeration, digit i in column i."""
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((hi - lo, k), dtype=np.int64)
    for i in range(k):
        out[:, i] = idx % q
        idx //= q
    return out


def _encode_block(F: FiniteField, G: np.ndarray, msgs: np.ndarray) -> np.ndarray:
    if F.m == 1:
        return (msgs @ G) % F.p
    acc = np.zeros((msgs.shape[0], G.shape[1]), dtype=np.int64)
    for t in range(G.shape[0]):
        acc = F.add(acc, F.mul(msgs[:, t : t + 1], G[t : t + 1, :]))
    return acc


def _iter_codeword_blocks(F: FiniteField, G: np.ndarray, skip_zero: bool = True):
    """Yield (first_message_index, codeword block) pairs in message order."""
    k = G.shape[0]
    total = F.q**k
    lo = 1 if skip_zero else 0
    while lo < total:
        hi = min(lo + _BLOCK, total)
        yield lo, _encode_block(F, G, _digits_block(F.q, k, lo, hi))
        lo = hi


# ---------------------------------------------------------------------------
# profiles and repair sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepairSet:
    """c[target] = sum coefficients[j] * c[helpers[j]] for every codeword."""

    target: int
    helpers: tuple[int, ...]
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.helpers) < 1:
            raise PreconditionError("repair set needs at least one helper")
        if self.target in self.helpers:
            raise PreconditionError("repair target cannot be its own helper")
        if len(self.helpers) != len(self.coefficients):
            raise PreconditionError("helpers and coefficients must align")

    def holds_for(self, code: "LinearCode") -> bool:
        """Exact check of the repair relation on every generator row."""
        F = code.field
        G = code.G.a
        rhs = np.zeros(code.k, dtype=np.int64)
        for j, c in zip(self.helpers, self.coefficients):
            rhs = F.add(rhs, F.mul(c, G[:, j]))
        return bool(np.array_equal(rhs, G[:, self.target]))


@dataclass(frozen=True)
class LocalityClass:
    locality: int
    coordinates: tuple[int, ...]

    def __post_init__(self):
        if self.locality < 1:
            raise PreconditionError(f"locality must be >= 1, got {self.locality}")
        if not self.coordinates:
            raise PreconditionError("locality class cannot be empty")
        if tuple(sorted(set(self.coordinates))) != self.coordinates:
            raise PreconditionError("class coordinates must be sorted and distinct")

    @property
    def size(self) -> int:
        return len(self.coordinates)


@dataclass(frozen=True)
class LocalityProfile:
    """Coordinate classes with strictly increasing localities r_1 < ... < r_s."""

    classes: tuple[LocalityClass, ...]

    def __post_init__(self):
        if not self.classes:
            raise PreconditionError("profile needs at least one class")
        locs = [c.locality for c in self.classes]
        if locs != sorted(set(locs)):
            raise PreconditionError("class localities must be strictly increasing")
        seen: set[int] = set()
        for c in self.classes:
            if seen & set(c.coordinates):
                raise PreconditionError("classes must be pairwise disjoint")
            seen |= set(c.coordinates)

    @property
    def n(self) -> int:
        return sum(c.size for c in self.classes)

    @property
    def s(self) -> int:
        return len(self.classes)

    def shape(self) -> tuple[tuple[int, int], ...]:
        """((n_1, r_1), ..., (n_s, r_s))."""
        return tuple((c.size, c.locality) for c in self.classes)

    def covers(self, n: int) -> bool:
        return set().union(*(c.coordinates for c in self.classes)) == set(range(n))

    def __str__(self) -> str:
        return format_profile_shape(self.shape())


_PROFILE_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_profile_shape(text: str) -> tuple[tuple[int, int], ...]:
    """Parse "(n1,r1),(n2,r2),..." into a shape tuple, validating the grammar.

    Classes may appear in any order; the result is canonical (sorted by
    locality).  Duplicate localities are rejected."""
    pairs = _PROFILE_RE.findall(text)
    canonical = ",".join(f"({a},{b})" for a, b in pairs)
    stripped = re.sub(r"\s+", "", text)
    if not pairs or stripped != canonical:
        raise ParseError(f"malformed profile string: {text!r}")
    shape = tuple(sorted(((int(a), int(b)) for a, b in pairs), key=lambda p: p[1]))
    locs = [r for _, r in shape]
    if len(locs) != len(set(locs)):
        raise ParseError(f"profile localities must be distinct: {text!r}")
    if any(n < 1 or r < 1 for n, r in shape):
        raise ParseError(f"profile entries must be positive: {text!r}")
    return shape


def format_profile_shape(shape) -> str:
    return ",".join(f"({n},{r})" for n, r in shape)


def _profile_from_localities(locs: dict[int, int]) -> LocalityProfile:
    by_r: dict[int, list[int]] = {}
    for coord, r in locs.items():
        by_r.setdefault(r, []).append(coord)
    classes = tuple(
        LocalityClass(r, tuple(sorted(by_r[r]))) for r in sorted(by_r)
    )
    return LocalityProfile(classes)


# ---------------------------------------------------------------------------
# the code object
# ---------------------------------------------------------------------------


class LinearCode:
    """[n, k] linear code over GF(p^m), held as a full-rank generator matrix."""

    def __init__(self, field: FiniteField, G, *, parity_check: MatrixGF | None = None):
        Gm = G if isinstance(G, MatrixGF) else MatrixGF(field, G)
        if Gm.field != field:
            raise PreconditionError("generator field mismatch")
        if Gm.nrows < 1 or Gm.ncols < 1:
            raise PreconditionError("code needs k >= 1 and n >= 1")
        if Gm.nrows > Gm.ncols:
            raise PreconditionError("generator has more rows than columns")
        if mat_rank(Gm) != Gm.nrows:
            raise PreconditionError("generator matrix must have full row rank")
        self.field = field
        self.G = Gm
        self._H = parity_check
        self._d: int | None = None

    # -- basic parameters ----------------------------------------------------

    @property
    def n(self) -> int:
        return self.G.ncols

    @property
    def k(self) -> int:
        return self.G.nrows

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def H(self) -> MatrixGF:
        """Parity-check matrix (kernel of G); empty (0 x n) when k = n."""
        if self._H is None:
            self._H = mat_kernel(self.G)
        return self._H

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearCode)
            and self.field == other.field
            and self.G == other.G
        )

    def __repr__(self) -> str:
        d = f",{self._d}" if self._d is not None else ""
        return f"LinearCode[{self.n},{self.k}{d}]_{self.q}"

    def dual(self) -> "LinearCode":
        if self.k == self.n:
            raise PreconditionError("full space has a zero dual; not representable")
        return LinearCode(self.field, self.H)

    # -- codeword sampling -----------------------------------------------------

    def sample_codewords(self, count: int, seed: int) -> np.ndarray:
        """Deterministic random codewords, one per row (for spot checks/demos)."""
        rng = np.random.default_rng(seed)
        msgs = rng.integers(0, self.q, size=(count, self.k), dtype=np.int64)
        return _encode_block(self.field, self.G.a, msgs)

    # -- distance --------------------------------------------------------------

    def min_distance(self, budget: int | None = None) -> int:
        """Exact minimum nonzero codeword weight (cached once computed)."""
        if self._d is not None:
            return self._d
        b = resolve_budget(budget)
        primal = self.q**self.k
        dual_side = self.q ** (self.n - self.k)
        if primal <= b:
            best = self.n + 1
            for _, block in _iter_codeword_blocks(self.field, self.G.a):
                w = int(np.count_nonzero(block, axis=1).min())
                if w < best:
                    best = w
            d = best
        elif dual_side <= b:
            d = self._distance_via_dual()
        else:
            raise BudgetError(
                f"minimum distance of {self!r} needs {min(primal, dual_side)} "
                f"enumerations; budget is {b}"
            )
        self._d = d
        return d

    def _weight_counts(self, G: np.ndarray) -> list[int]:
        counts = np.zeros(self.n + 1, dtype=np.int64)
        for _, block in _iter_codeword_blocks(self.field, G):
            counts += np.bincount(
                np.count_nonzero(block, axis=1), minlength=self.n + 1
            )
        counts[0] += 1  # zero word
        return [int(c) for c in counts]

    def _distance_via_dual(self) -> int:
        """Exact distance from the dual weight distribution via the
        MacWilliams transform (integer Krawtchouk arithmetic)."""
        n, q = self.n, self.q
        B = self._weight_counts(self.H.a)
        denom = q ** (self.n - self.k)
        for i in range(1, n + 1):
            acc = 0
            for j in range(n + 1):
                if not B[j]:
                    continue
                kraw = 0
                for l in range(0, min(i, j) + 1):
                    if i - l > n - j:
                        continue
                    kraw += (-1) ** l * (q - 1) ** (i - l) * comb(j, l) * comb(n - j, i - l)
                acc += B[j] * kraw
            if acc % denom:
                raise RuntimeError("MacWilliams transform produced a non-integer count")
            if acc // denom:
                return i
        raise RuntimeError("no nonzero codeword found; generator was rank-deficient")

    # -- shortening / puncturing -------------------------------------------------

    def shorten(self, i: int, allow_zero_column: bool = False) -> "LinearCode":
        """Codewords with c_i = 0, coordinate i deleted ([n-1, k-1, >= d]).

        Row-reduces so column i has a single nonzero entry, then deletes that
        row and the column.  Remaining coordinates keep their relative order.
        A zero column cannot be shortened (k would not drop); with
        allow_zero_column=True it is simply deleted instead.
        """
        if not 0 <= i < self.n:
            raise PreconditionError(f"coordinate {i} out of range [0, {self.n})")
        F = self.field
        A = self.G.a.copy()
        col = A[:, i]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            if allow_zero_column:
                return LinearCode(F, np.delete(A, i, axis=1))
            raise PreconditionError(
                f"generator column {i} is identically zero; shortening would not "
                "reduce the dimension (pass allow_zero_column=True to drop it)"
            )
        if self.k == 1:
            raise PreconditionError("shortening a dimension-1 code would empty it")
        piv = int(nz[0])
        if A[piv, i] != 1:
            A[piv] = F.mul(A[piv], F.inv(int(A[piv, i])))
        others = np.nonzero(A[:, i])[0]
        others = others[others != piv]
        if others.size:
            A[others] = F.sub(A[others], F.mul(A[others, i][:, None], A[piv][None, :]))
        A = np.delete(np.delete(A, piv, axis=0), i, axis=1)
        return LinearCode(F, A)

    def puncture(self, i: int) -> "LinearCode":
        """Delete coordinate i; dimension drops only if it was forced to 0."""
        if not 0 <= i < self.n:
            raise PreconditionError(f"coordinate {i} out of range [0, {self.n})")
        A = np.delete(self.G.a, i, axis=1)
        M = MatrixGF(self.field, A)
        if mat_rank(M) < self.k:
            from .galois import mat_rref

            R, piv = mat_rref(M)
            A = R.a[: len(piv)]
        return LinearCode(self.field, A)

    # -- coordinate-set entropy ---------------------------------------------------

    def entropy(self, coords) -> int:
        """rank(G_I) = log_q of the number of distinct projections onto I."""
        coords = list(coords)
        if any(not 0 <= c < self.n for c in coords):
            raise PreconditionError(f"coordinates out of range: {coords}")
        if not coords:
            return 0
        return mat_rank(self.G.take_cols(coords))

    # -- locality ----------------------------------------------------------------

    def _dual_support_scan(
        self,
        support: tuple[int, ...],
        targets: tuple[int, ...],
        budget: int | None,
        want_witnesses: bool,
    ) -> dict[int, tuple[int | None, RepairSet | None]]:
        """Min weight of dual words supported within `support` through each target.

        Enumerates the kernel of G restricted to `support` (exactly the dual
        words vanishing outside it).  Witnesses are normalized to h_target = 1
        and chosen as the lexicographically smallest (helper set, coefficient
        vector) among minimum-weight candidates.
        """
        F = self.field
        b = resolve_budget(budget)
        sub = MatrixGF(F, self.G.a[:, list(support)])
        K = mat_kernel(sub).a
        dim = K.shape[0]
        if F.q**dim > b:
            raise BudgetError(
                f"dual scan needs {F.q ** dim} enumerations; budget is {b}"
            )
        pos = {c: idx for idx, c in enumerate(support)}
        t_pos = [pos[t] for t in targets]
        best: dict[int, int | None] = {t: None for t in targets}
        if dim > 0:
            for _, block in _iter_codeword_blocks(F, K):
                wts = np.count_nonzero(block, axis=1)
                for t, tp in zip(targets, t_pos):
                    sel = wts[block[:, tp] != 0]
                    if sel.size:
                        m = int(sel.min())
                        if best[t] is None or m < best[t]:
                            best[t] = m
        out: dict[int, tuple[int | None, RepairSet | None]] = {}
        if not want_witnesses:
            return {t: (best[t], None) for t in targets}
        keys: dict[int, tuple] = {}
        wit: dict[int, RepairSet | None] = {t: None for t in targets}
        if dim > 0:
            for _, block in _iter_codeword_blocks(F, K):
                wts = np.count_nonzero(block, axis=1)
                for t, tp in zip(targets, t_pos):
                    if best[t] is None:
                        continue
                    cand = np.nonzero((block[:, tp] != 0) & (wts == best[t]))[0]
                    for ridx in cand:
                        h = block[ridx]
                        hn = F.mul(F.inv(int(h[tp])), h)  # normalize h_t = 1
                        supp = tuple(
                            support[j] for j in np.nonzero(hn)[0] if j != tp
                        )
                        coeffs = tuple(
                            int(F.neg(int(hn[pos[c]]))) for c in supp
                        )
                        key = (supp, coeffs)
                        if t not in keys or key < keys[t]:
                            keys[t] = key
                            wit[t] = RepairSet(t, supp, coeffs)
        for t in targets:
            out[t] = (best[t], wit[t])
        return out

    def locality_of_coordinate(
        self, i: int, restrict_to=None, budget: int | None = None
    ) -> tuple[int, RepairSet]:
        """Exact locality of coordinate i and a witness repair set.

        restrict_to: optional coordinate set the helpers must come from.
        """
        if not 0 <= i < self.n:
            raise PreconditionError(f"coordinate {i} out of range [0, {self.n})")
        if not self.G.a[:, i].any():
            raise PreconditionError(
                f"coordinate {i} is identically zero; locality is undefined"
            )
        if restrict_to is None:
            support = tuple(range(self.n))
        else:
            support = tuple(sorted(set(restrict_to) | {i}))
            if any(not 0 <= c < self.n for c in support):
                raise PreconditionError("restrict_to coordinates out of range")
        res = self._dual_support_scan(support, (i,), budget, want_witnesses=True)
        w, witness = res[i]
        if w is None:
            raise PreconditionError(
                f"coordinate {i} has no repair relation (no dual word through it)"
            )
        return w - 1, witness

    def locality_profile(self, mode: str = "loose", budget: int | None = None) -> LocalityProfile:
        """Exact per-coordinate localities grouped into increasing classes.

        loose: helpers may come from anywhere (the detection default).
        strict: the loose partition re-scanned with helpers confined to each
        class; raises if the partition is not stable under that restriction.
        """
        if mode not in ("loose", "strict"):
            raise PreconditionError(f"unknown profile mode {mode!r}")
        zero_cols = [int(j) for j in range(self.n) if not self.G.a[:, j].any()]
        if zero_cols:
            raise PreconditionError(
                f"coordinates {zero_cols} are identically zero; locality is undefined"
            )
        full = tuple(range(self.n))
        res = self._dual_support_scan(full, full, budget, want_witnesses=False)
        locs: dict[int, int] = {}
        for c in full:
            w = res[c][0]
            if w is None:
                raise PreconditionError(
                    f"coordinate {c} has no repair relation (no dual word through it)"
                )
            locs[c] = w - 1
        loose = _profile_from_localities(locs)
        if mode == "loose":
            return loose
        strict_locs: dict[int, int] = {}
        for cls in loose.classes:
            res = self._dual_support_scan(
                cls.coordinates, cls.coordinates, budget, want_witnesses=False
            )
            for c in cls.coordinates:
                w = res[c][0]
                if w is None:
                    raise PreconditionError(
                        f"coordinate {c} has no repair relation inside its class"
                    )
                strict_locs[c] = w - 1
        strict = _profile_from_localities(strict_locs)
        if tuple(c.coordinates for c in strict.classes) != tuple(
            c.coordinates for c in loose.classes
        ):
            raise PreconditionError(
                "profile is not strict-stable: restricting helpers to classes "
                "changes the partition"
            )
        return strict

    def verify_profile(
        self, profile: LocalityProfile, mode: str = "loose", budget: int | None = None
    ) -> tuple[bool, dict[int, RepairSet | None]]:
        """Check every coordinate of class i has a repair set of size <= r_i.

        strict mode confines helpers to the coordinate's own class.  Returns
        (ok, witnesses); coordinates failing their class bound map to None.
        """
        if mode not in ("loose", "strict"):
            raise PreconditionError(f"unknown profile mode {mode!r}")
        if not profile.covers(self.n):
            raise PreconditionError("profile does not cover the code's coordinates")
        witnesses: dict[int, RepairSet | None] = {}
        ok = True
        for cls in profile.classes:
            support = cls.coordinates if mode == "strict" else tuple(range(self.n))
            res = self._dual_support_scan(
                support, cls.coordinates, budget, want_witnesses=True
            )
            for c in cls.coordinates:
                w, witness = res[c]
                if w is None or w - 1 > cls.locality:
                    witnesses[c] = None
                    ok = False
                else:
                    witnesses[c] = witness
        return ok, witnesses


# ---------------------------------------------------------------------------
# functional aliases (the operation surface)
# ---------------------------------------------------------------------------


def code_from_generator(field: FiniteField, G) -> LinearCode:
    return LinearCode(field, G)


def code_from_parity_check(field: FiniteField, H) -> LinearCode:
    Hm = H if isinstance(H, MatrixGF) else MatrixGF(field, H)
    if mat_rank(Hm) != Hm.nrows:
        raise PreconditionError("parity-check matrix must have full row rank")
    G = mat_kernel(Hm)
    return LinearCode(field, G, parity_check=Hm)


def dual(code: LinearCode) -> LinearCode:
    return code.dual()


def min_distance(code: LinearCode, budget: int | None = None) -> int:
    return code.min_distance(budget)


def shorten(code: LinearCode, i: int, allow_zero_column: bool = False) -> LinearCode:
    return code.shorten(i, allow_zero_column)


def entropy(code: LinearCode, coords) -> int:
    return code.entropy(coords)


def locality_of_coordinate(code, i, restrict_to=None, budget=None):
    return code.locality_of_coordinate(i, restrict_to, budget)


def locality_profile(code, mode="loose", budget=None):
    return code.locality_profile(mode, budget)


def verify_profile(code, profile, mode="loose", budget=None):
    return code.verify_profile(profile, mode, budget)


# ---------------------------------------------------------------------------
# code file format
# ---------------------------------------------------------------------------

_HEADER_RE = re.compile(
    r"^q=(\d+)\s+p=(\d+)\s+m=(\d+)\s+n=(\d+)\s+k=(\d+)\s*$"
)


def code_to_lines(code: LinearCode) -> list[str]:
    """Text form of a code: header line, modulus line (m >= 2), G rows."""
    F = code.field
    lines = [f"q={F.q} p={F.p} m={F.m} n={code.n} k={code.k}"]
    if F.m >= 2:
        lines.append("modulus=" + ",".join(str(c) for c in F.modulus))
    for row in code.G.tolist():
        lines.append(" ".join(str(v) for v in row))
    return lines


def code_from_lines(lines, where: str = "code text") -> LinearCode:
    """Parse the text form, validating every field and entry range.

    `lines` are the stripped, non-empty content lines; `where` prefixes error
    messages (a file path or an embedding-section label).
    """
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError(f"{where}: empty code text")
    hd = _HEADER_RE.match(lines[0])
    if not hd:
        raise ParseError(f"{where}: malformed header line {lines[0]!r}")
    q, p, m, n, k = (int(hd.group(i)) for i in range(1, 6))
    if p**m != q:
        raise ParseError(f"{where}: q={q} is not p^m = {p}^{m}")
    body = lines[1:]
    modulus = None
    if body and body[0].startswith("modulus="):
        try:
            modulus = tuple(int(v) for v in body[0][len("modulus="):].split(","))
        except ValueError as exc:
            raise ParseError(f"{where}: malformed modulus line") from exc
        body = body[1:]
        if m == 1:
            raise ParseError(f"{where}: modulus line present for a prime field")
    try:
        field = field_new(p, m, modulus)
    except PreconditionError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    if len(body) != k:
        raise ParseError(f"{where}: expected {k} generator rows, found {len(body)}")
    rows = []
    for ln in body:
        try:
            row = [int(v) for v in ln.split()]
        except ValueError as exc:
            raise ParseError(f"{where}: non-integer generator entry in {ln!r}") from exc
        if len(row) != n:
            raise ParseError(f"{where}: row has {len(row)} entries, expected {n}")
        if any(not 0 <= v < q for v in row):
            raise ParseError(f"{where}: generator entry out of range [0, {q})")
        rows.append(row)
    try:
        return LinearCode(field, rows)
    except PreconditionError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def save_code(code: LinearCode, path) -> None:
    """Write the text format: header line, modulus line (m >= 2), G rows."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(code_to_lines(code)) + "\n")


def load_code(path) -> LinearCode:
    """Parse the text format, validating every field and entry range."""
    with open(path, "r", encoding="ascii") as fh:
        raw = [ln.strip() for ln in fh.readlines()]
    return code_from_lines(raw, where=str(path))
