"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`; matrices are stored sparsely as
row dictionaries. Every kernel here is deterministic: Gaussian elimination
always pivots on the leftmost column and, within it, on the smallest row
index holding a nonzero entry.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Rational = Fraction
Vector = List[Fraction]

__all__ = [
    "Rational",
    "RatMatrix",
    "Quotient",
    "DimensionError",
    "ContainmentError",
    "rank",
    "kernel_basis",
    "solve_particular",
    "quotient_data",
    "parse_rational",
    "format_rational",
    "zero_vector",
    "matrix_inverse",
    "is_invertible",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "is_zero_vector",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DimensionError(ValueError):
    """Raised when matrix or vector shapes do not line up."""


class ContainmentError(ValueError):
    """Raised when a subspace is not contained in the space it should lie in."""


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(x: Fraction) -> str:
    # str(Fraction) already gives lowest terms and drops "/1"
    return str(Fraction(x))


def zero_vector(n: int) -> Vector:
    return [_ZERO] * n


class RatMatrix:
    """Immutable sparse matrix with rational entries.

    Absent entries are zero and stored entries are never zero.
    """

    __slots__ = ("nrows", "ncols", "_rows", "_cache")

    def __init__(self, nrows: int, ncols: int, rows: Optional[Mapping[int, Mapping[int, object]]] = None):
        if nrows < 0 or ncols < 0:
            raise DimensionError("negative matrix dimension")
        self.nrows = nrows
        self.ncols = ncols
        clean: Dict[int, Dict[int, Fraction]] = {}
        if rows:
            for i, row in rows.items():
                if not 0 <= i < nrows:
                    raise DimensionError(f"row index {i} out of range for {nrows} rows")
                r = {}
                for j, v in row.items():
                    if not 0 <= j < ncols:
                        raise DimensionError(f"column index {j} out of range for {ncols} columns")
                    v = parse_rational(v)
                    if v:
                        r[j] = v
                if r:
                    clean[i] = r
        self._rows = clean
        self._cache = {}

    @classmethod
    def _trusted(cls, nrows: int, ncols: int, rows: Dict[int, Dict[int, Fraction]]) -> "RatMatrix":
        m = cls.__new__(cls)
        m.nrows = nrows
        m.ncols = ncols
        m._rows = rows
        m._cache = {}
        return m

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls._trusted(nrows, ncols, {})

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._trusted(n, n, {i: {i: _ONE} for i in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], ncols: Optional[int] = None) -> "RatMatrix":
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        rows = {}
        for i, row in enumerate(data):
            if len(row) != ncols:
                raise DimensionError("ragged dense matrix")
            rows[i] = {j: v for j, v in enumerate(row)}
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], nrows: int) -> "RatMatrix":
        rows: Dict[int, Dict[int, Fraction]] = {}
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise DimensionError(f"column {j} has length {len(col)}, expected {nrows}")
            for i, v in enumerate(col):
                v = parse_rational(v)
                if v:
                    rows.setdefault(i, {})[j] = v
        return cls._trusted(nrows, len(columns), rows)

    @classmethod
    def diagonal(cls, values: Sequence[object]) -> "RatMatrix":
        n = len(values)
        return cls(n, n, {i: {i: v} for i, v in enumerate(values)})

    # -- access -------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(key)
        return self._rows.get(i, {}).get(j, _ZERO)

    def entries(self) -> Iterable[Tuple[int, int, Fraction]]:
        for i in sorted(self._rows):
            row = self._rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    def row(self, i: int) -> Dict[int, Fraction]:
        return dict(self._rows.get(i, {}))

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def column(self, j: int) -> Vector:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        out = zero_vector(self.nrows)
        for i, row in self._rows.items():
            v = row.get(j)
            if v is not None:
                out[i] = v
        return out

    def columns(self) -> List[Vector]:
        cols = [zero_vector(self.nrows) for _ in range(self.ncols)]
        for i, row in self._rows.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def to_dense(self) -> List[List[Fraction]]:
        out = [zero_vector(self.ncols) for _ in range(self.nrows)]
        for i, row in self._rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self._rows

    # -- algebra ------------------------------------------------------

    @property
    def T(self) -> "RatMatrix":
        t = self._cache.get("T")
        if t is None:
            rows: Dict[int, Dict[int, Fraction]] = {}
            for i, row in self._rows.items():
                for j, v in row.items():
                    rows.setdefault(j, {})[i] = v
            t = RatMatrix._trusted(self.ncols, self.nrows, rows)
            t._cache["T"] = self
            self._cache["T"] = t
        return t

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            rows: Dict[int, Dict[int, Fraction]] = {}
            orows = other._rows
            for i, row in self._rows.items():
                acc: Dict[int, Fraction] = {}
                for k, a in row.items():
                    orow = orows.get(k)
                    if not orow:
                        continue
                    for j, b in orow.items():
                        acc[j] = acc.get(j, _ZERO) + a * b
                acc = {j: v for j, v in acc.items() if v}
                if acc:
                    rows[i] = acc
            return RatMatrix._trusted(self.nrows, other.ncols, rows)
        vec = list(other)
        if len(vec) != self.ncols:
            raise DimensionError(f"cannot apply {self.shape} matrix to vector of length {len(vec)}")
        out = zero_vector(self.nrows)
        for i, row in self._rows.items():
            s = _ZERO
            for j, a in row.items():
                x = vec[j]
                if x:
                    s += a * x
            out[i] = s
        return out

    def _combine(self, other: "RatMatrix", sign: int) -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self._rows.items()}
        for i, row in other._rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in row.items():
                nv = tgt.get(j, _ZERO) + sign * v
                if nv:
                    tgt[j] = nv
                else:
                    tgt.pop(j, None)
            if not tgt:
                del rows[i]
        return RatMatrix._trusted(self.nrows, self.ncols, rows)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "RatMatrix":
        return self.scale(-1)

    def scale(self, c) -> "RatMatrix":
        c = parse_rational(c)
        if not c:
            return RatMatrix.zeros(self.nrows, self.ncols)
        rows = {i: {j: v * c for j, v in r.items()} for i, r in self._rows.items()}
        return RatMatrix._trusted(self.nrows, self.ncols, rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(self.entries())))

    def __repr__(self) -> str:
        if self.nrows * self.ncols <= 64:
            body = "; ".join(" ".join(format_rational(x) for x in r) for r in self.to_dense())
            return f"RatMatrix({self.nrows}x{self.ncols}: [{body}])"
        return f"RatMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # -- assembly -----------------------------------------------------

    def select_columns(self, cols: Sequence[int]) -> "RatMatrix":
        pos = {c: k for k, c in enumerate(cols)}
        if len(pos) != len(cols):
            raise ValueError("duplicate column selection")
        rows = {}
        for i, row in self._rows.items():
            r = {pos[j]: v for j, v in row.items() if j in pos}
            if r:
                rows[i] = r
        return RatMatrix._trusted(self.nrows, len(cols), rows)

    def select_rows(self, idx: Sequence[int]) -> "RatMatrix":
        rows = {}
        for k, i in enumerate(idx):
            r = self._rows.get(i)
            if r:
                rows[k] = dict(r)
        return RatMatrix._trusted(len(idx), self.ncols, rows)

    @staticmethod
    def hstack(blocks: Sequence["RatMatrix"], nrows: Optional[int] = None) -> "RatMatrix":
        if not blocks:
            return RatMatrix.zeros(nrows or 0, 0)
        n = blocks[0].nrows
        rows: Dict[int, Dict[int, Fraction]] = {}
        off = 0
        for b in blocks:
            if b.nrows != n:
                raise DimensionError("hstack of blocks with different row counts")
            for i, row in b._rows.items():
                tgt = rows.setdefault(i, {})
                for j, v in row.items():
                    tgt[j + off] = v
            off += b.ncols
        return RatMatrix._trusted(n, off, rows)

    @staticmethod
    def vstack(blocks: Sequence["RatMatrix"], ncols: Optional[int] = None) -> "RatMatrix":
        if not blocks:
            return RatMatrix.zeros(0, ncols or 0)
        n = blocks[0].ncols
        rows: Dict[int, Dict[int, Fraction]] = {}
        off = 0
        for b in blocks:
            if b.ncols != n:
                raise DimensionError("vstack of blocks with different column counts")
            for i, row in b._rows.items():
                rows[i + off] = dict(row)
            off += b.nrows
        return RatMatrix._trusted(off, n, rows)

    @staticmethod
    def block_diagonal(blocks: Sequence["RatMatrix"]) -> "RatMatrix":
        rows: Dict[int, Dict[int, Fraction]] = {}
        ro = co = 0
        for b in blocks:
            for i, row in b._rows.items():
                rows[i + ro] = {j + co: v for j, v in row.items()}
            ro += b.nrows
            co += b.ncols
        return RatMatrix._trusted(ro, co, rows)

    # -- serialization ------------------------------------------------

    def to_json(self) -> List[List[str]]:
        return [[format_rational(x) for x in r] for r in self.to_dense()]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[object]], nrows: Optional[int] = None,
                  ncols: Optional[int] = None) -> "RatMatrix":
        if len(data) == 0:
            return cls.zeros(nrows or 0, ncols or 0)
        m = cls.from_dense(data)
        if (nrows is not None and m.nrows != nrows) or (ncols is not None and m.ncols != ncols):
            raise DimensionError(f"expected {nrows}x{ncols} matrix, got {m.nrows}x{m.ncols}")
        return m

    # -- cached kernels -----------------------------------------------

    def _elimination(self, track: bool) -> "_Elimination":
        key = "elim_t" if track else "elim"
        e = self._cache.get(key)
        if e is None:
            if not track and "elim_t" in self._cache:
                return self._cache["elim_t"]
            e = _Elimination(self, track)
            self._cache[key] = e
        return e


class _Elimination:
    """Reduced row echelon form of a matrix, optionally with the row transform.

    With ``track`` set, ``transform`` satisfies ``transform @ m == rref``.
    """

    def __init__(self, m: RatMatrix, track: bool):
        n = m.ncols
        rows: List[Dict[int, Fraction]] = [dict(m._rows.get(i, {})) for i in range(m.nrows)]
        trans: Optional[List[Dict[int, Fraction]]] = None
        if track:
            trans = [{i: _ONE} for i in range(m.nrows)]
        colrows: Dict[int, set] = {}
        for i, row in enumerate(rows):
            for j in row:
                colrows.setdefault(j, set()).add(i)
        active = set(range(m.nrows))
        pivots: List[Tuple[int, int]] = []  # (row index, column)
        for j in range(n):
            holders = colrows.get(j)
            if not holders:
                continue
            cands = holders & active
            if not cands:
                continue
            r = min(cands)
            active.discard(r)
            prow = rows[r]
            inv = 1 / prow[j]
            if inv != 1:
                for c in prow:
                    prow[c] *= inv
                if trans is not None:
                    t = trans[r]
                    for c in t:
                        t[c] *= inv
            for k in sorted(holders - {r}):
                krow = rows[k]
                f = krow[j]
                for c, v in prow.items():
                    nv = krow.get(c, _ZERO) - f * v
                    if nv:
                        if c not in krow:
                            colrows.setdefault(c, set()).add(k)
                        krow[c] = nv
                    else:
                        if c in krow:
                            del krow[c]
                            colrows[c].discard(k)
                if trans is not None:
                    kt = trans[k]
                    for c, v in trans[r].items():
                        nv = kt.get(c, _ZERO) - f * v
                        if nv:
                            kt[c] = nv
                        else:
                            kt.pop(c, None)
            pivots.append((r, j))
        self.nrows = m.nrows
        self.ncols = n
        self.rows = rows
        self.transform = trans
        self.pivots = pivots
        self.pivot_cols = [j for _, j in pivots]
        self.rank = len(pivots)
        self._zero_rows = sorted(active)

    def kernel(self) -> List[Vector]:
        pivset = set(self.pivot_cols)
        basis = []
        for f in range(self.ncols):
            if f in pivset:
                continue
            v = zero_vector(self.ncols)
            v[f] = _ONE
            for r, j in self.pivots:
                a = self.rows[r].get(f)
                if a:
                    v[j] = -a
            basis.append(v)
        return basis

    def solve(self, b: Sequence[Fraction]) -> Optional[Vector]:
        assert self.transform is not None
        # c = transform @ b
        def apply(row: Dict[int, Fraction]) -> Fraction:
            s = _ZERO
            for c, v in row.items():
                x = b[c]
                if x:
                    s += v * x
            return s

        for r in self._zero_rows:
            if apply(self.transform[r]):
                return None
        x = zero_vector(self.ncols)
        for r, j in self.pivots:
            x[j] = apply(self.transform[r])
        return x


def rank(m: RatMatrix) -> int:
    """Rank of ``m`` over the rationals."""
    return m._elimination(False).rank


def kernel_basis(m: RatMatrix) -> List[Vector]:
    """Basis of the null space of ``m``, one vector per non-pivot column."""
    return m._elimination(False).kernel()


def solve_particular(m: RatMatrix, b: Sequence[object]) -> Optional[Vector]:
    """Return some ``x`` with ``m @ x == b``, or ``None`` if none exists.

    Free variables are set to zero, so the answer is deterministic.
    """
    if len(b) != m.nrows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {m.nrows} rows")
    b = [parse_rational(x) for x in b]
    return m._elimination(True).solve(b)


class Quotient:
    """A quotient space ``W / V`` given by lifted basis vectors.

    ``basis`` holds vectors of the ambient space whose classes form a basis
    of ``W / V``; :meth:`coordinates` expresses any element of ``W`` in that
    basis modulo ``V``.
    """

    def __init__(self, ambient: int, sub_basis: List[Vector], basis: List[Vector]):
        self.ambient = ambient
        self.sub_basis = sub_basis
        self.basis = basis
        self.dim = len(basis)
        self._solver = RatMatrix.from_columns(sub_basis + basis, ambient)

    def coordinates(self, w: Sequence[object]) -> Vector:
        if len(w) != self.ambient:
            raise DimensionError(f"vector of length {len(w)} in ambient space of dim {self.ambient}")
        x = solve_particular(self._solver, w)
        if x is None:
            raise ContainmentError("vector does not lie in the space being quotiented")
        return x[len(self.sub_basis):]

    def contains(self, w: Sequence[object]) -> bool:
        return solve_particular(self._solver, list(w)) is not None

    def lift(self, coords: Sequence[object]) -> Vector:
        if len(coords) != self.dim:
            raise DimensionError(f"expected {self.dim} coordinates, got {len(coords)}")
        out = zero_vector(self.ambient)
        for c, v in zip(coords, self.basis):
            c = parse_rational(c)
            if c:
                for i, x in enumerate(v):
                    if x:
                        out[i] += c * x
        return out

    def is_zero_class(self, w: Sequence[object]) -> bool:
        return not any(self.coordinates(w))

    def representatives_matrix(self) -> RatMatrix:
        return RatMatrix.from_columns(self.basis, self.ambient)


def quotient_data(big: RatMatrix, sub: RatMatrix) -> Quotient:
    """Quotient of the column space of ``big`` by the column space of ``sub``."""
    if big.nrows != sub.nrows:
        raise DimensionError("big and sub live in different ambient spaces")
    both = RatMatrix.hstack([sub, big])
    if rank(both) != rank(big):
        raise ContainmentError("column space of sub is not contained in column space of big")
    piv = both._elimination(False).pivot_cols
    ns = sub.ncols
    sub_cols = [j for j in piv if j < ns]
    big_cols = [j - ns for j in piv if j >= ns]
    sub_basis = [sub.column(j) for j in sub_cols]
    basis = [big.column(j) for j in big_cols]
    return Quotient(big.nrows, sub_basis, basis)


def matrix_inverse(m: RatMatrix) -> RatMatrix:
    """Inverse of a square invertible matrix; raises ``ValueError`` otherwise."""
    if m.nrows != m.ncols:
        raise DimensionError("only square matrices are invertible")
    n = m.nrows
    cols = []
    for j in range(n):
        e = zero_vector(n)
        e[j] = _ONE
        x = solve_particular(m, e)
        if x is None:
            raise ValueError("matrix is singular")
        cols.append(x)
    return RatMatrix.from_columns(cols, n)


def is_invertible(m: RatMatrix) -> bool:
    return m.nrows == m.ncols and rank(m) == m.nrows


def vec_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return [x + y for x, y in zip(a, b)]


def vec_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return [x - y for x, y in zip(a, b)]


def vec_scale(c, a: Sequence[Fraction]) -> Vector:
    c = parse_rational(c)
    return [c * x for x in a]


def is_zero_vector(a: Sequence[Fraction]) -> bool:
    return not any(a)
