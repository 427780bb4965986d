"""Multilinear forms on K^n and their structure analysis.

A form of arity m on dimension n is the sparse tensor of its coefficients
w_{i1...im} = w(e_{i1},...,e_{im}) with 1-based indices.  The analysis
operations answer three questions exactly, over the rationals:

* one-site nondegeneracy: does the flattening with the last slot as column
  index have full column rank (and likewise per slot for the stronger
  every-slot variant);
* twisted cyclicity: is there a matrix Q with
  w_{i1...im} = sum_j Q^j_{im} w_{j i1...i_{m-1}}, and is it unique;
* the polar family: which tensors wt satisfy
  sum wt^{k j1...j_{m-1}} w_{j1...j_{m-1} l} = delta^k_l.

"Preregular" = one-site nondegenerate + a (then unique) invertible Q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .exactnum import (
    Matrix,
    ONE,
    Scalar,
    SingularMatrixError,
    ZERO,
    is_invertible,
    rat,
    rref,
    solve_affine,
)

Index = tuple[int, ...]


class AmbiguousTwistError(ValueError):
    """The twisted-cyclicity system is solvable but not uniquely."""


class NotInvariantError(ValueError):
    """A cyclic-average was requested for a form the matrix does not preserve."""


class InternalConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagreed."""


class MultilinearForm:
    """Sparse exact tensor: map from 1-based index tuples to scalars."""

    __slots__ = ("dim", "arity", "entries")

    def __init__(self, dim: int, arity: int, entries: Mapping[Index, object]) -> None:
        if dim < 2:
            raise ValueError("dimension must be at least 2")
        if arity < 2:
            raise ValueError("arity must be at least 2")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "arity", arity)
        clean: dict[Index, Scalar] = {}
        for idx, c in entries.items():
            idx = tuple(idx)
            if len(idx) != arity:
                raise ValueError(f"index {idx} has length {len(idx)}, expected {arity}")
            if any(not (1 <= i <= dim) for i in idx):
                raise ValueError(f"index {idx} out of range 1..{dim}")
            c = rat(c)
            if c:
                if idx in clean:
                    raise ValueError(f"duplicate index {idx}")
                clean[idx] = c
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("MultilinearForm is immutable")

    def __getitem__(self, idx: Index) -> Scalar:
        return self.entries.get(tuple(idx), ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def nonzero_items(self) -> list[tuple[Index, Scalar]]:
        return sorted(self.entries.items())

    def scale(self, c) -> "MultilinearForm":
        c = rat(c)
        if not c:
            return MultilinearForm(self.dim, self.arity, {})
        return MultilinearForm(
            self.dim, self.arity, {i: c * x for i, x in self.entries.items()}
        )

    def add(self, other: "MultilinearForm") -> "MultilinearForm":
        if (self.dim, self.arity) != (other.dim, other.arity):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for i, c in other.entries.items():
            n = out.get(i, ZERO) + c
            if n:
                out[i] = n
            else:
                out.pop(i, None)
        w = MultilinearForm.__new__(MultilinearForm)
        object.__setattr__(w, "dim", self.dim)
        object.__setattr__(w, "arity", self.arity)
        object.__setattr__(w, "entries", out)
        return w

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultilinearForm)
            and self.dim == other.dim
            and self.arity == other.arity
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.arity, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        items = ", ".join(f"{i}: {c}" for i, c in self.nonzero_items())
        return f"MultilinearForm(n={self.dim}, m={self.arity}, {{{items}}})"


def _all_indices(n: int, length: int) -> Iterable[Index]:
    return itertools.product(range(1, n + 1), repeat=length)


def flattening(w: MultilinearForm, slot: int) -> Matrix:
    """The n^(m-1) x n matrix with the given slot (1-based) as column index
    and the remaining slots, in order, as the row index."""
    if not 1 <= slot <= w.arity:
        raise ValueError("slot out of range")
    n, m = w.dim, w.arity
    others = list(_all_indices(n, m - 1))
    entries = []
    for rest in others:
        for j in range(1, n + 1):
            idx = rest[: slot - 1] + (j,) + rest[slot - 1 :]
            entries.append(w[idx])
    return Matrix(len(others), n, entries)


def is_one_site_nondegenerate(w: MultilinearForm) -> bool:
    """Full column rank of the last-slot flattening."""
    _, _, rank = rref(flattening(w, w.arity))
    return rank == w.dim


def check_condition_i_prime(w: MultilinearForm) -> bool:
    """Nondegeneracy in every slot, not just the last."""
    for slot in range(1, w.arity + 1):
        _, _, rank = rref(flattening(w, slot))
        if rank != w.dim:
            return False
    return True


def twisting_element(w: MultilinearForm) -> Matrix | None:
    """Solve the twisted-cyclicity equations for Q.

    Returns the unique solution, None when the system is inconsistent, and
    raises :class:`AmbiguousTwistError` when the solution space has positive
    dimension (never silently picks one).
    """
    n, m = w.dim, w.arity
    rows = []
    rhs = []
    for idx in _all_indices(n, m):
        row = [ZERO] * (n * n)
        shifted_tail = idx[: m - 1]
        col_base = idx[m - 1] - 1
        for j in range(1, n + 1):
            c = w[(j,) + shifted_tail]
            if c:
                row[(j - 1) * n + col_base] = c
        rows.append(row)
        rhs.append(w[idx])
    part, kern = solve_affine(Matrix.from_rows(rows), rhs)
    if part is None:
        return None
    if kern:
        raise AmbiguousTwistError(
            f"twisting element underdetermined: {len(kern)} free parameters"
        )
    return Matrix(n, n, part)


def is_q_cyclic(w: MultilinearForm, q: Matrix) -> bool:
    """Does the specific matrix q satisfy the twisted-cyclicity equations."""
    n, m = w.dim, w.arity
    for idx in _all_indices(n, m):
        acc = ZERO
        for j in range(1, n + 1):
            qe = q.entry(j - 1, idx[m - 1] - 1)
            if qe:
                acc += qe * w[(j,) + idx[: m - 1]]
        if acc != w[idx]:
            return False
    return True


@dataclass(frozen=True)
class TwistReport:
    nondegenerate: bool
    q: Matrix | None
    preregular: bool
    twist_ambiguous: bool = False


def analyze(w: MultilinearForm) -> TwistReport:
    """Full structure report: nondegeneracy, twisting element, preregularity.

    Preregular means: one-site nondegenerate, the twisting element exists
    (unique then), and it is invertible -- all verified exactly.
    """
    nondeg = is_one_site_nondegenerate(w)
    ambiguous = False
    try:
        q = twisting_element(w)
    except AmbiguousTwistError:
        q = None
        ambiguous = True
    prereg = bool(nondeg and q is not None and is_invertible(q))
    return TwistReport(nondeg, q, prereg, ambiguous)


@dataclass(frozen=True)
class PolarSolution:
    """The affine space of polar tensors: a particular solution plus the
    kernel of the contraction map, both canonical."""

    particular: MultilinearForm
    kernel_basis: tuple[MultilinearForm, ...]

    def affine_dimension(self) -> int:
        return len(self.kernel_basis)

    def member(self, coeffs: Sequence) -> MultilinearForm:
        """particular + sum coeffs[i] * kernel_basis[i]."""
        if len(coeffs) != len(self.kernel_basis):
            raise ValueError("coefficient count mismatch")
        out = self.particular
        for c, k in zip(coeffs, self.kernel_basis):
            c = rat(c)
            if c:
                out = out.add(k.scale(c))
        return out


def polar(w: MultilinearForm) -> PolarSolution | None:
    """All tensors wt with sum_j wt^{k,j...} w_{j...,l} = delta^k_l.

    Returns None exactly when the form fails one-site nondegeneracy.
    Unknowns are ordered by their index tuple, so the particular solution
    (free variables zeroed) and the kernel basis are canonical.
    """
    n, m = w.dim, w.arity
    unknowns = list(_all_indices(n, m))
    col_of = {idx: i for i, idx in enumerate(unknowns)}
    rows = []
    rhs = []
    for mu in range(1, n + 1):
        for nu in range(1, n + 1):
            row = [ZERO] * len(unknowns)
            for mid in _all_indices(n, m - 1):
                c = w[mid + (nu,)]
                if c:
                    row[col_of[(mu,) + mid]] = c
            rows.append(row)
            rhs.append(ONE if mu == nu else ZERO)
    part, kern = solve_affine(Matrix.from_rows(rows), rhs)
    if part is None:
        return None

    def tensorize(vec) -> MultilinearForm:
        return MultilinearForm(
            n, m, {unknowns[i]: c for i, c in enumerate(vec) if c}
        )

    return PolarSolution(tensorize(part), tuple(tensorize(v) for v in kern))


def polar_contraction(wt: MultilinearForm, w: MultilinearForm) -> Matrix:
    """The matrix sum_j wt^{k,j1..j_{m-1}} w_{j1..j_{m-1},l}."""
    if (wt.dim, wt.arity) != (w.dim, w.arity):
        raise ValueError("shape mismatch")
    n, m = w.dim, w.arity
    acc: dict[tuple[int, int], Scalar] = {}
    for idx, c in wt.entries.items():
        mid = idx[1:]
        for idx2, c2 in w.entries.items():
            if idx2[: m - 1] == mid:
                key = (idx[0] - 1, idx2[m - 1] - 1)
                acc[key] = acc.get(key, ZERO) + c * c2
    return Matrix(
        n, n, [acc.get((i, j), ZERO) for i in range(n) for j in range(n)]
    )


def in_polar(wt: MultilinearForm, w: MultilinearForm) -> bool:
    """Exact membership of wt in the polar affine space of w."""
    return polar_contraction(wt, w).is_identity()


def q_inverse_from_polar(w: MultilinearForm, wt: MultilinearForm) -> Matrix:
    """Contract a polar member against the first slot of w.

    The result sum_j wt^{k,j...} w_{l,j...} must equal the inverse of the
    twisting element; that identity is verified exactly and a mismatch (which
    would mean the two routes disagree) raises InternalConsistencyError.
    """
    if not in_polar(wt, w):
        raise ValueError("tensor is not in the polar affine space")
    q = twisting_element(w)
    if q is None or not is_invertible(q):
        raise ValueError("form has no invertible twisting element")
    n, m = w.dim, w.arity
    acc: dict[tuple[int, int], Scalar] = {}
    for idx, c in wt.entries.items():
        mid = idx[1:]
        for idx2, c2 in w.entries.items():
            if idx2[1:] == mid:
                key = (idx[0] - 1, idx2[0] - 1)
                acc[key] = acc.get(key, ZERO) + c * c2
    out = Matrix(n, n, [acc.get((i, j), ZERO) for i in range(n) for j in range(n)])
    if out * q != Matrix.identity(n):
        raise InternalConsistencyError(
            "polar contraction does not invert the twisting element"
        )
    return out


def _transform(w: MultilinearForm, g: Matrix) -> MultilinearForm:
    """Entries of (x1,...,xm) -> w(g x1, ..., g xm)."""
    n, m = w.dim, w.arity
    out: dict[Index, Scalar] = {}
    for src, c in w.entries.items():
        # src are the summation indices contracted against columns of g
        factors = []
        for i in src:
            col = [(j + 1, g.entry(i - 1, j)) for j in range(n) if g.entry(i - 1, j)]
            factors.append(col)
        for combo in itertools.product(*factors):
            idx = tuple(j for j, _ in combo)
            coeff = c
            for _, ge in combo:
                coeff *= ge
            n0 = out.get(idx, ZERO) + coeff
            if n0:
                out[idx] = n0
            else:
                out.pop(idx, None)
    return MultilinearForm(n, m, out)


def check_invariance(w: MultilinearForm, q: Matrix) -> bool:
    """Does w(q x1, ..., q xm) = w(x1, ..., xm) hold exactly."""
    if q.rows != w.dim or q.cols != w.dim:
        raise ValueError("matrix shape mismatch")
    return _transform(w, q) == w


def pi_q(w: MultilinearForm, q: Matrix) -> MultilinearForm:
    """Cyclic symmetrization with respect to q.

    The k-th summand applies q to arguments k..m and then rotates them to
    the front; the input must already be q-invariant (rejected otherwise),
    and the output is then q-twisted-cyclic.  Applying the map twice
    multiplies by the arity, i.e. (1/m) * pi_q is a projection.
    """
    if not check_invariance(w, q):
        raise NotInvariantError("form is not invariant under the given matrix")
    n, m = w.dim, w.arity
    out = MultilinearForm(n, m, {})
    for k in range(1, m + 1):
        # k-th summand at (l1..lm): sum over rho_k..rho_m of
        #   prod_{i=k..m} q[rho_i, l_i] * w[rho_k..rho_m, l1..l_{k-1}]
        # so for a stored entry src of w: src[:m-k+1] are the rho's and
        # src[m-k+1:] pins (l1..l_{k-1}); the remaining l's are summed out.
        contrib: dict[Index, Scalar] = {}
        for src, c in w.entries.items():
            lead = src[m - k + 1 :]
            rhos = src[: m - k + 1]
            factors = []
            for rho in rhos:
                factors.append(
                    [(j + 1, q.entry(rho - 1, j)) for j in range(n) if q.entry(rho - 1, j)]
                )
            for combo in itertools.product(*factors):
                tail = tuple(j for j, _ in combo)
                coeff = c
                for _, qe in combo:
                    coeff *= qe
                full = lead + tail
                nval = contrib.get(full, ZERO) + coeff
                if nval:
                    contrib[full] = nval
                else:
                    contrib.pop(full, None)
        out = out.add(MultilinearForm(n, m, contrib))
    return out


def base_change(w: MultilinearForm, g: Matrix) -> MultilinearForm:
    """The form (x1,...,xm) -> w(g x1, ..., g xm) for invertible g.

    Conjugates the twisting element: the transformed form's twist is
    g^{-1} Q g whenever w has twist Q.
    """
    if not is_invertible(g):
        raise SingularMatrixError("base change requires an invertible matrix")
    return _transform(w, g)


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def make_signature(m: int, n: int | None = None) -> MultilinearForm:
    """The alternating m-linear form on K^m (entries = permutation signs)."""
    if n is not None and n != m:
        raise ValueError("the alternating form needs dimension equal to arity")
    entries = {}
    for perm in itertools.permutations(range(m)):
        idx = tuple(p + 1 for p in perm)
        entries[idx] = _perm_sign(perm)
    return MultilinearForm(m, m, entries)


def make_orthogonal(n: int, m: int) -> MultilinearForm:
    """The fully diagonal form: 1 when all m indices agree, else 0."""
    return MultilinearForm(n, m, {(i,) * m: ONE for i in range(1, n + 1)})


def make_bilinear(rows: Sequence[Sequence]) -> MultilinearForm:
    """An arbitrary bilinear form from its matrix b[i][j] = b(e_i, e_j)."""
    n = len(rows)
    entries = {}
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError("matrix must be square")
        for j, c in enumerate(row):
            c = rat(c)
            if c:
                entries[(i + 1, j + 1)] = c
    return MultilinearForm(n, 2, entries)
