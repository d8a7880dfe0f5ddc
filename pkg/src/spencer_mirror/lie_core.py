"""Rank-3 Lie algebra arithmetic, symmetric tensor powers, and the degree-raising
extension operator driven by a dual functional.

Conventions
-----------
* The default algebra has basis e_1, e_2, e_3 with structure constants
  f[a][b][c] = eps_abc, so [e_1, e_2] = e_3 and cyclic.  The data model admits
  any dimension, but only this algebra ships with tests.
* A symmetric k-tensor is stored covariantly, by its evaluation values on
  sorted basis tuples (i_1 <= ... <= i_k); the coefficient space has dimension
  C(k + dim - 1, k).  Evaluation on arbitrary vectors is multilinear and
  permutation invariant.
* The symmetric product is the normalized (projection) one, so powers of a
  degree-1 functional evaluate multiplicatively:
  (alpha . alpha)(v, w) = alpha(v) alpha(w).
* ``spencer_extension`` is defined on the sorted monomial basis, factors
  differentiated left-to-right in canonical index order with the odd-degree
  sign accumulated per factor, then extended linearly.  Degree-0 input routes
  to ``delta_on_scalar``.  The whole operator is linear in the dual functional
  and flips sign exactly (bitwise on the coefficient array) under negation of
  the functional.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product

import numpy as np

from .errors import CapacityError, InputError

DEFAULT_DIM = 3
DEFAULT_Q_MAX = 3


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


def epsilon_structure(dim: int = 3) -> np.ndarray:
    """Totally antisymmetric structure constants eps_abc (dim must be 3)."""
    if dim != 3:
        raise InputError("epsilon structure constants exist only in dimension 3")
    f = np.zeros((3, 3, 3))
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        f[a, b, c] = 1.0
        f[b, a, c] = -1.0
    return f


@dataclass
class LieAlgebraData:
    """Structure constants, Killing form and dimension of a real Lie algebra.

    The Killing form is derived from the structure constants at construction
    time; use :meth:`validate` to check antisymmetry, the Jacobi identity and
    nondegeneracy.
    """

    dim: int
    structure_constants: np.ndarray
    killing: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        f = np.asarray(self.structure_constants, dtype=float)
        if f.shape != (self.dim,) * 3:
            raise InputError(
                f"structure constants must have shape {(self.dim,) * 3}, got {f.shape}"
            )
        self.structure_constants = _readonly(f)
        if self.killing is None:
            ads = [self.ad_basis(a) for a in range(self.dim)]
            K = np.array(
                [[np.trace(ads[a] @ ads[b]) for b in range(self.dim)] for a in range(self.dim)]
            )
            self.killing = _readonly(K)
        else:
            self.killing = _readonly(self.killing)

    def ad_basis(self, a: int) -> np.ndarray:
        """Matrix of ad_{e_a}: column b holds the coefficients of [e_a, e_b]."""
        return self.structure_constants[a].T.copy()

    def validate(self, tol: float = 1e-14) -> None:
        f = self.structure_constants
        if np.max(np.abs(f + np.swapaxes(f, 0, 1))) > tol:
            raise InputError("structure constants are not antisymmetric in (a, b)")
        jac = (
            np.einsum("abe,ecd->abcd", f, f)
            + np.einsum("bce,ead->abcd", f, f)
            + np.einsum("cae,ebd->abcd", f, f)
        )
        if np.max(np.abs(jac)) > tol:
            raise InputError("Jacobi identity fails beyond tolerance")
        if np.max(np.abs(self.killing - self.killing.T)) > tol:
            raise InputError("Killing form is not symmetric")
        if abs(np.linalg.det(self.killing)) <= tol:
            raise InputError("Killing form is degenerate")


@lru_cache(maxsize=None)
def su2_epsilon() -> LieAlgebraData:
    """The default algebra: dim 3, f[a][b][c] = eps_abc, Killing form -2*I."""
    alg = LieAlgebraData(dim=3, structure_constants=epsilon_structure())
    alg.validate()
    return alg


@dataclass
class LieVector:
    """Element of the algebra in the fixed basis e_1..e_dim."""

    coeffs: np.ndarray
    algebra: LieAlgebraData = field(default_factory=su2_epsilon)

    def __post_init__(self):
        self.coeffs = _readonly(self.coeffs)
        if self.coeffs.shape != (self.algebra.dim,):
            raise InputError(
                f"vector has {self.coeffs.shape} coefficients, algebra dimension is {self.algebra.dim}"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise InputError("vector coefficients must be finite")

    @classmethod
    def basis(cls, a: int, algebra: LieAlgebraData | None = None) -> "LieVector":
        algebra = algebra or su2_epsilon()
        c = np.zeros(algebra.dim)
        c[a] = 1.0
        return cls(c, algebra)


@dataclass
class DualFunctional:
    """Dual-space element lambda = sum_a lambda_a e*_a; mirror() negates it."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = _readonly(self.coeffs)
        if self.coeffs.ndim != 1:
            raise InputError("dual functional coefficients must be a 1-D array")
        if not np.all(np.isfinite(self.coeffs)):
            raise InputError("dual functional coefficients must be finite")

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def norm_sq(self) -> float:
        return float(np.dot(self.coeffs, self.coeffs))

    def mirror(self) -> "DualFunctional":
        return DualFunctional(-self.coeffs)


def bracket(X: LieVector, Y: LieVector) -> LieVector:
    """Lie bracket [X, Y]_c = sum_{a,b} f[a][b][c] X_a Y_b."""
    if X.algebra is not Y.algebra and X.algebra.dim != Y.algebra.dim:
        raise InputError("bracket arguments live in different algebras")
    f = X.algebra.structure_constants
    out = np.einsum("abc,a,b->c", f, X.coeffs, Y.coeffs)
    return LieVector(out, X.algebra)


def ad_matrix(X: LieVector) -> np.ndarray:
    """Matrix of ad_X = [X, .] in the fixed basis."""
    return np.einsum("abc,a->cb", X.algebra.structure_constants, X.coeffs)


def killing_pairing(X: LieVector, Y: LieVector) -> float:
    """tr(ad_X ad_Y); equals -2 delta_ab on default basis vectors."""
    if X.algebra.dim != Y.algebra.dim:
        raise InputError("Killing pairing arguments have mismatched dimensions")
    return float(np.trace(ad_matrix(X) @ ad_matrix(Y)))


def pair(lam: DualFunctional, X: LieVector) -> float:
    """Componentwise dual pairing <lambda, X> = sum_a lambda_a X_a."""
    if lam.dim != X.algebra.dim:
        raise InputError(
            f"dual functional dimension {lam.dim} != algebra dimension {X.algebra.dim}"
        )
    return float(np.dot(lam.coeffs, X.coeffs))


def sym_space_dim(k: int, dim: int = DEFAULT_DIM) -> int:
    """Dimension C(k + dim - 1, k) of the degree-k symmetric coefficient space."""
    if k < 0:
        raise InputError("symmetric degree must be nonnegative")
    return math.comb(k + dim - 1, k)


@lru_cache(maxsize=None)
def multi_indices(k: int, dim: int = DEFAULT_DIM) -> tuple[tuple[int, ...], ...]:
    """Sorted multi-indices (i_1 <= ... <= i_k) over range(dim), in lex order."""
    return tuple(combinations_with_replacement(range(dim), k))


@lru_cache(maxsize=None)
def _index_lookup(k: int, dim: int = DEFAULT_DIM) -> dict[tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(multi_indices(k, dim))}


@dataclass
class SymTensor:
    """Symmetric covariant k-tensor, stored by evaluation values on sorted
    basis tuples.

    ``coeffs[p]`` is T(e_{i_1}, ..., e_{i_k}) for the p-th sorted multi-index.
    """

    degree: int
    coeffs: np.ndarray
    dim: int = DEFAULT_DIM

    def __post_init__(self):
        self.coeffs = _readonly(self.coeffs)
        expected = sym_space_dim(self.degree, self.dim)
        if self.coeffs.shape != (expected,):
            raise InputError(
                f"degree-{self.degree} tensor needs {expected} coefficients, got {self.coeffs.shape}"
            )

    @classmethod
    def zero(cls, k: int, dim: int = DEFAULT_DIM) -> "SymTensor":
        return cls(k, np.zeros(sym_space_dim(k, dim)), dim)

    @classmethod
    def scalar(cls, c: float, dim: int = DEFAULT_DIM) -> "SymTensor":
        return cls(0, np.array([float(c)]), dim)

    @classmethod
    def basis_one(cls, a: int, dim: int = DEFAULT_DIM) -> "SymTensor":
        """The degree-1 functional e*_a."""
        c = np.zeros(dim)
        c[a] = 1.0
        return cls(1, c, dim)

    @classmethod
    def from_dict(cls, k: int, values: dict[tuple[int, ...], float], dim: int = DEFAULT_DIM) -> "SymTensor":
        c = np.zeros(sym_space_dim(k, dim))
        lookup = _index_lookup(k, dim)
        for idx, v in values.items():
            c[lookup[tuple(sorted(idx))]] = v
        return cls(k, c, dim)

    def coeff(self, idx: tuple[int, ...]) -> float:
        return float(self.coeffs[_index_lookup(self.degree, self.dim)[tuple(sorted(idx))]])

    def evaluate(self, *vectors) -> float:
        """Full multilinear evaluation T(v_1, ..., v_k)."""
        if len(vectors) != self.degree:
            raise InputError(f"degree-{self.degree} tensor evaluated on {len(vectors)} vectors")
        vecs = [v.coeffs if isinstance(v, LieVector) else np.asarray(v, dtype=float) for v in vectors]
        if self.degree == 0:
            return float(self.coeffs[0])
        lookup = _index_lookup(self.degree, self.dim)
        total = 0.0
        for js in product(range(self.dim), repeat=self.degree):
            w = 1.0
            for m, j in enumerate(js):
                w *= vecs[m][j]
            if w != 0.0:
                total += self.coeffs[lookup[tuple(sorted(js))]] * w
        return total

    def __add__(self, other: "SymTensor") -> "SymTensor":
        if self.degree != other.degree or self.dim != other.dim:
            raise InputError("cannot add symmetric tensors of different degree or dimension")
        return SymTensor(self.degree, np.asarray(self.coeffs) + other.coeffs, self.dim)

    def __rmul__(self, scalar: float) -> "SymTensor":
        return SymTensor(self.degree, scalar * np.asarray(self.coeffs), self.dim)

    def __neg__(self) -> "SymTensor":
        return SymTensor(self.degree, -np.asarray(self.coeffs), self.dim)


def sym_product(A: SymTensor, B: SymTensor) -> SymTensor:
    """Normalized symmetric product: average of A x B over position splits.

    (A . B)(v_1..v_{p+q}) = C(p+q, p)^{-1} sum_{|S|=p} A(v_S) B(v_{S^c}).
    """
    if A.dim != B.dim:
        raise InputError("symmetric product of tensors over different algebras")
    p, q = A.degree, B.degree
    if p == 0:
        return float(A.coeffs[0]) * B
    if q == 0:
        return float(B.coeffs[0]) * A
    k = p + q
    lookup_a = _index_lookup(p, A.dim)
    lookup_b = _index_lookup(q, A.dim)
    out = np.zeros(sym_space_dim(k, A.dim))
    norm = math.comb(k, p)
    for pos, J in enumerate(multi_indices(k, A.dim)):
        acc = 0.0
        for S in combinations(range(k), p):
            ia = tuple(sorted(J[s] for s in S))
            rest = tuple(sorted(J[s] for s in range(k) if s not in S))
            acc += A.coeffs[lookup_a[ia]] * B.coeffs[lookup_b[rest]]
        out[pos] = acc / norm
    return SymTensor(k, out, A.dim)


def delta_on_scalar(lam: DualFunctional, c: float) -> SymTensor:
    """Degree-0 rule: c maps to the degree-1 functional X -> c <lambda, X>."""
    return SymTensor(1, float(c) * np.asarray(lam.coeffs), lam.dim)


def delta_on_generator(lam: DualFunctional, v: LieVector) -> SymTensor:
    """Degree-1 rule via nested brackets:

    T(w_1, w_2) = (1/2) (<lam, [w_1, [w_2, v]]> + <lam, [w_2, [w_1, v]]>).
    """
    alg = v.algebra
    if lam.dim != alg.dim:
        raise InputError("dual functional and generator dimensions differ")
    basis = [LieVector.basis(a, alg) for a in range(alg.dim)]
    vals = {}
    for a, b in multi_indices(2, alg.dim):
        t1 = pair(lam, bracket(basis[a], bracket(basis[b], v)))
        t2 = pair(lam, bracket(basis[b], bracket(basis[a], v)))
        vals[(a, b)] = 0.5 * (t1 + t2)
    return SymTensor.from_dict(2, vals, alg.dim)


def _multinomial(idx: tuple[int, ...]) -> int:
    k = len(idx)
    out = math.factorial(k)
    for _, count in Counter(idx).items():
        out //= math.factorial(count)
    return out


def spencer_extension(
    lam: DualFunctional,
    s: SymTensor,
    q_max: int = DEFAULT_Q_MAX,
    algebra: LieAlgebraData | None = None,
) -> SymTensor:
    """Degree-raising extension: linear over the sorted monomial basis, each
    monomial differentiated factor-by-factor in canonical order with the sign
    (-1)^p accumulated per preceding degree-1 factor.

    Output degree is ``s.degree + 1``; input degree above ``q_max`` raises
    CapacityError.  Exactly antisymmetric under ``lam -> -lam``.
    """
    if s.degree > q_max:
        raise CapacityError(f"input degree {s.degree} exceeds q_max={q_max}")
    if lam.dim != s.dim:
        raise InputError("dual functional and tensor dimensions differ")
    if s.degree == 0:
        return delta_on_scalar(lam, float(s.coeffs[0]))

    algebra = algebra or su2_epsilon()
    k = s.degree
    dgen = [delta_on_generator(lam, LieVector.basis(a, algebra)) for a in range(s.dim)]
    out = np.zeros(sym_space_dim(k + 1, s.dim))
    for pos, I in enumerate(multi_indices(k, s.dim)):
        value = float(s.coeffs[pos])
        if value == 0.0:
            continue
        mono_coeff = value * _multinomial(I)
        for p_slot in range(k):
            term = dgen[I[p_slot]]
            for j, a in enumerate(I):
                if j != p_slot:
                    term = sym_product(term, SymTensor.basis_one(a, s.dim))
            sign = -1.0 if p_slot % 2 else 1.0
            out += (sign * mono_coeff) * np.asarray(term.coeffs)
    return SymTensor(k + 1, out, s.dim)


def delta_matrix(
    lam: DualFunctional,
    k: int,
    q_max: int = DEFAULT_Q_MAX,
    algebra: LieAlgebraData | None = None,
) -> np.ndarray:
    """Matrix of the extension operator on degree-k coefficient space
    (columns indexed by input multi-indices, rows by output ones)."""
    dim_in = sym_space_dim(k)
    dim_out = sym_space_dim(k + 1)
    M = np.zeros((dim_out, dim_in))
    for j in range(dim_in):
        c = np.zeros(dim_in)
        c[j] = 1.0
        M[:, j] = spencer_extension(lam, SymTensor(k, c), q_max=q_max, algebra=algebra).coeffs
    return M


def delta_matrix_csv(lam: DualFunctional, k: int, q_max: int = DEFAULT_Q_MAX) -> str:
    """CSV dump of the degree-k extension matrix (row = output multi-index,
    column = input multi-index)."""
    M = delta_matrix(lam, k, q_max=q_max)
    cols = ["/".join(str(i + 1) for i in idx) or "scalar" for idx in multi_indices(k)]
    rows = ["/".join(str(i + 1) for i in idx) for idx in multi_indices(k + 1)]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["out_index"] + cols)
    for name, row in zip(rows, M):
        writer.writerow([name] + [repr(x) for x in row])
    return buf.getvalue()


def commutator_pairing_magnitude(lam: DualFunctional, algebra: LieAlgebraData | None = None) -> float:
    """max_{a<b} |<lambda, [e_a, e_b]>| — zero iff lambda annihilates the
    derived subalgebra (degenerate constraint direction)."""
    algebra = algebra or su2_epsilon()
    best = 0.0
    for a in range(algebra.dim):
        for b in range(a + 1, algebra.dim):
            val = abs(pair(lam, bracket(LieVector.basis(a, algebra), LieVector.basis(b, algebra))))
            best = max(best, val)
    return best
