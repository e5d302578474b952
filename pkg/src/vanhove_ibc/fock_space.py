"""Truncated bosonic Fock space over a finite set of modes.

Basis states are occupation vectors (n_1, ..., n_m) with sum n_i <= n_max,
ordered by total particle number and, inside each sector, in the order
produced by ``itertools.combinations_with_replacement`` on the mode labels
(so ``(1, 0, ..., 0)`` precedes ``(0, 1, 0, ...)``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import InvalidArgumentError, ResourceLimitError


@dataclass(frozen=True)
class SparseOperator:
    """Thin wrapper around a canonical CSR matrix.

    ``hermitian`` records what the construction guarantees; use
    :func:`vanhove_ibc.spectral.hermiticity_audit` to check it.
    """

    matrix: sp.csr_matrix
    hermitian: bool = False

    def __post_init__(self):
        m = sp.csr_matrix(self.matrix)
        m.sum_duplicates()
        m.sort_indices()
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def matvec(self, x):
        return self.matrix @ x

    def __matmul__(self, x):
        return self.matrix @ x

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator(self.matrix + other.matrix, self.hermitian and other.hermitian)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator(self.matrix - other.matrix, self.hermitian and other.hermitian)

    def scaled(self, c) -> "SparseOperator":
        return SparseOperator(self.matrix * c, self.hermitian and np.imag(c) == 0)

    def shifted(self, c: float) -> "SparseOperator":
        """Return ``self + c * 1``."""
        eye = sp.identity(self.dim, dtype=self.matrix.dtype, format="csr")
        return SparseOperator(self.matrix + c * eye, self.hermitian)

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.matrix.conj().T.tocsr(), self.hermitian)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True)
class FockBasis:
    """Occupation-number basis with ``m`` modes and at most ``n_max`` particles."""

    m: int
    n_max: int

    def __post_init__(self):
        if self.m < 1 or self.n_max < 0:
            raise InvalidArgumentError(f"need m >= 1 and n_max >= 0, got m={self.m}, n_max={self.n_max}")

    @property
    def dim(self) -> int:
        return math.comb(self.m + self.n_max, self.n_max)

    def sector_dim(self, n: int) -> int:
        return math.comb(self.m + n - 1, n)

    @cached_property
    def sector_offsets(self) -> np.ndarray:
        """``offsets[n]`` is the ordinal of the first state with n particles."""
        dims = [self.sector_dim(n) for n in range(self.n_max + 1)]
        return np.concatenate([[0], np.cumsum(dims)]).astype(np.int64)

    def sector_slice(self, n: int) -> slice:
        return slice(int(self.sector_offsets[n]), int(self.sector_offsets[n + 1]))

    @cached_property
    def occupations(self) -> np.ndarray:
        """(dim, m) integer array of occupation vectors in basis order."""
        occ = np.zeros((self.dim, self.m), dtype=np.int16)
        row = 0
        for n in range(self.n_max + 1):
            for combo in itertools.combinations_with_replacement(range(self.m), n):
                for mode in combo:
                    occ[row, mode] += 1
                row += 1
        occ.setflags(write=False)
        return occ

    @cached_property
    def particle_numbers(self) -> np.ndarray:
        return self.occupations.sum(axis=1).astype(np.int64)

    @cached_property
    def _prefix_counts(self) -> np.ndarray:
        # P[r, a] = number of size-r multisets whose smallest element is < a,
        # among multisets drawn from {v, ..., m-1} summed over v < a.
        m = self.m
        P = np.zeros((self.n_max + 1, m + 1), dtype=np.int64)
        for r in range(self.n_max + 1):
            cnt = [math.comb(m - v + r - 1, r) for v in range(m)]
            P[r, 1:] = np.cumsum(cnt)
        return P

    def ordinals(self, occ) -> np.ndarray:
        """Vectorised inverse of :attr:`occupations` for rows of one or more sectors."""
        occ = np.atleast_2d(np.asarray(occ))
        if occ.shape[1] != self.m:
            raise InvalidArgumentError(f"occupation vectors must have length {self.m}")
        if (occ < 0).any():
            raise InvalidArgumentError("occupations must be non-negative")
        totals = occ.sum(axis=1)
        if (totals > self.n_max).any():
            raise InvalidArgumentError(f"occupation exceeds n_max={self.n_max}")
        out = np.empty(occ.shape[0], dtype=np.int64)
        for n in np.unique(totals):
            rows = np.flatnonzero(totals == n)
            out[rows] = self.sector_offsets[n] + self._sector_rank(occ[rows], int(n))
        return out

    def _sector_rank(self, occ: np.ndarray, n: int) -> np.ndarray:
        if n == 0:
            return np.zeros(occ.shape[0], dtype=np.int64)
        s = occ.shape[0]
        # sorted mode tuples c_1 <= ... <= c_n, one row per state
        tuples = np.repeat(np.tile(np.arange(self.m), s), occ.astype(np.int64).ravel()).reshape(s, n)
        P = self._prefix_counts
        rank = np.zeros(s, dtype=np.int64)
        prev = np.zeros(s, dtype=np.int64)
        for j in range(n):
            r = n - j - 1
            rank += P[r, tuples[:, j]] - P[r, prev]
            prev = tuples[:, j]
        return rank

    def ordinal(self, occ) -> int:
        return int(self.ordinals(np.asarray(occ)[None, :])[0])

    def occupation(self, ordinal: int) -> tuple:
        return tuple(int(x) for x in self.occupations[ordinal])

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    @cached_property
    def _raising_pattern(self):
        """Nonzero pattern of a*_i: (target, source, mode, sqrt(n_i + 1))."""
        occ = self.occupations
        sources = np.flatnonzero(self.particle_numbers < self.n_max)
        if sources.size == 0:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, empty, np.zeros(0)
        src = np.repeat(sources, self.m)
        mode = np.tile(np.arange(self.m), sources.size)
        raised = occ[src].astype(np.int64)
        amp = np.sqrt(raised[np.arange(src.size), mode] + 1.0)
        raised[np.arange(src.size), mode] += 1
        tgt = self.ordinals(raised)
        return tgt, src, mode, amp


def _check_length(basis: FockBasis, f) -> np.ndarray:
    f = np.asarray(f)
    if f.ndim != 1 or f.size != basis.m:
        raise InvalidArgumentError(f"one-particle vector must have length {basis.m}, got shape {f.shape}")
    return f


def creator(basis: FockBasis, f) -> SparseOperator:
    """a*(f) = sum_i f_i a*_i compressed onto the truncated space.

    Components that would land in sector n_max + 1 are dropped.
    """
    f = _check_length(basis, f)
    tgt, src, mode, amp = basis._raising_pattern
    vals = amp * f[mode]
    mat = sp.csr_matrix((vals, (tgt, src)), shape=(basis.dim, basis.dim))
    return SparseOperator(mat, hermitian=False)


def annihilator(basis: FockBasis, f) -> SparseOperator:
    """a(f) = sum_i conj(f_i) a_i, the adjoint of :func:`creator`."""
    return creator(basis, f).adjoint()


def field_operator(basis: FockBasis, f) -> SparseOperator:
    """a(f) + a*(f), assembled directly so that Hermiticity is exact."""
    c = creator(basis, f).matrix
    return SparseOperator(c + c.conj().T, hermitian=True)


def second_quantize_diagonal(basis: FockBasis, energies) -> SparseOperator:
    """dGamma(T) for diagonal T: entry sum_i n_i * energies_i."""
    energies = np.asarray(energies, dtype=float)
    if energies.shape != (basis.m,):
        raise InvalidArgumentError(f"energies must have length {basis.m}")
    diag = basis.occupations @ energies
    return SparseOperator(sp.diags(diag, format="csr"), hermitian=True)


def number_operator(basis: FockBasis) -> SparseOperator:
    return second_quantize_diagonal(basis, np.ones(basis.m))


# -- symmetric tensors -------------------------------------------------------

MAX_SYM_ORDER = 6
MAX_SYM_DIM = 6


def tensor_power(v, n: int) -> np.ndarray:
    """v^{(x) n} as an n-dimensional array."""
    out = np.asarray(v, dtype=complex)
    if n == 0:
        return np.ones(())
    for _ in range(n - 1):
        out = np.multiply.outer(out, v)
    return out


def symmetrize(vectors) -> np.ndarray:
    """Sym(u_1 (x) ... (x) u_n): average of the tensor product over all n! orderings.

    Brute force, intended as an oracle at small scale (n, d <= 6).
    """
    vectors = [np.asarray(u, dtype=complex) for u in vectors]
    n = len(vectors)
    if n == 0:
        raise InvalidArgumentError("need at least one vector")
    d = vectors[0].size
    if any(u.shape != (d,) for u in vectors):
        raise InvalidArgumentError("all vectors must share one length")
    if n > MAX_SYM_ORDER or d > MAX_SYM_DIM:
        raise ResourceLimitError(f"symmetrize limited to n, d <= 6 (got n={n}, d={d})")
    prod = vectors[0]
    for u in vectors[1:]:
        prod = np.multiply.outer(prod, u)
    total = np.zeros_like(prod)
    for perm in itertools.permutations(range(n)):
        total += np.transpose(prod, perm)
    return total / math.factorial(n)


def polarization_decompose(vectors) -> list[tuple[complex, np.ndarray]]:
    """Write Sym(u_1 (x) ... (x) u_n) as a signed sum of tensor powers.

    Returns the 2^n pairs ``(alpha_j / (2^n n!), v_j)`` with
    ``v_j = sum_k (-1)^{j_k} u_k`` and ``alpha_j = (-1)^{|j|}``, so that
    ``sum(c * tensor_power(v, n) for c, v in pairs)`` equals the symmetrised product.
    """
    us = np.array([np.asarray(u, dtype=complex) for u in vectors])
    n = us.shape[0]
    if n < 1:
        raise InvalidArgumentError("need at least one vector")
    norm = 1.0 / (2**n * math.factorial(n))
    pairs = []
    for j in itertools.product((0, 1), repeat=n):
        signs = (-1.0) ** np.array(j)
        pairs.append((norm * (-1.0) ** sum(j), signs @ us))
    return pairs
