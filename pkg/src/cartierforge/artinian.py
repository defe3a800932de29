"""Monomial Artinian algebras over GF(q) and their finite modules.

A ring is GF(q)[x_1..x_n] / I with I generated by monomials, at least one
pure power per variable (this forces finite dimension).  Modules are given
by commuting action matrices on a GF(q)-space, one per variable; every
functor used downstream (Frobenius pushforward, Hom, torsion) is then an
exact linear-algebra solve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import matrix as mx
from .field import GF, FiniteField, is_prime


@dataclass(frozen=True)
class ArtinRing:
    field: FiniteField
    vars: tuple
    relations: tuple            # exponent vectors generating the monomial ideal
    basis: tuple                # standard monomials (exponent vectors), sorted
    mult_ops: tuple             # one matrix per variable
    ambient: "ArtinRing | None" = None
    quotient_gens: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def key(self):
        return (self.field.p, self.field.deg, self.vars, tuple(sorted(self.relations)))

    def basis_index(self, mono) -> int:
        return self.basis.index(tuple(mono))

    def one(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.basis_index((0,) * self.nvars)] = 1
        return v

    def __repr__(self):
        rels = ",".join("*".join(f"{v}^{e}" for v, e in zip(self.vars, r) if e)
                        for r in self.relations) or "0"
        return f"ArtinRing(GF({self.field.p}^{self.field.deg})[{','.join(self.vars)}]/({rels}))"


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def ring_make(p_or_field, vars, relations, r: int = 1) -> ArtinRing:
    """Build and validate a monomial Artinian ring.

    `relations` is a list of exponent vectors; each variable must appear in a
    pure power so the quotient is finite dimensional.  Basis monomials are
    sorted by total degree then lexicographically, making all downstream
    matrices deterministic.
    """
    if isinstance(p_or_field, FiniteField):
        F = p_or_field
    else:
        if not is_prime(p_or_field):
            raise ValueError(f"p = {p_or_field} is not prime")
        F = GF(p_or_field, r)
    vars = tuple(vars)
    n = len(vars)
    relations = tuple(tuple(int(e) for e in rel) for rel in relations)
    for rel in relations:
        if len(rel) != n or any(e < 0 for e in rel):
            raise ValueError(f"bad relation exponent vector {rel}")
        # the all-zero vector (the unit monomial) is allowed: it cuts the
        # whole ring, giving the zero ring
    box = []
    for i in range(n):
        powers = [rel[i] for rel in relations if all(e == 0 for j, e in enumerate(rel) if j != i)]
        if not powers:
            raise ValueError(f"variable {vars[i]} has no pure power relation; "
                             "the quotient would be infinite dimensional")
        box.append(min(powers))
    monos = []
    for exps in itertools.product(*(range(b) for b in box)):
        if not any(_divides(rel, exps) for rel in relations):
            monos.append(exps)
    monos.sort(key=lambda e: (sum(e), e))
    basis = tuple(monos)
    index = {m: i for i, m in enumerate(basis)}
    ops = []
    for i in range(n):
        op = mx.zeros(len(basis), len(basis))
        for j, b in enumerate(basis):
            tgt = tuple(e + (1 if k == i else 0) for k, e in enumerate(b))
            if not any(_divides(rel, tgt) for rel in relations):
                op[index[tgt], j] = 1
        ops.append(op)
    return ArtinRing(F, vars, relations, basis, tuple(ops))


def quotient_ring(ring: ArtinRing, extra_relations) -> ArtinRing:
    """The quotient of `ring` by further monomial generators, with the
    ambient ring recorded so i_* / i-flat round trips are unambiguous."""
    extra = tuple(tuple(int(e) for e in rel) for rel in extra_relations)
    base = ring_make(ring.field, ring.vars, ring.relations + extra)
    return ArtinRing(base.field, base.vars, base.relations, base.basis,
                     base.mult_ops, ambient=ring, quotient_gens=extra)


@dataclass(frozen=True)
class FinModule:
    ring: ArtinRing
    dim: int
    actions: tuple   # one dim x dim matrix per ring variable

    def action_of(self, expvec) -> np.ndarray:
        """Action matrix of the monomial x^expvec."""
        F = self.ring.field
        out = mx.identity(self.dim)
        for X, e in zip(self.actions, expvec):
            for _ in range(int(e)):
                out = mx.mmul(F, X, out)
        return out

    def element_action(self, coeffs) -> np.ndarray:
        """Action matrix of the ring element with the given basis coords."""
        F = self.ring.field
        out = mx.zeros(self.dim, self.dim)
        for c, mono in zip(np.asarray(coeffs, dtype=np.int64), self.ring.basis):
            if c:
                out = F.add(out, F.mul(np.int64(c), self.action_of(mono)))
        return out


def module_violations(ring: ArtinRing, actions) -> list[str]:
    F = ring.field
    out = []
    for i in range(len(actions)):
        for j in range(i + 1, len(actions)):
            if not np.array_equal(mx.mmul(F, actions[i], actions[j]),
                                  mx.mmul(F, actions[j], actions[i])):
                out.append(f"actions of {ring.vars[i]} and {ring.vars[j]} do not commute")
    probe = FinModule(ring, actions[0].shape[0] if actions else 0, tuple(actions))
    for rel in ring.relations:
        if actions and not np.array_equal(probe.action_of(rel), mx.zeros(probe.dim, probe.dim)):
            out.append(f"relation monomial {rel} does not annihilate")
    return out


def fin_module(ring: ArtinRing, actions, check: bool = True) -> FinModule:
    actions = tuple(np.asarray(a, dtype=np.int64) for a in actions)
    if len(actions) != ring.nvars:
        raise ValueError("one action matrix per ring variable required")
    dim = actions[0].shape[0] if actions else 0
    for a in actions:
        if a.shape != (dim, dim):
            raise ValueError("action matrices must be square of equal size")
    if check:
        bad = module_violations(ring, actions)
        if bad:
            raise ValueError("invalid module: " + "; ".join(bad))
    return FinModule(ring, dim, actions)


def zero_module(ring: ArtinRing) -> FinModule:
    return FinModule(ring, 0, tuple(mx.zeros(0, 0) for _ in range(ring.nvars)))


def regular_module(ring: ArtinRing) -> FinModule:
    """The ring as a module over itself."""
    return FinModule(ring, ring.dim, ring.mult_ops)


def frobenius_pushforward(m: FinModule, power: int = 1) -> FinModule:
    """F^r_* M: same space, each variable now acts through its q-th power
    (q^power for iterated pushforwards)."""
    F = m.ring.field
    t = m.ring.q ** power
    return FinModule(m.ring, m.dim, tuple(mx.mat_pow(F, X, t) for X in m.actions))


def direct_sum(a: FinModule, b: FinModule) -> FinModule:
    if a.ring.key() != b.ring.key():
        raise ValueError("direct sum over different rings")
    F = a.ring.field
    acts = []
    for Xa, Xb in zip(a.actions, b.actions):
        X = mx.zeros(a.dim + b.dim, a.dim + b.dim)
        X[: a.dim, : a.dim] = Xa
        X[a.dim:, a.dim:] = Xb
        acts.append(X)
    return FinModule(a.ring, a.dim + b.dim, tuple(acts))


def hom_module(m: FinModule, n: FinModule) -> tuple[FinModule, list[np.ndarray]]:
    """Hom_R(M, N) as a module: solves H X^M_i = X^N_i H.

    Returns the hom module (action of a: H -> X^N(a) H) together with the
    basis of solution matrices, in canonical kernel order.
    """
    if m.ring.key() != n.ring.key():
        raise ValueError("hom between modules over different rings")
    F = m.ring.field
    rows = []
    eye_m, eye_n = mx.identity(m.dim), mx.identity(n.dim)
    for Xm, Xn in zip(m.actions, n.actions):
        # vec(H Xm) = (Xm^T kron I) vec H ; vec(Xn H) = (I kron Xn) vec H
        rows.append(F.sub(mx.kron(F, Xm.T, eye_n), mx.kron(F, eye_m, Xn)))
    sys = np.vstack(rows) if rows else mx.zeros(0, m.dim * n.dim)
    ker = mx.kernel(F, sys)
    basis = [mx.unvec(ker[:, k], n.dim, m.dim) for k in range(ker.shape[1])]
    acts = []
    for Xn in n.actions:
        imgs = [mx.vec(mx.mmul(F, Xn, H)) for H in basis]
        coords = mx.solve(F, ker, np.stack(imgs, axis=1)) if basis else mx.zeros(0, 0)
        acts.append(coords if basis else mx.zeros(0, 0))
    return FinModule(m.ring, len(basis), tuple(acts)), basis


def hom_coords(F: FiniteField, basis: list[np.ndarray], h: np.ndarray):
    """Coordinates of the matrix h in the given hom basis (None if outside)."""
    if not basis:
        return np.zeros(0, dtype=np.int64) if not h.size or not h.any() else None
    stacked = np.stack([mx.vec(b) for b in basis], axis=1)
    return mx.solve(F, stacked, mx.vec(h))


def f_flat(m: FinModule, power: int = 1) -> tuple[FinModule, list[np.ndarray]]:
    """F^(r,flat) M = Hom_R(F^r_* R, M) with its twisted R-structure.

    The solution space is { Phi : Phi mu_i^(q^power) = X_i Phi }; the action
    of x_i inserts the variable before the Frobenius restriction, i.e. sends
    Phi to Phi mu_i.  (Using the plain hom structure here would break the
    adjunction F^(2,flat) = F^flat o F^flat on non-regular rings.)
    """
    F = m.ring.field
    R = m.ring
    t = R.q ** power
    rows = []
    eye_r, eye_m = mx.identity(R.dim), mx.identity(m.dim)
    for mu, X in zip(R.mult_ops, m.actions):
        mu_q = mx.mat_pow(F, mu, t)
        rows.append(F.sub(mx.kron(F, mu_q.T, eye_m), mx.kron(F, eye_r, X)))
    sys = np.vstack(rows) if rows else mx.zeros(0, R.dim * m.dim)
    ker = mx.kernel(F, sys)
    basis = [mx.unvec(ker[:, k], m.dim, R.dim) for k in range(ker.shape[1])]
    acts = []
    for mu in R.mult_ops:
        imgs = [mx.vec(mx.mmul(F, H, mu)) for H in basis]
        coords = mx.solve(F, ker, np.stack(imgs, axis=1)) if basis else mx.zeros(0, 0)
        acts.append(coords)
    return FinModule(R, len(basis), tuple(acts)), basis


def i_torsion(m: FinModule, j_gens) -> tuple[FinModule, np.ndarray]:
    """The J-torsion submodule { v : J v = 0 }, as a module over R/J.

    Returns (module over the quotient ring, basis columns inside m).
    """
    F = m.ring.field
    gens = [tuple(int(e) for e in g) for g in j_gens]
    if not gens:
        qring = quotient_ring(m.ring, ())
        return FinModule(qring, m.dim, m.actions), mx.identity(m.dim)
    stack = np.vstack([m.action_of(g) for g in gens])
    B = mx.kernel(F, stack)
    qring = quotient_ring(m.ring, gens)
    acts = []
    for X in m.actions:
        sol = mx.solve(F, B, mx.mmul(F, X, B)) if B.shape[1] else mx.zeros(0, 0)
        acts.append(sol)
    return FinModule(qring, B.shape[1], tuple(acts)), B


def restrict_scalars(m: FinModule) -> FinModule:
    """i_* : view a module over R/J as a module over the ambient R.

    The variables are shared, so the action matrices are unchanged."""
    if m.ring.ambient is None:
        raise ValueError("module ring does not declare an ambient ring")
    return FinModule(m.ring.ambient, m.dim, m.actions)


def submodule(m: FinModule, cols: np.ndarray, check: bool = True) -> FinModule:
    """Restrict to the span of the given (independent) columns."""
    F = m.ring.field
    acts = []
    for X in m.actions:
        sol = mx.solve(F, cols, mx.mmul(F, X, cols)) if cols.shape[1] else mx.zeros(0, 0)
        if sol is None:
            raise ValueError("columns do not span a submodule")
        acts.append(sol)
    sub = FinModule(m.ring, cols.shape[1], tuple(acts))
    if check:
        bad = module_violations(m.ring, sub.actions)
        if bad:
            raise ValueError("submodule validation failed: " + "; ".join(bad))
    return sub


def quotient_data(F: FiniteField, dim: int, cols: np.ndarray):
    """Projection/section pair for the quotient by the span of `cols`.

    Returns (proj, sect): proj maps the big space onto quotient coordinates,
    sect picks representative vectors; proj @ sect = identity.
    """
    if cols.size == 0:
        return mx.identity(dim), mx.identity(dim)
    r, pivots = mx.rref(F, cols.T)
    comp = [i for i in range(dim) if i not in pivots]
    big = np.hstack([cols, mx.identity(dim)[:, comp]])
    big_inv = mx.inverse(F, big)
    if big_inv is None:
        raise ValueError("quotient basis completion failed")
    proj = big_inv[cols.shape[1]:, :]
    sect = mx.identity(dim)[:, comp]
    return proj, sect


def quotient_module(m: FinModule, cols: np.ndarray):
    """Quotient of m by the submodule spanned by `cols`.

    Returns (quotient module, proj, sect)."""
    F = m.ring.field
    proj, sect = quotient_data(F, m.dim, cols)
    acts = tuple(mx.mmul(F, proj, mx.mmul(F, X, sect)) for X in m.actions)
    return FinModule(m.ring, proj.shape[0], acts), proj, sect
