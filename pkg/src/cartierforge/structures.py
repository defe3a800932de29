"""Cartier- and Frobenius-module structures on Artinian-tier modules.

A Cartier structure is a matrix K with K X_i^q = X_i K (the structural map
F_* M -> M written on the common underlying space); a Frobenius structure
is T with T X_i = X_i^q T.  `power` records structures for iterated
Frobenii: equivariance is then against q^power.

Everything here is exact linear algebra: nilpotence, stable parts, the
adjoint structural morphism, unitalization, and nil-isomorphism testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matrix as mx
from .artinian import (ArtinRing, FinModule, direct_sum, f_flat,
                       hom_coords, i_torsion, module_violations,
                       quotient_module, regular_module, restrict_scalars,
                       submodule, zero_module)


CARTIER = "cartier"
FROBENIUS = "frobenius"


@dataclass(frozen=True)
class CartierModule:
    module: FinModule
    kappa: np.ndarray
    power: int = 1

    kind = CARTIER

    @property
    def mat(self) -> np.ndarray:
        return self.kappa

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def ring(self) -> ArtinRing:
        return self.module.ring


@dataclass(frozen=True)
class FModule:
    module: FinModule
    tau: np.ndarray
    power: int = 1

    kind = FROBENIUS

    @property
    def mat(self) -> np.ndarray:
        return self.tau

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def ring(self) -> ArtinRing:
        return self.module.ring


Structured = CartierModule | FModule


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple

    def __bool__(self):
        return self.ok


def cartier_module(module: FinModule, kappa, power: int = 1,
                   check: bool = True) -> CartierModule:
    m = CartierModule(module, np.asarray(kappa, dtype=np.int64), power)
    if check:
        rep = validate(m)
        if not rep.ok:
            raise ValueError("invalid Cartier structure: " + "; ".join(rep.violations))
    return m


def f_module(module: FinModule, tau, power: int = 1, check: bool = True) -> FModule:
    m = FModule(module, np.asarray(tau, dtype=np.int64), power)
    if check:
        rep = validate(m)
        if not rep.ok:
            raise ValueError("invalid F-module structure: " + "; ".join(rep.violations))
    return m


def with_structure(m: Structured, module: FinModule, mat: np.ndarray,
                   check: bool = False) -> Structured:
    ctor = cartier_module if m.kind == CARTIER else f_module
    return ctor(module, mat, m.power, check=check)


def validate(m: Structured) -> ValidationReport:
    """Check the commuting-square condition on every ring generator, plus
    underlying module validity.  Returns violations instead of raising."""
    F = m.ring.field
    out = list(module_violations(m.ring, m.module.actions))
    if m.mat.shape != (m.dim, m.dim):
        out.append("structure matrix has wrong shape")
        return ValidationReport(False, tuple(out))
    t = m.ring.q ** m.power
    for var, X in zip(m.ring.vars, m.module.actions):
        Xq = mx.mat_pow(F, X, t)
        if m.kind == CARTIER:
            lhs, rhs = mx.mmul(F, m.mat, Xq), mx.mmul(F, X, m.mat)
            law = f"K*{var}^q = {var}*K"
        else:
            lhs, rhs = mx.mmul(F, m.mat, X), mx.mmul(F, Xq, m.mat)
            law = f"T*{var} = {var}^q*T"
        if not np.array_equal(lhs, rhs):
            out.append(f"equivariance fails: {law}")
    return ValidationReport(not out, tuple(out))


def nilpotency_index(m: Structured):
    """Least n <= dim with the n-fold structural composite zero, else inf.

    On the prime tier the composite of the structure with itself is the
    plain matrix power, so the image chain stabilizes within dim steps."""
    F = m.ring.field
    if m.dim == 0:
        return 1
    acc = mx.identity(m.dim)
    for n in range(1, m.dim + 1):
        acc = mx.mmul(F, m.mat, acc)
        if not acc.any():
            return n
    return math.inf


def is_nilpotent(m: Structured) -> bool:
    return nilpotency_index(m) != math.inf


def stable_image(m: CartierModule) -> tuple[CartierModule, np.ndarray]:
    """sigma(M): image of the dim-fold composite, as a Cartier submodule.

    The crystal class of M is zero exactly when this vanishes."""
    F = m.ring.field
    power = mx.mat_pow(F, m.kappa, max(m.dim, 1))
    cols = mx.column_space(F, power)
    return sub_structure(m, cols), cols


def stable_kernel(m: FModule) -> tuple[FModule, np.ndarray]:
    """N_infty: the stabilized kernel of the iterated structure; the module
    is crystal-zero exactly when this is everything."""
    F = m.ring.field
    power = mx.mat_pow(F, m.tau, max(m.dim, 1))
    cols = mx.kernel(F, power)
    return sub_structure(m, cols), cols


def sub_structure(m: Structured, cols: np.ndarray) -> Structured:
    """Restrict module and structure to the span of `cols` (must be stable)."""
    F = m.ring.field
    sub = submodule(m.module, cols, check=False)
    if cols.shape[1]:
        k = mx.solve(F, cols, mx.mmul(F, m.mat, cols))
        if k is None:
            raise ValueError("columns are not stable under the structure")
    else:
        k = mx.zeros(0, 0)
    return with_structure(m, sub, k)


def quotient_structure(m: Structured, cols: np.ndarray):
    """Quotient module and induced structure by the substructure span(cols).

    Returns (structured quotient, proj, sect)."""
    F = m.ring.field
    quot, proj, sect = quotient_module(m.module, cols)
    k = mx.mmul(F, proj, mx.mmul(F, m.mat, sect))
    return with_structure(m, quot, k), proj, sect


def direct_sum_structured(a: Structured, b: Structured) -> Structured:
    if a.kind != b.kind or a.power != b.power:
        raise ValueError("direct sum of mismatched structures")
    mod = direct_sum(a.module, b.module)
    k = mx.zeros(a.dim + b.dim, a.dim + b.dim)
    k[: a.dim, : a.dim] = a.mat
    k[a.dim:, a.dim:] = b.mat
    return with_structure(a, mod, k)


def iterate_structure(m: Structured, s: int) -> Structured:
    """Replace the structure by its s-fold composite; the result is a
    structure for the q^(power*s) Frobenius (base change by iteration)."""
    if s < 1:
        raise ValueError("iteration count must be >= 1")
    F = m.ring.field
    ctor = cartier_module if m.kind == CARTIER else f_module
    return ctor(m.module, mx.mat_pow(F, m.mat, s), m.power * s, check=False)


def adjoint_structural(m: CartierModule):
    """The adjoint structural morphism M -> F^flat M.

    Returns (matrix in flat coordinates, flat module, flat hom basis).
    Column i encodes the hom F_* lambda -> kappa(F_*(lambda e_i))."""
    F = m.ring.field
    R = m.ring
    flat, basis = f_flat(m.module, power=m.power)
    cols = []
    for i in range(m.dim):
        e = mx.identity(m.dim)[:, i]
        w = mx.zeros(m.dim, R.dim)
        for l, mono in enumerate(R.basis):
            w[:, l] = mx.mmul(F, m.kappa, mx.mmul(F, m.module.action_of(mono), e))
        c = hom_coords(F, basis, w)
        if c is None:
            raise RuntimeError("adjoint image not R-linear; structure invalid?")
        cols.append(c)
    a = np.stack(cols, axis=1) if cols else mx.zeros(flat.dim, 0)
    return a, flat, basis


def flat_cartier(m: CartierModule):
    """F^flat M as a Cartier module, with the transition data unitalize needs.

    Returns (structured flat module, adjoint matrix, flat hom basis)."""
    F = m.ring.field
    a, flat, basis = adjoint_structural(m)
    one = m.ring.one()
    if basis:
        eval1 = np.stack([mx.mmul(F, H, one) for H in basis], axis=1)
    else:
        eval1 = mx.zeros(m.dim, 0)
    kappa_flat = mx.mmul(F, a, eval1)
    return CartierModule(flat, kappa_flat, m.power), a, basis


def is_unit(m: CartierModule) -> bool:
    """True when the adjoint structural morphism is bijective."""
    a, flat, _ = adjoint_structural(m)
    return flat.dim == m.dim and mx.inverse(m.ring.field, a) is not None


@dataclass(frozen=True)
class NilIsoReport:
    ok: bool
    kernel_index: object
    cokernel_index: object
    kernel_dim: int
    cokernel_dim: int


def nil_isomorphism_check(f: np.ndarray, src: Structured, dst: Structured) -> NilIsoReport:
    """Certify that a structure-preserving map has nilpotent kernel and
    cokernel; returns the two indices (a value, never an exception)."""
    F = src.ring.field
    f = np.asarray(f, dtype=np.int64)
    if not is_morphism(f, src, dst):
        raise ValueError("map does not commute with the structures")
    ker_cols = mx.kernel(F, f)
    ker = sub_structure(src, ker_cols)
    img_cols = mx.column_space(F, f)
    coker, _, _ = quotient_structure(dst, img_cols)
    ki, ci = nilpotency_index(ker), nilpotency_index(coker)
    return NilIsoReport(ki != math.inf and ci != math.inf, ki, ci,
                        ker.dim, coker.dim)


def is_morphism(f: np.ndarray, src: Structured, dst: Structured) -> bool:
    """Structure- and ring-equivariance of a linear map src -> dst."""
    if src.kind != dst.kind or src.power != dst.power:
        return False
    F = src.ring.field
    for Xs, Xd in zip(src.module.actions, dst.module.actions):
        if not np.array_equal(mx.mmul(F, f, Xs), mx.mmul(F, Xd, f)):
            return False
    return np.array_equal(mx.mmul(F, f, src.mat), mx.mmul(F, dst.mat, f))


@dataclass(frozen=True)
class UnitalizeResult:
    status: str                 # 'unit' | 'zero' | 'not_stabilized'
    module: "CartierModule | None"
    canonical_map: "np.ndarray | None"
    certificate: "NilIsoReport | None"
    steps: int


def unitalize(m: CartierModule, max_steps: int = 16) -> UnitalizeResult:
    """Colimit of M -> F^flat M -> F^(2 flat) M -> ...

    Stages are built functorially (the transition out of stage n is
    F^flat of the previous transition).  The colimit is recognized when
    a transition becomes bijective, when it becomes zero, or when the
    stage-modulo-eventual-kernel quotients stabilize; otherwise
    NotStabilized is reported as a value.  The returned canonical map is
    certified as a nil-isomorphism.
    """
    F = m.ring.field
    stages = [m]
    trans = []        # trans[n] : stages[n] -> stages[n+1]
    bases = [None]
    cur = m
    t_prev = None
    for step in range(max_steps):
        nxt, adj, basis = flat_cartier(cur)
        if t_prev is None:
            t = adj
        else:
            prev_basis = bases[-1]
            imgs = [mx.mmul(F, t_prev, H) for H in prev_basis]
            cols = [hom_coords(F, basis, w) for w in imgs]
            if any(c is None for c in cols):
                raise RuntimeError("functorial transition left the hom space")
            t = (np.stack(cols, axis=1)
                 if cols else mx.zeros(nxt.dim, 0))
        stages.append(nxt)
        bases.append(basis)
        trans.append(t)
        if nxt.dim == cur.dim and mx.inverse(F, t) is not None:
            return _finish_unitalize(m, stages, trans, step, exact_stage=step)
        if not t.any():
            zero = CartierModule(zero_module(m.ring), mx.zeros(0, 0), m.power)
            cmap = mx.zeros(0, m.dim)
            cert = nil_isomorphism_check(cmap, m, zero)
            return UnitalizeResult("zero" if cert.ok else "not_stabilized",
                                   zero, cmap, cert, step + 1)
        cur = nxt
        t_prev = t
    return _try_quotient_stabilization(m, stages, trans, max_steps)


def _composite(F, trans, upto):
    """Composite transition stages[0] -> stages[upto]."""
    out = None
    for t in trans[:upto]:
        out = t if out is None else mx.mmul(F, t, out)
    return out if out is not None else None


def _finish_unitalize(m, stages, trans, step, exact_stage):
    F = m.ring.field
    target = stages[exact_stage]
    cmap = mx.identity(m.dim) if exact_stage == 0 else _composite(F, trans, exact_stage)
    cert = nil_isomorphism_check(cmap, m, target)
    status = "zero" if target.dim == 0 else "unit"
    return UnitalizeResult(status if cert.ok else "not_stabilized",
                           target, cmap, cert, step + 1)


def _try_quotient_stabilization(m, stages, trans, max_steps):
    """Mixed case: quotient each stage by its eventual forward kernel and
    look for two consecutive induced isomorphisms."""
    F = m.ring.field
    n_stages = len(stages)
    quots, projs = [], []
    for n in range(n_stages - 1):
        kbar = mx.zeros(stages[n].dim, 0)
        acc = None
        for t in trans[n:]:
            acc = t if acc is None else mx.mmul(F, t, acc)
            kbar = mx.column_space(F, np.hstack([kbar, mx.kernel(F, acc)]))
        q, proj, _ = quotient_structure(stages[n], kbar)
        quots.append(q)
        projs.append(proj)
    for n in range(len(quots) - 2):
        a, b, c = quots[n], quots[n + 1], quots[n + 2]
        if a.dim != b.dim or b.dim != c.dim:
            continue
        ind1 = _induced_map(F, trans[n], projs[n], projs[n + 1], a.dim)
        ind2 = _induced_map(F, trans[n + 1], projs[n + 1], projs[n + 2], b.dim)
        if ind1 is None or ind2 is None:
            continue
        if mx.inverse(F, ind1) is not None and mx.inverse(F, ind2) is not None:
            comp = _composite(F, trans, n) if n else mx.identity(m.dim)
            cmap = mx.mmul(F, projs[n], comp)
            cert = nil_isomorphism_check(cmap, m, a)
            if cert.ok and is_unit(a):
                status = "zero" if a.dim == 0 else "unit"
                return UnitalizeResult(status, a, cmap, cert, n + 1)
    return UnitalizeResult("not_stabilized", stages[-1], None, None, max_steps)


def _induced_map(F, t, proj_src, proj_dst, dim):
    # solve proj_dst . t = ind . proj_src  (proj_src is onto)
    sol = mx.solve(F, proj_src.T, mx.mmul(F, proj_dst, t).T)
    if sol is None:
        return None
    return sol.T


def twist_by_unit_line(m: Structured, a_coords) -> Structured:
    """Tensor with the rank-one unit line of an invertible ring section.

    Cartier structures pick up the action of a^{-1} inside F_*, Frobenius
    structures the action of a outside."""
    F = m.ring.field
    R = regular_module(m.ring)
    act = R.element_action(a_coords)
    inv = mx.inverse(F, act)
    if inv is None:
        raise ValueError("section is not invertible in the ring")
    a_inv_coords = mx.mmul(F, inv, m.ring.one())
    if m.kind == CARTIER:
        new = mx.mmul(F, m.mat, m.module.element_action(a_inv_coords))
    else:
        new = mx.mmul(F, m.module.element_action(a_coords), m.mat)
    return with_structure(m, m.module, new, check=True)


def structured_i_torsion(m: Structured, j_gens) -> tuple[Structured, np.ndarray]:
    """i-flat for the closed immersion cut out by J: the J-torsion
    submodule with restricted structure, over the quotient ring."""
    F = m.ring.field
    tors, cols = i_torsion(m.module, j_gens)
    if cols.shape[1]:
        k = mx.solve(F, cols, mx.mmul(F, m.mat, cols))
        if k is None:
            raise ValueError("structure does not restrict to the torsion part "
                             "(expected for Cartier structures)")
    else:
        k = mx.zeros(0, 0)
    return with_structure(m, tors, k, check=True), cols


def structured_restrict_scalars(m: Structured) -> Structured:
    """i_*: the same data viewed over the ambient ring."""
    return with_structure(m, restrict_scalars(m.module), m.mat, check=True)


@dataclass(frozen=True)
class KashiwaraReport:
    roundtrip_exact: bool
    counit: "NilIsoReport | None"
    supported: bool


def kashiwara_roundtrip(m: Structured) -> bool:
    """i-flat o i_* on a module over a quotient ring: must be the identity
    on the nose (matrix equality after the canonical identification)."""
    if m.ring.ambient is None:
        raise ValueError("module must live over a declared quotient ring")
    pushed = structured_restrict_scalars(m)
    back, cols = structured_i_torsion(pushed, m.ring.quotient_gens)
    if back.dim != m.dim or not np.array_equal(cols, mx.identity(m.dim)):
        return False
    return (np.array_equal(back.mat, m.mat)
            and all(np.array_equal(a, b)
                    for a, b in zip(back.module.actions, m.module.actions)))


def kashiwara_counit(n: Structured, j_gens) -> KashiwaraReport:
    """For N over R: the counit i_* i^flat N -> N (the torsion inclusion).

    When N is supported on V(J) (J acts nilpotently), the counit must be a
    nil-isomorphism."""
    F = n.ring.field
    tors, cols = structured_i_torsion(n, j_gens)
    pushed = structured_restrict_scalars(tors)
    rep = nil_isomorphism_check(cols, pushed, n)
    supported = all(
        nilpotent_action(F, n.module.action_of(g), n.dim) for g in j_gens)
    return KashiwaraReport(rep.ok, rep, supported)


def nilpotent_action(F, mat, dim) -> bool:
    return not mx.mat_pow(F, mat, max(dim, 1)).any()
