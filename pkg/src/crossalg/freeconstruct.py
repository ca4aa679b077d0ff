"""Degree-truncated free simplicial skeleta and totally free quadratic modules.

Construction data ``(vartheta, psi, R)``: a unital algebra ``R``, generators
``X`` in dimension 1 with ``d0 x = 0``, ``d1 x = vartheta(x)``, and
generators ``Y`` in dimension 2 with ``d0 y = d1 y = 0``, ``d2 y = psi(y)``.

Level ``n`` of a skeleton is the polynomial algebra over ``R`` on the
variables ``g_sigma`` (``g`` a generator of dimension ``m``, ``sigma`` a
monotone surjection ``[n] -> [m]``), truncated at total weight ``> d``.
Variables have weight 1 (``Y`` generators: the weight of ``psi(y)``) and
``R`` may carry a grading (``weights``) compatible with its
multiplication.  Faces and degeneracies only raise weight, so truncation
is an ideal of every level stable under all simplicial operators.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraError, AlgebraMorphism, FiniteAlgebra

MAX_DEGREE_CAP = 5


class DegreeCapTooSmall(AlgebraError):
    pass


class InvalidConstructionData(AlgebraError):
    pass


# ----------------------------------------------------------------------
# construction data


@dataclass
class ConstructionData:
    """``R`` with ``weights``; ``X`` names with ``vartheta`` rows in ``R``;
    ``Y`` names with ``psi`` dicts ``{exponent tuple over X: R-row}``."""

    R: FiniteAlgebra
    X: list
    vartheta: np.ndarray
    Y: list = field(default_factory=list)
    psi: list = field(default_factory=list)
    degree_cap: int = 3
    weights: tuple = None
    label: str = ""

    def __post_init__(self):
        self.vartheta = np.asarray(self.vartheta, dtype=np.int64).reshape(len(self.X), self.R.dim) % self.R.p
        if self.weights is None:
            self.weights = tuple([0] * self.R.dim)
        self.weights = tuple(int(w) for w in self.weights)
        self.psi = [{tuple(int(e) for e in k): np.asarray(v, dtype=np.int64).reshape(self.R.dim) % self.R.p for k, v in d.items()} for d in self.psi]

    @property
    def p(self):
        return self.R.p

    def unit(self):
        u = self.R.identity_element()
        if u is None:
            raise InvalidConstructionData("the base algebra must have an identity")
        return u

    def with_cap(self, d):
        return ConstructionData(self.R, list(self.X), self.vartheta, list(self.Y), list(self.psi), d, self.weights, self.label)

    def without_Y(self):
        return ConstructionData(self.R, list(self.X), self.vartheta, [], [], self.degree_cap, self.weights, self.label)


def parse_monomial(text, names):
    """``"x1*x1"``, ``"x1^2*x2"`` or ``"1"`` to an exponent tuple."""
    e = [0] * len(names)
    text = text.strip()
    if text in ("", "1"):
        return tuple(e)
    for part in text.split("*"):
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\^\s*(\d+))?\s*", part)
        if not m or m.group(1) not in names:
            raise InvalidConstructionData("cannot parse monomial %r" % text)
        e[names.index(m.group(1))] += int(m.group(2) or 1)
    return tuple(e)


def format_monomial(e, names):
    parts = []
    for n, k in zip(names, e):
        parts.extend([n] * k)
    return "*".join(parts) or "1"


def coefficient_row(R, coeff, unit):
    """An ``R``-coefficient given as an int (multiple of 1) or a coordinate list."""
    if isinstance(coeff, (list, tuple, np.ndarray)):
        return np.asarray(coeff, dtype=np.int64).reshape(R.dim) % R.p
    return (int(coeff) * unit) % R.p


def make_data(R, xs=(), ys=(), degree_cap=3, weights=None, label=""):
    """Friendly constructor.

    ``xs``: list of ``(name, vartheta_row)``; ``ys``: list of
    ``(name, {"x*x": coeff})``.
    """
    names = [x for x, _ in xs]
    unit = R.identity_element()
    vt = np.array([np.asarray(v, dtype=np.int64).reshape(R.dim) for _, v in xs], dtype=np.int64).reshape(len(xs), R.dim)
    psi = []
    for _, poly in ys:
        d = {}
        for mono, c in poly.items():
            if unit is None and not isinstance(c, (list, tuple, np.ndarray)):
                raise InvalidConstructionData("the base algebra must have an identity")
            e = parse_monomial(mono, names)
            d[e] = (d.get(e, 0) + coefficient_row(R, c, unit)) % R.p
        psi.append(d)
    return ConstructionData(R, names, vt, [y for y, _ in ys], psi, degree_cap, weights, label)


# ----------------------------------------------------------------------
# simplicial bookkeeping


def surjections(n, m):
    """Monotone surjections ``[n] -> [m]`` as value tuples, lexicographic."""
    out = []
    for cuts in itertools.combinations(range(1, n + 1), m):
        vals, v = [], 0
        cut = set(cuts)
        for k in range(n + 1):
            if k in cut:
                v += 1
            vals.append(v)
        out.append(tuple(vals))
    return out


def compose_degeneracy(sigma, i):
    """``sigma o sigma_i`` where ``sigma_i: [n+1] -> [n]`` repeats ``i``."""
    return tuple(sigma[k if k <= i else k - 1] for k in range(len(sigma) + 1))


def compose_face(sigma, i):
    """``sigma o delta_i`` where ``delta_i: [n-1] -> [n]`` skips ``i``."""
    return tuple(sigma[k if k < i else k + 1] for k in range(len(sigma) - 1))


def factor_face(rho, m):
    """Write a non-surjective monotone ``rho: [n] -> [m]`` as ``delta_j o tau``."""
    missing = [v for v in range(m + 1) if v not in rho]
    if len(missing) != 1:
        raise AlgebraError("map misses %d values" % len(missing))
    j = missing[0]
    tau = tuple(v if v < j else v - 1 for v in rho)
    return j, tau


# ----------------------------------------------------------------------
# truncated polynomial levels


class Level:
    """``R[variables]`` truncated at total weight ``> cap``.

    Basis: pairs ``(b, mono)`` with ``b`` an ``R``-basis index and ``mono``
    an exponent tuple over ``variables``.
    """

    def __init__(self, R, weights, variables, var_weights, cap, label=""):
        self.R = R
        self.p = R.p
        self.variables = list(variables)
        self.var_weights = np.asarray(var_weights, dtype=np.int64).reshape(len(self.variables))
        self.cap = cap
        self.rw = np.asarray(weights, dtype=np.int64)
        V = len(self.variables)
        monos = self._monomials(V, cap)
        self.monos = monos
        self.mono_index = {m: i for i, m in enumerate(monos)}
        mono_w = np.array([int(np.dot(m, self.var_weights)) if V else 0 for m in monos], dtype=np.int64)
        self.basis = [(b, j) for j in range(len(monos)) for b in range(R.dim) if self.rw[b] + mono_w[j] <= cap]
        self.index = {bj: i for i, bj in enumerate(self.basis)}
        self.algebra = self._build_algebra(mono_w, label)

    def _monomials(self, V, cap):
        out = []
        w = self.var_weights

        def rec(i, cur, left):
            if i == V:
                out.append(tuple(cur))
                return
            k = 0
            while k * w[i] <= left:
                cur.append(k)
                rec(i + 1, cur, left - k * w[i])
                cur.pop()
                k += 1
                if w[i] == 0:
                    raise AlgebraError("variables need positive weight")

        rec(0, [], cap)
        out.sort(key=lambda m: (int(np.dot(m, w)) if V else 0, tuple(-e for e in m)))
        return out

    def _build_algebra(self, mono_w, label):
        R = self.R
        Rent = R.entries()
        Ii, Jj, Kk, Vv = [], [], [], []
        monos = self.monos
        by_mono = {}
        for (b, j), idx in self.index.items():
            by_mono.setdefault(j, []).append((b, idx))
        for j1, m1 in enumerate(monos):
            if j1 not in by_mono:
                continue
            for j2, m2 in enumerate(monos):
                if j2 not in by_mono:
                    continue
                prod = tuple(a + c for a, c in zip(m1, m2))
                j3 = self.mono_index.get(prod)
                if j3 is None:
                    continue
                for (rb1, rb2, rk, rv) in Rent:
                    i1 = self.index.get((rb1, j1))
                    i2 = self.index.get((rb2, j2))
                    i3 = self.index.get((rk, j3))
                    if i1 is None or i2 is None or i3 is None:
                        continue
                    Ii.append(i1)
                    Jj.append(i2)
                    Kk.append(i3)
                    Vv.append(rv)
        A = FiniteAlgebra(self.p, len(self.basis), (Ii, Jj, Kk, Vv) if Ii else None, label=label, certificate="truncated polynomial algebra over a certified base")
        return A

    def dim(self):
        return len(self.basis)

    def const(self, row):
        """Embed an ``R``-row as a constant."""
        v = np.zeros(self.dim(), dtype=np.int64)
        j0 = self.mono_index[tuple([0] * len(self.variables))]
        for b in np.flatnonzero(row):
            i = self.index.get((int(b), j0))
            if i is not None:
                v[i] = row[b]
        return v % self.p

    def var(self, k, unit):
        e = [0] * len(self.variables)
        e[k] = 1
        return self.term(unit, tuple(e))

    def term(self, row, mono):
        v = np.zeros(self.dim(), dtype=np.int64)
        j = self.mono_index.get(tuple(mono))
        if j is None:
            return v
        for b in np.flatnonzero(row):
            i = self.index.get((int(b), j))
            if i is not None:
                v[i] = row[b]
        return v % self.p

    def generator_rows(self, unit):
        rows = [self.const(np.eye(self.R.dim, dtype=np.int64)[b]) for b in range(self.R.dim)]
        rows += [self.var(k, unit) for k in range(len(self.variables))]
        return np.array(rows, dtype=np.int64).reshape(-1, self.dim())


def substitution(src, tgt, images, unit):
    """Algebra map ``src -> tgt``: identity on ``R``, ``variables[k] -> images[k]``."""
    A = tgt.algebra
    n_src = src.dim()
    M = np.zeros((tgt.dim(), n_src), dtype=np.int64)
    cache = {tuple([0] * len(src.variables)): tgt.const(unit)}

    def mono_image(m):
        if m in cache:
            return cache[m]
        k = max(i for i, e in enumerate(m) if e)
        prev = list(m)
        prev[k] -= 1
        val = A.mul(mono_image(tuple(prev)), images[k])
        cache[m] = val
        return val

    for i, (b, j) in enumerate(src.basis):
        img = mono_image(src.monos[j])
        eb = tgt.const(np.eye(src.R.dim, dtype=np.int64)[b])
        M[:, i] = A.mul(eb, img)
    return AlgebraMorphism(src.algebra, tgt.algebra, M)


# ----------------------------------------------------------------------
# skeleta


def _variables(data, n, with_Y):
    out = [("x", g, s) for g in range(len(data.X)) for s in surjections(n, 1)] if n >= 1 else []
    if with_Y and n >= 2:
        out += [("y", g, s) for g in range(len(data.Y)) for s in surjections(n, 2)]
    return out


def _weight_of_row_poly(level, v):
    """Minimal total weight of the terms of a level vector (None when zero)."""
    idx = np.flatnonzero(v)
    if idx.size == 0:
        return None
    ws = []
    for i in idx:
        b, j = level.basis[i]
        ws.append(int(level.rw[b] + np.dot(level.monos[j], level.var_weights)))
    return min(ws)


class Skeleton:
    """Holds levels and operators while a skeleton is assembled."""

    def __init__(self, data, level):
        self.data = data
        self.level = level
        self.p = data.p
        self.unit = data.unit()
        d = data.degree_cap
        if d < 1 or d > MAX_DEGREE_CAP:
            raise DegreeCapTooSmall("degree cap must lie in 1..%d" % MAX_DEGREE_CAP)
        if max(data.weights, default=0) > d:
            raise DegreeCapTooSmall("the base algebra has weight above the cap")
        R = data.R
        for a, b, k, v in R.entries():
            if data.weights[k] < data.weights[a] + data.weights[b]:
                raise InvalidConstructionData("weights are not compatible with the multiplication of R")
        for g, row in enumerate(data.vartheta):
            nz = [data.weights[b] for b in np.flatnonzero(row)]
            if nz and min(nz) < 1:
                raise InvalidConstructionData("vartheta(%s) must have positive weight (or vanish)" % data.X[g])
        with_Y = level >= 2
        self.with_Y = with_Y
        # weights of Y generators are found once level 1 exists
        self.levels = []
        self.y_weight = []
        L0 = Level(R, data.weights, [], [], d, label="E0")
        self.levels.append(L0)
        vars1 = _variables(data, 1, False) if level >= 1 else []
        L1 = Level(R, data.weights, vars1, [1] * len(vars1), d, label="E1")
        self.psi_rows = []
        if with_Y:
            for yi, poly in enumerate(data.psi):
                v = np.zeros(L1.dim(), dtype=np.int64)
                for mono, row in poly.items():
                    if sum(mono) == 0 and np.any(row):
                        raise InvalidConstructionData("psi(%s) must have zero constant term" % data.Y[yi])
                    wt = sum(mono) + min([data.weights[b] for b in np.flatnonzero(row)], default=0)
                    if np.any(row) and wt > d:
                        raise DegreeCapTooSmall("psi(%s) needs weight %d > cap %d" % (data.Y[yi], wt, d))
                    v = (v + L1.term(row, mono)) % self.p
                self.psi_rows.append(v)
                w = _weight_of_row_poly(L1, v)
                self.y_weight.append(1 if w is None else w)
        self.levels.append(L1)
        for n in (2, 3):
            vs = _variables(data, n, with_Y) if level >= 1 else []
            ws = [1 if t == "x" else self.y_weight[g] for t, g, _ in vs]
            self.levels.append(Level(R, data.weights, vs, ws, d, label="E%d" % n))

    # images of generators --------------------------------------------
    def _generator_face(self, kind, g, j):
        """``d_j`` of the generator itself, as a vector in level ``m - 1``."""
        if kind == "x":
            L0 = self.levels[0]
            return L0.const(self.data.vartheta[g]) if j == 1 else np.zeros(L0.dim(), dtype=np.int64)
        L1 = self.levels[1]
        return self.psi_rows[g].copy() if j == 2 else np.zeros(L1.dim(), dtype=np.int64)

    def _pullback(self, vec, src_n, tau, tgt_n):
        """Apply the degeneracy operator ``tau: [tgt_n] -> [src_n]`` to a level vector."""
        src, tgt = self.levels[src_n], self.levels[tgt_n]
        images = []
        for (t, g, rho) in src.variables:
            new = tuple(rho[k] for k in tau)
            images.append(tgt.var(tgt.variables.index((t, g, new)), self.unit))
        if src_n == tgt_n and tuple(tau) == tuple(range(src_n + 1)):
            return vec
        return substitution(src, tgt, images, self.unit)(vec)

    def face(self, n, i):
        src, tgt = self.levels[n], self.levels[n - 1]
        images = []
        for (t, g, sigma) in src.variables:
            m = 1 if t == "x" else 2
            rho = compose_face(sigma, i)
            if len(set(rho)) == m + 1:
                images.append(tgt.var(tgt.variables.index((t, g, rho)), self.unit))
            else:
                j, tau = factor_face(rho, m)
                base = self._generator_face(t, g, j)
                images.append(self._pullback(base, m - 1, tau, n - 1))
        return substitution(src, tgt, images, self.unit)

    def degeneracy(self, n, i):
        src, tgt = self.levels[n], self.levels[n + 1]
        images = []
        for (t, g, sigma) in src.variables:
            images.append(tgt.var(tgt.variables.index((t, g, compose_degeneracy(sigma, i))), self.unit))
        return substitution(src, tgt, images, self.unit)

    def build(self):
        from .simplicial import TruncatedSimplicialAlgebra

        for L in self.levels:
            L.algebra.generators = L.generator_rows(self.unit)
        faces = [[]] + [[self.face(n, i) for i in range(n + 1)] for n in (1, 2, 3)]
        degens = [[self.degeneracy(n, i) for i in range(n + 1)] for n in (0, 1, 2)]
        E = TruncatedSimplicialAlgebra([L.algebra for L in self.levels], faces, degens, label="E(%d)%s" % (self.level, self.data.label and "[" + self.data.label + "]"))
        E.skeleton = self
        return E


def check_psi(data):
    """``psi(y)`` must lie in ``ker d0 /\\ ker d1`` of level 1."""
    sk = Skeleton(data, 2)
    d0, d1 = sk.face(1, 0), sk.face(1, 1)
    for g, v in enumerate(sk.psi_rows):
        if np.any(d0(v)) or np.any(d1(v)):
            raise InvalidConstructionData("psi(%s) is not a cycle: d1 psi != 0" % data.Y[g])


def build_skeleton(data, level):
    """The truncated ``level``-skeleton ``E^(level)`` (0, 1 or 2)."""
    from .simplicial import TruncatedSimplicialAlgebra

    if level not in (0, 1, 2):
        raise ValueError("level must be 0, 1 or 2")
    if level == 0:
        data.unit()
        return TruncatedSimplicialAlgebra.constant(data.R)
    if level == 2 and data.Y:
        check_psi(data)
    return Skeleton(data, level).build()


# ----------------------------------------------------------------------
# totally free quadratic modules


def generator_vectors(E):
    """``x`` in ``E1`` and ``y`` in ``E2`` for each generator of a built skeleton."""
    sk = E.skeleton
    L1, L2 = sk.levels[1], sk.levels[2]
    xs = [L1.var(L1.variables.index(("x", g, (0, 1))), sk.unit) for g in range(len(sk.data.X))]
    ys = []
    if sk.with_Y:
        ys = [L2.var(L2.variables.index(("y", g, (0, 1, 2))), sk.unit) for g in range(len(sk.data.Y))]
    return xs, ys


def _unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def totally_free_quadratic(data):
    """The free-generation construction executed on the truncated 2-skeleton.

    ``M = R+[X]/P3`` over the free pre-crossed module ``d1: ker d0 -> R``;
    ``L = D/P'`` with ``D = NE2`` and ``P' = d3(NE3)``; ``L' = L/P3'`` with
    ``P3'`` generated by ``s1<a,b>(s1c - s0c)`` and ``s1a(s1<b,c> - s0<b,c>)``;
    ``psi''`` induced by ``d2`` and ``omega([a] (x) [b]) = s1a(s1b - s0b)``.
    """
    from .algebra import AlgebraIdeal, ActionTensor, ideal_generated, induced_action, quotient_algebra, subalgebra
    from .crossed import PreCrossedModule, quotient_precrossed, triple_peiffer_ideal
    from .linalg import Subspace, kernel_of
    from .quadratic import build_quadratic
    from .simplicial import moore

    E = build_skeleton(data, 2)
    p = E.p
    R = E.levels[0]
    E1, E2 = E.levels[1], E.levels[2]
    d0, d1 = E.faces[1][0], E.faces[1][1]
    s0, s1 = E.degens[1][0], E.degens[1][1]
    Mspace = kernel_of(d0.matrix, p)
    Mfree, incM = subalgebra(E1, Mspace, label="R+[X]")
    dM = AlgebraMorphism(Mfree, R, d1.matrix @ incM.matrix)
    actM = ActionTensor(R, Mfree, np.array([Mspace.coords((Mspace.basis @ E1.left_matrix(E.degens[0][0](_unit(R.dim, r))).T) % p) for r in range(R.dim)], dtype=np.int64).reshape(R.dim, Mfree.dim, Mfree.dim))
    X = PreCrossedModule(Mfree, R, dM, actM, label="free(%s)" % data.label)
    P3 = triple_peiffer_ideal(X)
    Mq = quotient_precrossed(X, P3, label="M")
    q1 = Mq.projection
    Nm = moore(E, check=False)
    Dspace = Nm.spaces[2]
    Dalg = Nm.algebras[2]
    Pprime = AlgebraIdeal(Dalg, Dspace.coords(Nm.image(3).basis))
    if not Pprime.closed:
        raise AlgebraError("d3(NE3) is not an ideal of NE2")
    L, q = quotient_algebra(Dalg, Pprime, label="L")
    # s1 a (s1 b - s0 b) for basis rows a, b of R+[X], as L vectors
    Xb = Mspace.basis

    def cross(A, B):
        out = np.zeros((A.shape[0], B.shape[0], E2.dim), dtype=np.int64)
        diffs = (s1(B) - s0(B)) % p
        for i, a in enumerate(A):
            out[i] = (diffs @ E2.left_matrix(s1(a)).T) % p
        return out

    def to_L(rows):
        rows = rows.reshape(-1, E2.dim)
        return q(Dspace.coords(rows)) if L.dim else np.zeros((rows.shape[0], 0), dtype=np.int64)

    peif = np.vstack([X.peiffer_rows(i) for i in range(Mfree.dim)] or [np.zeros((0, Mfree.dim), dtype=np.int64)])
    peifE = (peif @ Mspace.basis) % p  # Peiffer elements as E1 rows
    gens = []
    if Mfree.dim and L.dim:
        gens.append(to_L(cross(peifE, Xb)))
        gens.append(to_L(cross(Xb, peifE)))
    gens = np.vstack(gens) % p if gens else np.zeros((0, L.dim), dtype=np.int64)
    # R acts on L through s0 s0
    s00 = E.degens[1][0].compose(E.degens[0][0])
    lift = (q.section.T @ Dspace.basis) % p  # L basis as E2 rows
    ops = [to_L((lift @ E2.left_matrix(s00(_unit(R.dim, r))).T) % p).T for r in range(R.dim)]
    P3p = ideal_generated(L, gens, operators=ops)
    Lp, q2 = quotient_algebra(L, P3p, label="L'")
    # psi'' q2 = q1 d2
    d2 = E.faces[2][2]
    d2_rows = d2(lift)  # in E1, inside ker d0
    psi_L = q1.matrix @ Mspace.coords(d2_rows).T if L.dim else np.zeros((Mq.C.dim, 0), dtype=np.int64)
    if P3p.dim and ((psi_L @ P3p.basis.T) % p).any():
        raise AlgebraError("psi does not vanish on P3'")
    psi2 = AlgebraMorphism(Lp, Mq.C, (psi_L @ q2.section) % p)
    actL = ActionTensor(R, L, np.array(ops, dtype=np.int64).transpose(0, 2, 1).reshape(R.dim, L.dim, L.dim) % p)
    actLp = induced_action(actL, proj=q2)
    W = to_L(cross(Xb, Xb)).reshape(Mfree.dim, Mfree.dim, L.dim) if L.dim else np.zeros((Mfree.dim, Mfree.dim, 0), dtype=np.int64)
    W = (W @ q2.matrix.T) % p
    omega_M = np.einsum("ia,jb,ijl->abl", q1.section, q1.section, W) % p
    Q = build_quadratic(Lp, Mq.C, R, psi2, Mq.boundary, actLp, Mq.action, omega_M, label="thm(%s)" % data.label)
    xs, ys = generator_vectors(E)
    Q.gen_M = [q1(Mspace.coords(x.reshape(1, -1)))[0] for x in xs]
    Q.gen_L = [q2(q(Dspace.coords(y.reshape(1, -1))))[0] for y in ys]
    Q.skeleton, Q.P3, Q.P3prime, Q.Pprime = E, P3, P3p, Pprime
    return Q


def ellis_route_quadratic(data):
    """``M(E^(2), 2)`` followed by the Ellis construction."""
    from .linalg import kernel_of
    from .simplicial import m_functor_2
    from .square import ellis_free_quadratic

    E = build_skeleton(data, 2)
    S = m_functor_2(E, check=False)
    Q = ellis_free_quadratic(S)
    Q.label = "ellis-route(%s)" % data.label
    p = E.p
    xs, ys = generator_vectors(E)
    Mspace = kernel_of(E.faces[1][0].matrix, p)
    Q.gen_M = [Q.q1(Mspace.coords(x.reshape(1, -1)))[0] for x in xs]
    Nm = S.moore
    Q.gen_L = [Q.q2(S.top_projection(Nm.spaces[2].coords(y.reshape(1, -1))))[0] for y in ys]
    Q.skeleton, Q.square = E, S
    return Q


def thm_vs_ellis(data, report=None):
    """Search the generator-first isomorphism between the two totally free outputs."""
    from .iso import find_quadratic_isomorphism
    from .quadratic import check_quadratic
    from .report import Report

    rep = report or Report("thm-vs-ellis")
    A = totally_free_quadratic(data)
    B = ellis_route_quadratic(data)
    for tag, Q in (("thm", A), ("ellis", B)):
        sub = check_quadratic(Q)
        fails = sub.failures()
        rep.add("valid-" + tag, not fails, (fails[0].name, fails[0].witness) if fails else None)
    sub, maps = find_quadratic_isomorphism(A, B, list(zip(A.gen_M, B.gen_M)), list(zip(A.gen_L, B.gen_L)))
    rep.merge(sub, prefix="iso:")
    rep.maps = maps
    rep.extra = {"thm": [A.L.dim, A.M.dim, A.N.dim], "ellis": [B.L.dim, B.M.dim, B.N.dim]}
    return rep


# ----------------------------------------------------------------------
# one-skeleton comparisons


def _complex_homology(d2, d1, dims, p):
    """Homology dims ``(h0, h1, h2)`` of ``K2 -d2-> K1 -d1-> K0``."""
    from .linalg import rank

    k2, k1, k0 = dims
    r1 = rank(d1, p) if k1 and k0 else 0
    r2 = rank(d2, p) if k2 and k1 else 0
    return (k0 - r1, k1 - r1 - r2, k2 - r2)


def compare_X_Y(data, report=None):
    """Mapping-cone quadratic module ``X`` against the Ellis one ``Y`` on ``M(E^(1), 2)``.

    ``phi: X -> Y`` is ``id`` on the common top quotient, ``(m, n) -> unbar n``
    in the middle and ``-d0`` at the bottom; the section is ``id``,
    ``m -> (-m, bar m)`` and ``-s0``.  Both are chain maps; the kernel
    complex ``0 -> M = M`` is acyclic.
    """
    from .linalg import Subspace, kernel_of
    from .quadratic import check_quadratic, homotopy_quadratic, quadratic_from_square
    from .report import Report, first_nonzero
    from .simplicial import m_functor_2
    from .square import ellis_free_quadratic

    rep = report or Report("compare-X-Y")
    if data.Y:
        data = data.without_Y()
        rep.note("Y generators dropped: the comparison uses the 1-skeleton")
    E = build_skeleton(data, 1)
    S = m_functor_2(E)
    fs = S.free_shape
    p = E.p
    X = quadratic_from_square(S)
    Y = ellis_free_quadratic(S)
    for tag, Q in (("X", X), ("Y", Y)):
        sub = check_quadratic(Q)
        fails = sub.failures()
        rep.add("valid-" + tag, not fails, (fails[0].name, fails[0].witness) if fails else None)
    m, n = S.M.dim, S.N.dim
    # phi on representatives
    phiL_raw = Y.q2.matrix  # L -> Y.L; X.L = L / P3'_X
    phiM_raw = np.hstack([np.zeros((m, m), dtype=np.int64), fs.unbar.matrix])  # M x| N -> M
    phiM_raw = (Y.q1.matrix @ phiM_raw) % p
    phiN = (-E.faces[1][0].matrix) % p
    # descent through the X quotients
    badL = first_nonzero((phiL_raw @ X.P3prime.basis.T) % p) if X.P3prime.dim else None
    badM = first_nonzero((phiM_raw @ X.P3.basis.T) % p) if X.P3.dim else None
    rep.add("phi-descends-L", badL is None, badL)
    rep.add("phi-descends-M", badM is None, badM)
    phiL = (phiL_raw @ X.q2.section) % p
    phiM = (phiM_raw @ X.q1.section) % p
    # section on representatives
    secL_raw = X.q2.matrix
    secM_raw = np.vstack([(-np.eye(m, dtype=np.int64)) % p, fs.bar.matrix])  # M -> M x| N
    secM_raw = (X.q1.matrix @ secM_raw) % p
    secN = (-fs.lift_R0.matrix) % p
    badL = first_nonzero((secL_raw @ Y.hMMM.basis.T) % p) if Y.hMMM.dim else None
    badM = first_nonzero((secM_raw @ Y.P3.basis.T) % p) if Y.P3.dim else None
    rep.add("section-descends-L", badL is None, badL)
    rep.add("section-descends-M", badM is None, badM)
    secL = (secL_raw @ Y.q2.section) % p
    secM = (secM_raw @ Y.q1.section) % p
    # chain maps
    for tag, A, B in (
        ("phi-delta", Y.delta.matrix @ phiL, phiM @ X.delta.matrix),
        ("phi-boundary", Y.boundary.matrix @ phiM, phiN @ X.boundary.matrix),
        ("section-delta", X.delta.matrix @ secL, secM @ Y.delta.matrix),
        ("section-boundary", X.boundary.matrix @ secM, secN @ Y.boundary.matrix),
    ):
        d = (A - B) % p
        rep.add(tag, not d.any(), first_nonzero(d))
    for tag, F, G, k in (("L", phiL, secL, Y.L.dim), ("M", phiM, secM, Y.M.dim), ("N", phiN, secN, Y.N.dim)):
        d = (F @ G - np.eye(k, dtype=np.int64)) % p
        rep.add("phi.section=id-" + tag, not d.any(), first_nonzero(d))
    # kernel complex
    KL, KM, KN = kernel_of(phiL, p), kernel_of(phiM, p), kernel_of(phiN, p)
    dims = (KL.dim, KM.dim, KN.dim)
    # restricted boundaries in kernel coordinates
    dM = KN.coords((KM.basis @ X.boundary.matrix.T) % p).T if KM.dim and KN.dim else np.zeros((KN.dim, KM.dim), dtype=np.int64)
    dL = KM.coords((KL.basis @ X.delta.matrix.T) % p).T if KL.dim and KM.dim else np.zeros((KM.dim, KL.dim), dtype=np.int64)
    h = _complex_homology(dL, dM, dims, p)
    rep.add("kernel-homology-zero", h == (0, 0, 0), h)
    rep.add("kernel-shape 0 -> M = M", dims == (0, S.M.dim, S.M.dim), dims)
    hx, hy = homotopy_quadratic(X), homotopy_quadratic(Y)
    rep.add("profiles-equal", hx == hy, (hx.dims, hy.dims))
    # informational: phi is linear and boundary-compatible, not multiplicative
    from .algebra import AlgebraMorphism

    for tag, F, A, B in (("L", phiL, X.L, Y.L), ("M", phiM, X.M, Y.M), ("N", phiN, X.N, Y.N)):
        v = AlgebraMorphism(A, B, F).multiplicativity_violation()
        rep.note("phi-%s multiplicative: %s" % (tag, "yes" if v is None else "no"))
    rep.extra = {"X": hx.dims, "Y": hy.dims, "kernel_dims": dims}
    rep.maps = {"phi": (phiL, phiM, phiN), "section": (secL, secM, secN)}
    return rep


def tensor_iso_check(data, report=None):
    """The top corner of ``M(E^(1), 2)`` is spanned by ``s1x(s1y - s0y)``."""
    from .linalg import Subspace
    from .report import Report
    from .simplicial import m_functor_2

    rep = report or Report("tensor-iso")
    if data.Y:
        data = data.without_Y()
    E = build_skeleton(data, 1)
    S = m_functor_2(E)
    p = E.p
    L = S.L
    H = S.h.tensor.reshape(-1, L.dim) if L.dim else np.zeros((0, 0), dtype=np.int64)
    span = Subspace(p, L.dim, H)
    rep.add("h-image spans L", span.dim == L.dim, (span.dim, L.dim))
    rep.extra = {"dim_L": L.dim, "rank_h": span.dim, "dim_M": S.M.dim}
    return rep


# ----------------------------------------------------------------------
# universal property at desk scale


def _target_from(Q, Lt, proj_or_embed, deltat, actt, omegat, label):
    from .algebra import BilinearMap
    from .quadratic import QuadraticModule

    T = QuadraticModule(Lt, Q.M, Q.N, deltat, Q.boundary, actt, Q.actNM, Q.C, Q.quotC, BilinearMap(Q.C, Q.C, Lt, omegat), Q.w, label=label)
    return T


def generate_targets(Q, rng, count=5):
    """Quadratic modules over the base of ``Q`` with an assignment of ``Y``.

    Targets are quotients ``L'/J`` (``J`` an ideal inside ``ker delta``)
    optionally extended by zero-multiplication summands ``N/(d M)`` on
    which ``d(M)`` acts trivially; each comes with ``theta'(y)`` satisfying ``delta' theta' = delta``.
    """
    from .algebra import ActionTensor, direct_product, ideal_generated, induced_action, quotient_algebra
    from .fixtures import module_crossed_module
    from .linalg import kernel_of

    p = Q.p
    out = []
    ops = [Q.actNL.matrix(_unit(Q.N.dim, r)) for r in range(Q.N.dim)]
    ker = kernel_of(Q.delta.matrix, p)
    relations = _generator_relations(Q, ops)
    for t in range(count):
        L, delta, act, omega = Q.L, Q.delta, Q.actNL, Q.omega.tensor
        theta = [np.array(y, dtype=np.int64) for y in Q.gen_L]
        if ker.dim and t % 2 == 1:
            c = rng.integers(0, p, size=ker.dim)
            J = ideal_generated(L, (c @ ker.basis) % p, operators=ops)
            L2, pr = quotient_algebra(L, J, label="L'/J")
            delta = AlgebraMorphism(L2, Q.M, (delta.matrix @ pr.section) % p)
            act = induced_action(act, proj=pr)
            omega = (omega @ pr.matrix.T) % p
            theta = [pr(y) for y in theta]
            L = L2
        z = int(rng.integers(0, 3)) if t else 0
        for _ in range(z):
            # one copy of the N-module N/(ideal of d(M)), zero multiplication
            I = ideal_generated(Q.N, Q.boundary.matrix.T)
            Zmod = module_crossed_module(Q.N, I)
            Z = Zmod.C
            n, k = L.dim, Z.dim
            L2 = direct_product(L, Z)
            delta = AlgebraMorphism(L2, Q.M, np.hstack([delta.matrix, np.zeros((Q.M.dim, k), dtype=np.int64)]))
            t2 = np.zeros((Q.N.dim, n + k, n + k), dtype=np.int64)
            t2[:, :n, :n] = act.tensor
            t2[:, n:, n:] = Zmod.action.tensor
            act = ActionTensor(Q.N, L2, t2)
            omega = np.concatenate([omega, np.zeros(omega.shape[:2] + (k,), dtype=np.int64)], axis=2)
            zs = _admissible_z(Q, Zmod, relations, rng)
            theta = [np.concatenate([y, z]) for y, z in zip(theta, zs)]
            L = L2
        T = _target_from(Q, L, None, delta, act, omega, label="target%d" % t)
        T.theta = theta
        out.append(T)
    return out


def _generator_relations(Q, ops):
    """Vectors ``(n_1, .., n_G)`` in ``N^G`` with ``sum n_g . y_g`` in the ideal spanned by
    products and ``omega``; the truncation makes this nonzero (e.g. ``t^2 y = 0``)."""
    from .algebra import ideal_generated, quotient_algebra
    from .linalg import kernel_of

    p = Q.p
    if not Q.gen_L:
        return np.zeros((0, 0), dtype=np.int64)
    rows = [Q.omega.tensor.reshape(Q.C.dim ** 2, Q.L.dim), Q.L.square_space().basis]
    K = ideal_generated(Q.L, np.vstack(rows) % p, operators=ops)
    _, pr = quotient_algebra(Q.L, K)
    cols = [pr.matrix @ np.einsum("rck,c->kr", Q.actNL.tensor, np.asarray(y, dtype=np.int64)) for y in Q.gen_L]
    phi = np.hstack(cols) % p  # (L/K) x (G n)
    return kernel_of(phi, p).basis


def _admissible_z(Q, Zmod, relations, rng):
    """Random ``z_g`` in ``Z`` with ``sum n_g . z_g = 0`` for every relation."""
    from .linalg import kernel_of

    p, n, G, k = Q.p, Q.N.dim, len(Q.gen_L), Zmod.C.dim
    A = [np.hstack([Zmod.action.matrix(v[g * n:(g + 1) * n]) for g in range(G)]) for v in relations]
    A = np.vstack(A) % p if A else np.zeros((0, G * k), dtype=np.int64)
    sol = kernel_of(A, p).basis
    z = (rng.integers(0, p, size=sol.shape[0]) @ sol) % p if sol.shape[0] else np.zeros(G * k, dtype=np.int64)
    return [z[g * k:(g + 1) * k] for g in range(G)]


def universal_property_check(Q, T, report=None):
    """``Phi: L' -> A`` with ``Phi(y) = theta'(y)``, ``Phi omega = omega'``, ``delta' Phi = delta``."""
    from .iso import Inconsistent, Underdetermined, extend_by_words
    from .quadratic import check_quadratic
    from .report import Report, first_nonzero

    rep = report or Report("universal-property")
    p = Q.p
    sub = check_quadratic(T)
    fails = sub.failures()
    rep.add("target-valid", not fails, (fails[0].name, fails[0].witness) if fails else None)
    pre = [(T.delta(np.asarray(t)) - Q.delta(np.asarray(y))) % p for y, t in zip(Q.gen_L, T.theta)]
    bad = next((g for g, v in enumerate(pre) if np.any(v)), None)
    rep.add("theta-compatible", bad is None, bad)
    pairs = [(Q.actNL.matrix(_unit(Q.N.dim, r)), T.actNL.matrix(_unit(Q.N.dim, r))) for r in range(Q.N.dim)]
    extra = list(zip(Q.omega.tensor.reshape(Q.C.dim ** 2, Q.L.dim), T.omega.tensor.reshape(T.C.dim ** 2, T.L.dim)))
    try:
        Phi = extend_by_words(Q.L, T.L, Q.gen_L, T.theta, pairs, extra)
    except Inconsistent as e:
        rep.add("Phi-exists", False, str(e))
        return rep
    except Underdetermined as e:
        rep.add("Phi-exists", True)
        rep.add("Phi-unique", False, str(e))
        return rep
    rep.add("Phi-exists", True)
    rep.add("Phi-unique", True)
    d = (T.delta.matrix @ Phi.matrix - Q.delta.matrix) % p
    rep.add("delta'.Phi = delta", not d.any(), first_nonzero(d))
    om = (Q.omega.tensor @ Phi.matrix.T - T.omega.tensor) % p
    rep.add("Phi.omega = omega'", not om.any(), first_nonzero(om))
    v = Phi.multiplicativity_violation()
    rep.add("Phi-multiplicative", v is None, v)
    g = [(Phi(np.asarray(y)) - np.asarray(t)) % p for y, t in zip(Q.gen_L, T.theta)]
    bad = next((k for k, x in enumerate(g) if np.any(x)), None)
    rep.add("Phi-on-generators", bad is None, bad)
    rep.note("targets are generated fixtures over the same nil(2) base, not all quadratic modules")
    rep.Phi = Phi
    return rep
