"""Chart-local tensor calculus in dimension four.

Scalars may be :class:`RatFunc` or :class:`TSeries` (any ring with ``+ - *``,
``diff(name)`` and exact inversion of the metric determinant). Conventions:

* ``R^l_{kij} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik}``
* ``Ric_{kj} = R^i_{kij}``; the round sphere has positive Ricci curvature.
* Two-forms are stored on the ordered pairs ``PAIRS``; the Hodge star is
  ``(*w)_{ij} = vol * sum_{k<l} eps_{ijkl} w^{kl}`` with ``eps_{0123} = orientation``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import DegenerateMetricError, NotAUnitError
from .symalg import MPoly, RatFunc, TSeries

PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
PAIR_INDEX = {p: n for n, p in enumerate(PAIRS)}


# ------------------------------------------------------------------ scalars
def const_like(sample, c):
    if hasattr(sample, "like"):
        return sample.like(c)
    if isinstance(sample, RatFunc):
        return RatFunc.const(sample.vars, c)
    raise TypeError(f"unsupported scalar type {type(sample).__name__}")


def is_zero(s) -> bool:
    return s.is_zero()


def scalar_inverse(s):
    try:
        return s.inverse()
    except (NotAUnitError, ZeroDivisionError) as exc:
        raise DegenerateMetricError() from exc


def perm_sign(p: Sequence[int]) -> int:
    p = list(p)
    if len(set(p)) != len(p):
        return 0
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def det(m):
    """Determinant by cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        if is_zero(m[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else m[0][0] * 0


def adjugate(m):
    n = len(m)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            c = det(minor)
            out[j][i] = -c if (i + j) % 2 else c
    return out


# ------------------------------------------------------------------- charts
@dataclass(frozen=True)
class Chart:
    coords: tuple
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("coordinate names must be distinct")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def reversed(self) -> "Chart":
        return Chart(self.coords, -self.orientation)


@dataclass
class MetricField:
    chart: Chart
    g: list
    volume: object = None  # square root of det g; chosen by `volume_form` if absent
    signature: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = self.chart.dim
        if len(self.g) != n or any(len(r) != n for r in self.g):
            raise ValueError("metric components must be a square array of chart size")
        for i in range(n):
            for j in range(i + 1, n):
                if not (self.g[i][j] - self.g[j][i]).is_zero():
                    raise ValueError(f"metric not symmetric at ({i},{j})")

    @property
    def dim(self):
        return self.chart.dim

    def det(self):
        if "det" not in self._cache:
            d = det(self.g)
            if is_zero(d):
                raise DegenerateMetricError()
            self._cache["det"] = d
        return self._cache["det"]

    def inverse(self):
        if "inv" not in self._cache:
            di = scalar_inverse(self.det())
            adj = adjugate(self.g)
            self._cache["inv"] = [[adj[i][j] * di for j in range(self.dim)] for i in range(self.dim)]
        return self._cache["inv"]

    def with_orientation(self, orientation: int) -> "MetricField":
        return MetricField(Chart(self.chart.coords, orientation), self.g, self.volume, self.signature)

    def scaled(self, factor) -> "MetricField":
        """The conformal metric ``factor * g``."""
        g = [[factor * c for c in row] for row in self.g]
        vol = None if self.volume is None else self.volume * factor * factor
        return MetricField(self.chart, g, vol, self.signature)

    def map(self, fn: Callable) -> "MetricField":
        return MetricField(self.chart, [[fn(c) for c in row] for row in self.g])


def volume_form(g: MetricField, reference: Mapping | None = None):
    """``sqrt(det g)`` times the chart orientation.

    For rational functions the root is exact and its sign is fixed to be
    positive at ``reference`` (default: the origin). For series the principal
    root of the leading coefficient is used.
    """
    if g.volume is not None:
        base = g.volume
    else:
        d = g.det()
        base = d.sqrt()
        if isinstance(base, RatFunc):
            pt = reference or {c: 0 for c in g.chart.coords}
            val = base.eval(pt)
            if val.re < 0 or (val.re == 0 and val.im < 0):
                base = -base
    return base if g.chart.orientation > 0 else -base


# --------------------------------------------------------------- curvature
@dataclass
class CurvaturePack:
    metric: MetricField
    gamma1: list  # G_{k i j}, first index lowered
    christoffel: list  # G^k_{ij}
    riem: dict  # (P, Q) -> R_{P Q} for P <= Q, pair indices into PAIRS
    ricci: list
    scalar: object

    def R(self, a, b, c, d):
        """Fully lowered ``R_{abcd}`` using the pair symmetries."""
        if a == b or c == d:
            return const_like(self.scalar, 0)
        s = 1
        if a > b:
            a, b, s = b, a, -s
        if c > d:
            c, d, s = d, c, -s
        p, q = PAIR_INDEX[(a, b)], PAIR_INDEX[(c, d)]
        v = self.riem[(p, q) if p <= q else (q, p)]
        return v if s > 0 else -v

    def riemann_matrix(self):
        return [[self.riem[(p, q) if p <= q else (q, p)] for q in range(6)] for p in range(6)]

    def first_bianchi(self):
        """``R_{0123} + R_{0231} + R_{0312}``; zero for a torsion-free connection."""
        return self.R(0, 1, 2, 3) + self.R(0, 2, 3, 1) + self.R(0, 3, 1, 2)


def christoffel(g: MetricField):
    n = g.dim
    xs = g.chart.coords
    dg = [[[g.g[i][j].diff(xs[m]) if i <= j else None for j in range(n)] for i in range(n)] for m in range(n)]
    for m in range(n):
        for i in range(n):
            for j in range(i):
                dg[m][i][j] = dg[m][j][i]
    gam1 = [[[None] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                v = (dg[i][j][k] + dg[j][i][k] - dg[k][i][j]) * Fraction(1, 2)
                gam1[k][i][j] = gam1[k][j][i] = v
    inv = g.inverse()
    gam2 = [[[None] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                acc = None
                for l in range(n):
                    if is_zero(inv[k][l]) or is_zero(gam1[l][i][j]):
                        continue
                    t = inv[k][l] * gam1[l][i][j]
                    acc = t if acc is None else acc + t
                v = acc if acc is not None else const_like(g.g[0][0], 0)
                gam2[k][i][j] = gam2[k][j][i] = v
    return dg, gam1, gam2


def curvature(g: MetricField, check_bianchi: bool = True) -> CurvaturePack:
    if "curv" in g._cache:
        return g._cache["curv"]
    n = g.dim
    if n != 4:
        raise ValueError("curvature is implemented in dimension 4")
    xs = g.chart.coords
    dg, gam1, gam2 = christoffel(g)
    zero = const_like(g.g[0][0], 0)
    ddg: dict = {}

    def d2(i, j, a, b):
        # d_a d_b g_ij with all symmetries folded in
        i, j = min(i, j), max(i, j)
        a, b = min(a, b), max(a, b)
        key = (i, j, a, b)
        if key not in ddg:
            ddg[key] = dg[b][i][j].diff(xs[a])
        return ddg[key]

    def quad(l, k, i, j):
        # G^m_{ik} G_{m j l} - G^m_{jk} G_{m i l}
        acc = zero
        for m in range(n):
            a, b = gam2[m][i][k], gam1[m][j][l]
            if not (is_zero(a) or is_zero(b)):
                acc = acc + a * b
            a, b = gam2[m][j][k], gam1[m][i][l]
            if not (is_zero(a) or is_zero(b)):
                acc = acc - a * b
        return acc

    riem = {}
    for p in range(6):
        for q in range(p, 6):
            l, k = PAIRS[p]
            i, j = PAIRS[q]
            lin = (d2(j, l, i, k) - d2(j, k, i, l) - d2(i, l, j, k) + d2(i, k, j, l)) * Fraction(1, 2)
            riem[(p, q)] = lin + quad(l, k, i, j)
    pack = CurvaturePack(g, gam1, gam2, riem, None, zero)
    inv = g.inverse()
    ric = [[None] * n for _ in range(n)]
    for k in range(n):
        for j in range(k, n):
            acc = zero
            for i in range(n):
                for l in range(n):
                    if is_zero(inv[i][l]):
                        continue
                    r = pack.R(l, k, i, j)
                    if not is_zero(r):
                        acc = acc + inv[i][l] * r
            ric[k][j] = ric[j][k] = acc
    scal = zero
    for k in range(n):
        for j in range(n):
            if not is_zero(inv[k][j]):
                scal = scal + inv[k][j] * ric[k][j]
    pack.ricci, pack.scalar = ric, scal
    if check_bianchi and not is_zero(pack.first_bianchi()):
        raise ArithmeticError("first Bianchi identity failed")
    g._cache["curv"] = pack
    return pack


def einstein_residual(g: MetricField, lam) -> list:
    ric = curvature(g).ricci
    return [[ric[i][j] - g.g[i][j] * lam for j in range(g.dim)] for i in range(g.dim)]


def einstein_constant(g: MetricField):
    """The constant ``lam`` with ``Ric = lam g``, or ``None`` if there is none."""
    ric = curvature(g).ricci
    lam = None
    for i in range(g.dim):
        for j in range(g.dim):
            if not is_zero(g.g[i][j]):
                lam = ric[i][j] * scalar_inverse(g.g[i][j])
                break
        if lam is not None:
            break
    if lam is None or not lam.is_constant():
        return None
    if any(not is_zero(c) for row in einstein_residual(g, lam) for c in row):
        return None
    return lam


def second_bianchi_residuals(pack: CurvaturePack):
    """All components of ``nabla_m R_{abcd} + nabla_a R_{bmcd} + nabla_b R_{macd}``."""
    g = pack.metric
    n = g.dim
    xs = g.chart.coords
    G = pack.christoffel
    zero = const_like(pack.scalar, 0)

    def nabla(m, a, b, c, d):
        acc = pack.R(a, b, c, d).diff(xs[m])
        idx = [a, b, c, d]
        for slot in range(4):
            for e in range(n):
                gam = G[e][m][idx[slot]]
                if is_zero(gam):
                    continue
                rep = list(idx)
                rep[slot] = e
                r = pack.R(*rep)
                if not is_zero(r):
                    acc = acc - gam * r
        return acc

    out = []
    for m, a, b in itertools.combinations(range(n), 3):
        for c, d in PAIRS:
            out.append(nabla(m, a, b, c, d) + nabla(a, b, m, c, d) + nabla(b, m, a, c, d))
    return out or [zero]


# ------------------------------------------------------------ hodge & weyl
def lambda2_inverse(g: MetricField):
    inv = g.inverse()
    return [
        [inv[k][a] * inv[l][b] - inv[k][b] * inv[l][a] for (a, b) in PAIRS]
        for (k, l) in PAIRS
    ]


def hodge_star(g: MetricField, volume=None):
    """6x6 matrix ``H`` with ``(*w)_P = sum_Q H[P][Q] w_Q`` on lowered pair components."""
    key = ("star", g.chart.orientation)
    if volume is None and key in g._cache:
        return g._cache[key]
    vol = volume if volume is not None else volume_form(g)
    G2 = lambda2_inverse(g)
    H = []
    for (i, j) in PAIRS:
        row = []
        for q in range(6):
            acc = const_like(g.g[0][0], 0)
            for r, (k, l) in enumerate(PAIRS):
                e = perm_sign((i, j, k, l))
                if e:
                    acc = acc + G2[r][q] * e
            row.append(acc * vol)
        H.append(row)
    if volume is None:
        g._cache[key] = H
    return H


def matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for k in range(m):
                if is_zero(a[i][k]) or is_zero(b[k][j]):
                    continue
                t = a[i][k] * b[k][j]
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else a[0][0] * 0)
        out.append(row)
    return out


def weyl_lowered(pack: CurvaturePack):
    """``W_{PQ}`` on pairs: Riemann minus the Schouten part."""
    g = pack.metric.g
    ric = pack.ricci
    s6 = pack.scalar * Fraction(1, 6)
    # A = (Ric - R/6 g)/2, W = R - A (kulkarni-nomizu) g
    A = [[(ric[i][j] - g[i][j] * s6) * Fraction(1, 2) for j in range(4)] for i in range(4)]
    W = []
    for (a, b) in PAIRS:
        row = []
        for (c, d) in PAIRS:
            kn = A[a][c] * g[b][d] + A[b][d] * g[a][c] - A[a][d] * g[b][c] - A[b][c] * g[a][d]
            row.append(pack.R(a, b, c, d) - kn)
        W.append(row)
    return W


@dataclass
class WeylSplit:
    """Weyl operator on two-forms and its (anti-)self-dual parts.

    ``plus``/``minus`` are the 6x6 operators ``(W +- *W)/2``; ``block(sign)``
    gives the 3x3 matrix in the basis ``P_sign(dx^0 ^ dx^i)`` of the eigenbundle.
    """

    weyl: list
    star: list
    plus: list
    minus: list

    def is_self_dual(self) -> bool:
        return all(is_zero(c) for row in self.minus for c in row)

    def is_anti_self_dual(self) -> bool:
        return all(is_zero(c) for row in self.plus for c in row)

    def trace(self, sign: int):
        op = self.plus if sign > 0 else self.minus
        acc = op[0][0]
        for i in range(1, 6):
            acc = acc + op[i][i]
        return acc

    def block(self, sign: int):
        op = self.plus if sign > 0 else self.minus
        half = Fraction(1, 2)
        basis = []
        for i in range(3):
            v = [self.star[p][i] * (half * sign) for p in range(6)]
            v[i] = v[i] + const_like(v[i], half)
            basis.append(v)
        # images in terms of the basis: the e_{0i} components of any form in the
        # eigenbundle determine it, so solve with the 3x3 matrix of those components
        images = [[sum_terms(op[p][q] * basis[i][q] for q in range(6)) for p in range(6)] for i in range(3)]
        B = [[basis[j][r] for j in range(3)] for r in range(3)]
        Binv_adj = adjugate(B)
        dinv = scalar_inverse(det(B))
        out = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                acc = const_like(B[0][0], 0)
                for r in range(3):
                    acc = acc + Binv_adj[j][r] * images[i][r]
                out[j][i] = acc * dinv
        return out


def sum_terms(it):
    acc = None
    for t in it:
        acc = t if acc is None else acc + t
    return acc


def weyl_split(g: MetricField, volume=None) -> WeylSplit:
    pack = curvature(g)
    W = weyl_lowered(pack)
    H = hodge_star(g, volume)
    Wop = matmul(W, lambda2_inverse(g))
    SW = matmul(H, Wop)
    half = Fraction(1, 2)
    plus = [[(Wop[i][j] + SW[i][j]) * half for j in range(6)] for i in range(6)]
    minus = [[(Wop[i][j] - SW[i][j]) * half for j in range(6)] for i in range(6)]
    return WeylSplit(Wop, H, plus, minus)


# --------------------------------------------------------------- reporting
def _max_degree(s):
    if isinstance(s, RatFunc):
        return max(s.num.total_degree() if s.num else 0, s.den.total_degree())
    if isinstance(s, TSeries):
        return max((c.total_degree() for c in s.coeffs.values()), default=0)
    return 0


def residual_report(components, points: Sequence[Mapping] = ()) -> dict:
    """JSON-ready summary of an array of scalars."""
    flat = []

    def walk(x, idx):
        if isinstance(x, list):
            for n, y in enumerate(x):
                walk(y, idx + [n])
        else:
            flat.append((idx, x))

    walk(components, [])
    entries = []
    for idx, s in flat:
        e = {"index": idx, "is_zero": s.is_zero(), "max_degree": _max_degree(s)}
        if points and isinstance(s, RatFunc):
            e["samples"] = [str(s.eval(p)) for p in points]
        entries.append(e)
    return {"all_zero": all(e["is_zero"] for e in entries), "components": entries}


def metric_from_polys(coords: Sequence[str], entries, orientation: int = 1) -> MetricField:
    """Wrap a nested list of MPoly/RatFunc/number entries as a RatFunc metric."""
    coords = tuple(coords)

    def conv(e):
        if isinstance(e, RatFunc):
            return e.extend(coords)
        if isinstance(e, MPoly):
            return RatFunc.from_poly(e.extend(coords))
        return RatFunc.const(coords, e)

    return MetricField(Chart(coords, orientation), [[conv(e) for e in row] for row in entries])


# ------------------------------------------------------- float FD oracle
def fd_ricci(metric_fn: Callable, point: Sequence, h=None, dps: int = 60):
    """Ricci tensor of a metric given as a Python function, by finite differences.

    ``metric_fn`` maps an ``mpmath`` point to a 4x4 nested list. High precision
    arithmetic keeps nested central differences accurate.
    """
    import mpmath

    with mpmath.workdps(dps):
        h = mpmath.mpf(h) if h is not None else mpmath.mpf(10) ** (-dps // 4)
        p0 = [mpmath.mpf(x) for x in point]
        n = len(p0)

        def shifted(p, k, s):
            q = list(p)
            q[k] += s
            return q

        def gam(p):
            g = mpmath.matrix(metric_fn(p))
            gi = g ** -1
            dg = []
            for m in range(n):
                a = mpmath.matrix(metric_fn(shifted(p, m, h)))
                b = mpmath.matrix(metric_fn(shifted(p, m, -h)))
                dg.append((a - b) / (2 * h))
            G = [[[mpmath.mpf(0)] * n for _ in range(n)] for _ in range(n)]
            for k in range(n):
                for i in range(n):
                    for j in range(n):
                        G[k][i][j] = sum(
                            gi[k, l] * (dg[i][j, l] + dg[j][i, l] - dg[l][i, j]) / 2 for l in range(n)
                        )
            return G

        G0 = gam(p0)
        dG = []
        for m in range(n):
            a, b = gam(shifted(p0, m, h)), gam(shifted(p0, m, -h))
            dG.append([[[(a[k][i][j] - b[k][i][j]) / (2 * h) for j in range(n)] for i in range(n)] for k in range(n)])
        ric = [[mpmath.mpf(0)] * n for _ in range(n)]
        for k in range(n):
            for j in range(n):
                acc = mpmath.mpf(0)
                for i in range(n):
                    acc += dG[i][i][j][k] - dG[j][i][i][k]
                    for m in range(n):
                        acc += G0[i][i][m] * G0[m][j][k] - G0[i][j][m] * G0[m][i][k]
                ric[k][j] = acc
        return ric, metric_fn(p0)
