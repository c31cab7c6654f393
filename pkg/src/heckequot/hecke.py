"""Iwahori-Hecke algebras with their canonical bases, over Z[v, v^-1].

Conventions, for a ball of radius R in an extended affine Weyl group
W = W' . Omega with weight function L (equal parameters by default):

* T-basis: T_x T_y = T_{xy} when lengths add; quadratic relation
  (T_s - v_s)(T_s + v_s^-1) = 0 with v_s = v^{L(s)}.
* canonical basis: c_z = sum_y p_{y,z} T_y with p_{z,z} = 1, the lower
  coefficients in strictly negative degrees, the whole element fixed by
  the bar involution, and p_{y omega, z omega'} = p_{y,z} if omega=omega'
  else 0.  Products c_x c_y = sum_z h_{x,y,z} c_z.
* a(z) is the maximum v-degree of h_{x,y,z} over pairs x, y.  Inside a
  radius-R ball the product c_x c_y is exact iff l(x)+l(y) <= R, so the
  maximum ranges over that pair budget.  The value is *certified* when it
  is attained identically for budgets R-m .. R (stabilization margin m),
  stays within the positive-root bound, and l(z) <= R - 2m.
* gamma constants: the coefficient of t_z in t_x t_y is the coefficient
  of v^{a(z)} in h_{x,y,z}.

Everything reduces to the W' part: right translation by Omega and
conjugation by Omega are length-preserving symmetries, so the p-, h- and
gamma-tables are stored on W' only and extended on demand.  Products of
canonical basis elements are streamed pair by pair (one row of the table
lives in memory at a time) along right reduced words, using the expansion
of each c_z c_s, which in the equal-parameter case is read off from the
mu-coefficients of the p-polynomials.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .coxeter import Ball, GroupElement, GroupPresentation, dump_element
from .laurent import LaurentPoly

RawPoly = dict  # exponent -> int coefficient, no zeros

CACHE_SCHEMA = "heckequot-ball/1"


class HeckeError(Exception):
    pass


class BallOverflowError(HeckeError):
    pass


class UncertifiedError(HeckeError):
    pass


# ------------------------------------------------------------ raw poly ops
def _acc_scaled(acc: RawPoly, p: RawPoly, c) -> None:
    """acc += c * p for a scalar c."""
    if not c:
        return
    for e, a in p.items():
        s = acc.get(e, 0) + a * c
        if s:
            acc[e] = s
        elif e in acc:
            del acc[e]


def _acc_mul(acc: RawPoly, p: RawPoly, q: RawPoly) -> None:
    """acc += p * q."""
    for e1, a1 in p.items():
        for e2, a2 in q.items():
            e = e1 + e2
            s = acc.get(e, 0) + a1 * a2
            if s:
                acc[e] = s
            elif e in acc:
                del acc[e]


def _nonneg_sym(p: RawPoly) -> RawPoly:
    """Bar-invariant polynomial matching p in all degrees >= 0."""
    out: RawPoly = {}
    for e, a in p.items():
        if e > 0:
            out[e] = a
            out[-e] = a
        elif e == 0:
            out[0] = a
    return out


# --------------------------------------------------------------- elements
@dataclass
class HeckeElement:
    """A finitely supported A-linear combination of basis elements.

    basis is one of "T", "c", "cdag"; terms maps group elements to
    Laurent polynomials."""

    basis: str
    terms: dict[GroupElement, LaurentPoly]

    def __post_init__(self):
        self.terms = {w: p for w, p in self.terms.items() if p}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HeckeElement)
            and self.basis == other.basis
            and self.terms == other.terms
        )

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        if self.basis != other.basis:
            raise HeckeError("cannot add elements in different bases")
        out = dict(self.terms)
        for w, p in other.terms.items():
            q = out.get(w)
            s = p if q is None else q + p
            if s:
                out[w] = s
            elif w in out:
                del out[w]
        return HeckeElement(self.basis, out)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + other.scaled(LaurentPoly.const(-1))

    def scaled(self, c: LaurentPoly) -> "HeckeElement":
        return HeckeElement(self.basis, {w: p * c for w, p in self.terms.items()})

    def support(self) -> list[GroupElement]:
        return sorted(self.terms, key=GroupElement.key)

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{w.key_str()}: {p.to_str()}" for w, p in sorted(self.terms.items(), key=lambda kv: kv[0].key())
        )
        return f"HeckeElement[{self.basis}]{{{inner}}}"


@dataclass
class CellRecord:
    """One two-sided cell of the ball.

    elements is the full strongly connected component; certified_elements
    the subset with certified a-values.  a_value is the common a over the
    certified subset (None when the subset is empty or mixed, which only
    happens for truncation-affected cells)."""

    elements: list[GroupElement]
    certified_elements: list[GroupElement]
    a_value: int | None
    fully_certified: bool

    def __len__(self):
        return len(self.elements)


@dataclass
class CellPartition:
    """Left, right and two-sided cells of a ball, with a-values."""

    two_sided: list[CellRecord]
    left: list[list[GroupElement]]
    right: list[list[GroupElement]]
    left_id: dict[GroupElement, int]
    right_id: dict[GroupElement, int]
    two_sided_id: dict[GroupElement, int]
    lr_order_pairs: set[tuple[int, int]]  # (i, j) when cell i <=_LR cell j

    def certified_cells(self) -> list[CellRecord]:
        return [c for c in self.two_sided if c.certified_elements]


@dataclass
class PropertyCheck:
    name: str
    passed: bool
    checked: int
    counterexamples: list = field(default_factory=list)


# ------------------------------------------------------------- main class
class HeckeBall:
    """All canonical-basis data for one ball of an extended affine Weyl
    group: p-polynomials, generator products, a-function with
    certification, gamma constants, distinguished involutions, cells."""

    def __init__(
        self,
        pres: GroupPresentation,
        radius: int,
        weights: Sequence[int] | None = None,
        margin: int = 3,
    ):
        self.pres = pres
        self.radius = radius
        self.margin = margin
        self.ball: Ball = pres.ball(radius)
        ngen = len(pres.gen_specs)
        self.weights = list(weights) if weights is not None else [1] * ngen
        if len(self.weights) != ngen or any(w < 1 for w in self.weights):
            raise HeckeError("need one positive weight per generator")
        self.equal_parameters = len(set(self.weights)) == 1 and self.weights[0] == 1

        # W' part of the ball, sorted by (length, key); index 0 is the identity
        self.wp: list[GroupElement] = [e for e in self.ball if e.omega_index() == 0]
        self.wp_index: dict[GroupElement, int] = {e: i for i, e in enumerate(self.wp)}
        self.wp_len = [e.length for e in self.wp]
        self.wp_inv = [self.wp_index[e.inverse()] for e in self.wp]
        self.gens = pres.generators()
        self.omega_elems = pres.omega_elements()
        self.n_pos_roots = pres.num_positive_roots

        # parent[i] = (j, s) with wp[i] = wp[j] * gen[s], length down by one
        self.parent: list[tuple[int, int] | None] = [None] * len(self.wp)
        for i, x in enumerate(self.wp):
            if x.length == 0:
                continue
            for s, g in enumerate(self.gens):
                y = pres.multiply(x, g)
                if y.length == x.length - 1:
                    self.parent[i] = (self.wp_index[y], s)
                    break
            if self.parent[i] is None:  # pragma: no cover
                raise HeckeError("no right descent found inside W'")

        self._p: list[dict[int, RawPoly]] = []
        self._compute_kl_table()
        self._cs: list[list[dict[int, object]] | None] = [None] * ngen
        self._a_values: list[int] | None = None
        self._a_cert: list[bool] | None = None
        self._gamma: dict[tuple[int, int], dict[int, int]] | None = None
        self._gamma_tainted: set[tuple[int, int]] = set()
        self._h_for_dist: dict[tuple[int, int], dict[int, RawPoly]] = {}
        self._dist_idx: list[int] | None = None
        self._cells: CellPartition | None = None

    # ---------------- Kazhdan-Lusztig recursion -------------------------
    def _compute_kl_table(self) -> None:
        """Bar-invariant completion along right reduced words.

        Seed c_{z1} * c_s for z = z1 s; subtract bar-invariant multiples
        of shorter canonical elements until every off-diagonal coefficient
        sits in strictly negative degrees.  The subtracted coefficients
        are exactly the generator-product corrections, recorded for reuse."""
        self._p = [dict() for _ in self.wp]
        self._p[0] = {0: {0: 1}}
        order = sorted(range(len(self.wp)), key=lambda i: self.wp_len[i])
        for zi in order:
            if self.wp_len[zi] == 0:
                continue
            j, s = self.parent[zi]
            E = self._seed_product(j, s)
            # fix violations strictly by decreasing length
            for L in range(self.wp_len[zi] - 1, -1, -1):
                for yi in [k for k in E if self.wp_len[k] == L]:
                    pi = _nonneg_sym(E[yi])
                    if not pi:
                        continue
                    for k, q in self._p[yi].items():
                        acc = E.setdefault(k, {})
                        for e1, a1 in pi.items():
                            for e2, a2 in q.items():
                                e = e1 + e2
                                v = acc.get(e, 0) - a1 * a2
                                if v:
                                    acc[e] = v
                                elif e in acc:
                                    del acc[e]
                        if not acc:
                            del E[k]
            self._p[zi] = {k: v for k, v in E.items() if v}

    def _seed_product(self, j: int, s: int, skip_missing: bool = False) -> dict[int, RawPoly]:
        """c_{wp[j]} * (T_s + v_s^-1) in T-coordinates over W' indices.

        With skip_missing the unique top term that may fall outside the
        ball (wp[j] * s, ascending) is silently dropped."""
        L = self.weights[s]
        g = self.gens[s]
        E: dict[int, RawPoly] = {}
        for yi, p in self._p[j].items():
            y = self.wp[yi]
            ys = self.pres.multiply(y, g)
            ysi = self.wp_index.get(ys)
            if ys.length > y.length:
                if ysi is not None:
                    acc = E.setdefault(ysi, {})
                    _acc_scaled(acc, p, 1)
                elif not skip_missing:
                    raise BallOverflowError("seed product left the ball")
                acc2 = E.setdefault(yi, {})
                _acc_mul(acc2, p, {-L: 1})
            else:
                acc = E.setdefault(ysi, {})
                _acc_scaled(acc, p, 1)
                acc2 = E.setdefault(yi, {})
                # T_y T_s = T_{ys} + (v_s - v_s^-1) T_y; plus v_s^-1 T_y
                _acc_mul(acc2, p, {L: 1})
        return {k: v for k, v in E.items() if v}

    # ---------------- p-polynomial access --------------------------------
    def p_poly(self, y: GroupElement, z: GroupElement) -> LaurentPoly:
        """p_{y,z} for ball elements, Omega rule included."""
        if y.omega_index() != z.omega_index():
            return LaurentPoly.zero()
        om_inv = z.omega_part().inverse()
        yi = self.wp_index.get(self.pres.multiply(y, om_inv))
        zi = self.wp_index.get(self.pres.multiply(z, om_inv))
        if yi is None or zi is None:
            raise BallOverflowError("element outside ball")
        return LaurentPoly(self._p[zi].get(yi, {}))

    def kl_element(self, z: GroupElement) -> HeckeElement:
        """Canonical basis element c_z in the T-basis."""
        om = z.omega_part()
        zi = self.wp_index.get(self.pres.multiply(z, om.inverse()))
        if zi is None:
            raise BallOverflowError("element outside ball")
        terms = {}
        for yi, p in self._p[zi].items():
            terms[self.pres.multiply(self.wp[yi], om)] = LaurentPoly(p)
        return HeckeElement("T", terms)

    def mu(self, y: GroupElement, z: GroupElement) -> int:
        """Coefficient of v^-1 in p_{y,z} (equal parameters)."""
        return self.p_poly(y, z).coeff(-1)

    # ---------------- generator products ---------------------------------
    def _cs_table(self, s: int) -> list[dict[int, object]]:
        """Expansion of c_z c_s over W': dict target -> int or RawPoly.

        Entries at the ball boundary with an ascending step are partial
        (the top term c_{zs} falls outside); they carry the marker key -1."""
        if self._cs[s] is not None:
            return self._cs[s]
        if not self.equal_parameters:
            tbl = self._cs_table_general(s)
            self._cs[s] = tbl
            return tbl
        L = self.weights[s]
        g = self.gens[s]
        tbl: list[dict[int, object]] = []
        for zi, z in enumerate(self.wp):
            zs = self.pres.multiply(z, g)
            row: dict[int, object] = {}
            if zs.length < z.length:
                row[zi] = {L: 1, -L: 1}
            else:
                tgt = self.wp_index.get(zs)
                if tgt is None:
                    row[-1] = 1  # overflow marker: c_{zs} outside the ball
                else:
                    row[tgt] = 1
                for yi, p in self._p[zi].items():
                    m = p.get(-1, 0)
                    if m and self.pres.multiply(self.wp[yi], g).length < self.wp_len[yi]:
                        row[yi] = m
            tbl.append(row)
        self._cs[s] = tbl
        return tbl

    def _cs_table_general(self, s: int) -> list[dict[int, object]]:
        """Expansion of c_z c_s without the mu shortcut, valid for any
        weights.  The correction coefficients are recovered level by level
        as the bar-symmetric parts, exactly as in the canonical-basis
        recursion, so boundary rows (top term outside the ball, marker
        key -1) still carry their lower terms."""
        tbl: list[dict[int, object]] = []
        L = self.weights[s]
        for zi, z in enumerate(self.wp):
            zs = self.pres.multiply(z, self.gens[s])
            if zs.length < z.length:
                tbl.append({zi: {L: 1, -L: 1}})
                continue
            row: dict[int, object] = {}
            if zs not in self.wp_index:
                row[-1] = 1
            E = self._seed_product(zi, s, skip_missing=True)
            for Lv in range(max((self.wp_len[k] for k in E), default=0), -1, -1):
                for yi in [k for k in E if self.wp_len[k] == Lv]:
                    pi = _nonneg_sym(E[yi])
                    if not pi:
                        continue
                    row[yi] = pi
                    for k, q in self._p[yi].items():
                        acc = E.setdefault(k, {})
                        _acc_mul(acc, {e: -a for e, a in pi.items()}, q)
                        if not acc:
                            del E[k]
            tbl.append(row)
        return tbl

    # ---------------- T-basis products -----------------------------------
    def _t_mul_gen(self, terms: dict[GroupElement, LaurentPoly], s: int):
        """Right-multiply a T-basis element by T_s."""
        L = self.weights[s]
        g = self.gens[s]
        xi = LaurentPoly({L: 1, -L: -1})
        out: dict[GroupElement, LaurentPoly] = {}
        for w, p in terms.items():
            ws = self.pres.multiply(w, g)
            if ws not in self.ball.index:
                raise BallOverflowError("T-basis product left the ball")
            if ws.length > w.length:
                q = out.get(ws)
                out[ws] = p if q is None else q + p
            else:
                q = out.get(ws)
                out[ws] = p if q is None else q + p
                q2 = out.get(w)
                r = p * xi
                out[w] = r if q2 is None else q2 + r
        return {w: p for w, p in out.items() if p}

    def _t_mul_omega(self, terms, om: GroupElement):
        return {self.pres.multiply(w, om): p for w, p in terms.items()}

    def mul_T(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        """Product in the T-basis.  Errors if the support leaves the ball."""
        if a.basis != "T" or b.basis != "T":
            raise HeckeError("mul_T needs T-basis operands")
        out: dict[GroupElement, LaurentPoly] = {}
        for w, q in b.terms.items():
            word, om = self.pres.reduced_word(w)
            cur = {x: p for x, p in a.terms.items()}
            for nm in word:
                cur = self._t_mul_gen(cur, self.pres.gen_names.index(nm))
            if not om.is_identity():
                cur = self._t_mul_omega(cur, om)
            for x, p in cur.items():
                r = p * q
                old = out.get(x)
                s = r if old is None else old + r
                if s:
                    out[x] = s
                elif x in out:
                    del out[x]
        return HeckeElement("T", out)

    def t_to_c(self, a: HeckeElement) -> HeckeElement:
        """Rewrite a T-basis element in the canonical basis."""
        if a.basis != "T":
            raise HeckeError("t_to_c needs a T-basis operand")
        rem = dict(a.terms)
        out: dict[GroupElement, LaurentPoly] = {}
        while rem:
            w = max(rem, key=GroupElement.key)
            coeff = rem.pop(w)
            if not coeff:
                continue
            out[w] = coeff
            cw = self.kl_element(w)
            for y, p in cw.terms.items():
                if y == w:
                    continue
                q = rem.get(y, LaurentPoly.zero()) - coeff * p
                if q:
                    rem[y] = q
                elif y in rem:
                    del rem[y]
        return HeckeElement("c", out)

    def c_to_t(self, a: HeckeElement) -> HeckeElement:
        if a.basis != "c":
            raise HeckeError("c_to_t needs a c-basis operand")
        out = HeckeElement("T", {})
        for w, coeff in a.terms.items():
            out = out + self.kl_element(w).scaled(coeff)
        return out

    def dagger(self, a: HeckeElement) -> HeckeElement:
        """The A-algebra involution with T_s -> -T_s^{-1} = -T_s + xi_s,
        identity on T_omega.  Canonical elements map to the c-dagger basis,
        which has the same structure constants."""
        if a.basis != "T":
            raise HeckeError("dagger needs a T-basis operand")
        out: dict[GroupElement, LaurentPoly] = {}
        for w, p in a.terms.items():
            word, om = self.pres.reduced_word(w)
            cur: dict[GroupElement, LaurentPoly] = {self.pres.identity(): p}
            for nm in word:
                s = self.pres.gen_names.index(nm)
                xi = LaurentPoly({self.weights[s]: 1, -self.weights[s]: -1})
                step = self._t_mul_gen(cur, s)
                nxt: dict[GroupElement, LaurentPoly] = {}
                for w2, q in step.items():
                    nxt[w2] = -q
                for w2, q in cur.items():
                    r = q * xi
                    old = nxt.get(w2)
                    nxt[w2] = r if old is None else old + r
                cur = {w2: q for w2, q in nxt.items() if q}
            if not om.is_identity():
                cur = self._t_mul_omega(cur, om)
            for x, q in cur.items():
                old = out.get(x)
                s2 = q if old is None else old + q
                if s2:
                    out[x] = s2
                elif x in out:
                    del out[x]
        return HeckeElement("T", out)

    # ---------------- structure constants --------------------------------
    def h_constants(self, x: GroupElement, y: GroupElement) -> dict[GroupElement, LaurentPoly]:
        """c_x c_y = sum_z h_{x,y,z} c_z; needs l(x) + l(y) <= radius."""
        if x.length + y.length > self.radius:
            raise BallOverflowError("pair exceeds the exact-product budget")
        prod = self.mul_T(self.kl_element(x), self.kl_element(y))
        conv = self.t_to_c(prod)
        return dict(conv.terms)

    def _stream_products(self, visit: Callable[[int, int, dict[int, RawPoly]], None]) -> None:
        """Call visit(xi, yi, P) with P = c_x c_y in canonical coordinates
        for every W' pair with l(x) + l(y) <= radius."""
        budget = self.radius
        order = sorted(range(len(self.wp)), key=lambda i: (self.wp_len[i], i))
        tbls = [self._cs_table(s) for s in range(len(self.gens))]
        for xi in order:
            lx = self.wp_len[xi]
            row: dict[int, dict[int, RawPoly]] = {0: {xi: {0: 1}}}
            visit(xi, 0, row[0])
            for yi in order:
                ly = self.wp_len[yi]
                if ly == 0:
                    continue
                if lx + ly > budget:
                    break
                pi, s = self.parent[yi]
                tbl = tbls[s]
                acc: dict[int, RawPoly] = {}
                for zi, h in row[pi].items():
                    for wi, A in tbl[zi].items():
                        if wi < 0:  # pragma: no cover - budget prevents this
                            raise BallOverflowError("product overflowed the ball")
                        tgt = acc.setdefault(wi, {})
                        if isinstance(A, int):
                            _acc_scaled(tgt, h, A)
                        else:
                            _acc_mul(tgt, h, A)
                for wi, A in tbl[pi].items():
                    if wi == yi or wi < 0:
                        continue
                    for zi, h in row[wi].items():
                        tgt = acc.setdefault(zi, {})
                        if isinstance(A, int):
                            _acc_scaled(tgt, h, -A)
                        else:
                            _acc_mul(tgt, {e: -a for e, a in h.items()}, A)
                acc = {zi: p for zi, p in acc.items() if p}
                row[yi] = acc
                visit(xi, yi, acc)

    # ---------------- a-function ------------------------------------------
    def _ensure_a_data(self) -> None:
        if self._a_values is not None:
            return
        n = len(self.wp)
        # profile[z] maps pair budget l(x)+l(y) to max degree seen
        profile: list[dict[int, int]] = [dict() for _ in range(n)]

        def visit(xi: int, yi: int, P: dict[int, RawPoly]) -> None:
            rho = self.wp_len[xi] + self.wp_len[yi]
            for zi, h in P.items():
                d = max(h)
                prof = profile[zi]
                if prof.get(rho, -(10**9)) < d:
                    prof[rho] = d

        self._stream_products(visit)
        values = []
        certs = []
        R, m = self.radius, self.margin
        for zi in range(n):
            prof = profile[zi]
            run = -(10**9)
            by_budget = {}
            for rho in range(0, R + 1):
                if rho in prof and prof[rho] > run:
                    run = prof[rho]
                by_budget[rho] = run
            val = by_budget[R]
            stable = all(by_budget[r] == val for r in range(R - m, R + 1))
            cert = (
                self.equal_parameters
                and stable
                and 0 <= val <= self.n_pos_roots
                and self.wp_len[zi] <= R - 2 * m
            )
            values.append(val)
            certs.append(cert)
        self._a_values = values
        self._a_cert = certs

    def _wp_coset(self, x: GroupElement) -> tuple[int, GroupElement]:
        om = x.omega_part()
        xi = self.wp_index.get(self.pres.multiply(x, om.inverse()))
        if xi is None:
            raise BallOverflowError("element outside ball")
        return xi, om

    def a_function(self, z: GroupElement) -> tuple[int, bool]:
        """(a(z), certified).  Omega translation leaves a unchanged."""
        self._ensure_a_data()
        zi, _ = self._wp_coset(z)
        return self._a_values[zi], self._a_cert[zi]

    def delta_and_sign(self, z: GroupElement) -> tuple[int, int]:
        """(Delta(z), n_z): the leading term of p_{1,z} is n_z v^{-Delta(z)},
        every other term a strictly larger power of v^-1."""
        zi, om = self._wp_coset(z)
        if not om.is_identity():
            raise HeckeError("Delta is defined on the W' part only")
        p = self._p[zi].get(0)
        if not p:
            raise HeckeError("p_{1,z} vanishes; Delta undefined")
        hi = max(p)
        return -hi, p[hi]

    def distinguished_involutions(self) -> list[tuple[GroupElement, int]]:
        """Certified z in W' with a(z) = Delta(z), paired with n_z."""
        self._ensure_a_data()
        if self._dist_idx is None:
            out = []
            for zi in range(len(self.wp)):
                if not self._a_cert[zi]:
                    continue
                p = self._p[zi].get(0)
                if not p:
                    continue
                if -max(p) == self._a_values[zi]:
                    out.append(zi)
            self._dist_idx = out
        return [(self.wp[zi], self._p[zi][0][max(self._p[zi][0])]) for zi in self._dist_idx]

    # ---------------- gamma table ------------------------------------------
    def _ensure_gamma(self) -> None:
        if self._gamma is not None:
            return
        self._ensure_a_data()
        self.distinguished_involutions()
        dset = set(self._dist_idx)
        gamma: dict[tuple[int, int], dict[int, int]] = {}
        hdist: dict[tuple[int, int], dict[int, RawPoly]] = {}
        tainted: set[tuple[int, int]] = set()

        avals = self._a_values
        acert = self._a_cert

        def visit(xi: int, yi: int, P: dict[int, RawPoly]) -> None:
            row = {}
            for zi, h in P.items():
                if not acert[zi]:
                    # gamma extraction needs the true a(z); mark the pair
                    tainted.add((xi, yi))
                g = h.get(avals[zi], 0)
                if g:
                    row[zi] = g
            gamma[(xi, yi)] = row
            if yi in dset:
                hdist[(xi, yi)] = {zi: dict(h) for zi, h in P.items()}

        self._stream_products(visit)
        self._gamma = gamma
        self._gamma_tainted = tainted
        self._h_for_dist = hdist

    def gamma(self, x: GroupElement, y: GroupElement, z: GroupElement) -> int:
        """Coefficient of t_z in t_x t_y, i.e. the v^{a(z)}-coefficient of
        h_{x,y,z}.  Requires certified a-values throughout."""
        self._ensure_gamma()
        xi, omx = self._wp_coset(x)
        yi, omy = self._wp_coset(y)
        zi, omz = self._wp_coset(z)
        if self.pres.multiply(omx, omy) != omz:
            return 0
        ytld = self.pres.multiply(self.pres.multiply(omx, self.wp[yi]), omx.inverse())
        yti = self.wp_index.get(ytld)
        if yti is None:
            raise BallOverflowError("conjugated element outside ball")
        for idx in (xi, yti, zi):
            if not self._a_cert[idx]:
                raise UncertifiedError("gamma needs certified a-values")
        pair = self._gamma.get((xi, yti))
        if pair is None:
            raise BallOverflowError("pair exceeds the exact-product budget")
        return pair.get(zi, 0)

    def gamma_row(self, x: GroupElement, y: GroupElement) -> dict[GroupElement, int]:
        """All nonzero coefficients of t_x t_y, with certification guards."""
        self._ensure_gamma()
        xi, omx = self._wp_coset(x)
        yi, omy = self._wp_coset(y)
        ytld = self.pres.multiply(self.pres.multiply(omx, self.wp[yi]), omx.inverse())
        yti = self.wp_index.get(ytld)
        if yti is None:
            raise BallOverflowError("conjugated element outside ball")
        if not (self._a_cert[xi] and self._a_cert[yti]):
            raise UncertifiedError("operands must have certified a-values")
        pair = self._gamma.get((xi, yti))
        if pair is None:
            raise BallOverflowError("pair exceeds the exact-product budget")
        if (xi, yti) in self._gamma_tainted:
            raise UncertifiedError("product support touches uncertified elements")
        om = self.pres.multiply(omx, omy)
        out = {}
        for zi, g in pair.items():
            out[self.pres.multiply(self.wp[zi], om)] = g
        return out

    def h_to_distinguished(self, x: GroupElement, d: GroupElement) -> dict[GroupElement, LaurentPoly]:
        """h_{x,d,.} for a distinguished involution d (W' data)."""
        self._ensure_gamma()
        xi, omx = self._wp_coset(x)
        di, omd = self._wp_coset(d)
        if not omd.is_identity():
            raise HeckeError("distinguished involutions lie in W'")
        dtld = self.pres.multiply(self.pres.multiply(omx, self.wp[di]), omx.inverse())
        dti = self.wp_index.get(dtld)
        row = self._h_for_dist.get((xi, dti))
        if row is None:
            raise BallOverflowError("pair exceeds the exact-product budget")
        out = {}
        for zi, h in row.items():
            out[self.pres.multiply(self.wp[zi], omx)] = LaurentPoly(h)
        return out

    def gamma_lines(self) -> list[str]:
        """The stored gamma table as sorted lines "x y z gamma".

        Only decided entries appear: pairs inside the exact-product budget
        with certified operands and untainted support.  The table lives on
        the Coxeter part; products involving length-zero parts follow from
        the translation rule and are not duplicated here."""
        self._ensure_gamma()
        lines = []
        for (xi, yi), row in self._gamma.items():
            if (xi, yi) in self._gamma_tainted:
                continue
            if not (self._a_cert[xi] and self._a_cert[yi]):
                continue
            xk = self.wp[xi].key_str()
            yk = self.wp[yi].key_str()
            for zi, g in row.items():
                lines.append((xk, yk, self.wp[zi].key_str(), g))
        lines.sort()
        return [f"{x} {y} {z} {g}" for x, y, z, g in lines]

    # ---------------- cache line format --------------------------------------
    def cache_header(self) -> str:
        w = ",".join(str(x) for x in self.weights)
        return (f"# {CACHE_SCHEMA} family={self.pres.family} "
                f"radius={self.radius} weights={w} elements={len(self.wp)}")

    def element_lines(self) -> list[str]:
        return [f"E {i} {dump_element(x)}" for i, x in enumerate(self.wp)]

    def p_lines(self) -> list[str]:
        out = []
        for zi in range(len(self.wp)):
            for yi in sorted(self._p[zi]):
                poly = LaurentPoly(self._p[zi][yi]).to_str()
                out.append(f"P {yi} {zi} {poly}")
        return out

    def h_lines(self) -> list[str]:
        hl: list[tuple[int, int, int, str]] = []

        def visit(xi: int, yi: int, row: dict[int, RawPoly]) -> None:
            for zi in sorted(row):
                hl.append((xi, yi, zi, LaurentPoly(row[zi]).to_str()))

        self._stream_products(visit)
        hl.sort()
        return [f"H {x} {y} {z} {p}" for x, y, z, p in hl]

    def h_row_lines(self, xi: int, yi: int) -> list[str]:
        """The H lines for one pair, recomputed along the T-basis route
        (kl_element, mul_T, t_to_c) rather than the streamed c-basis
        route, so the two can cross-check each other bit for bit."""
        prod = self.h_constants(self.wp[xi], self.wp[yi])
        rows = sorted((self.wp_index[z], p) for z, p in prod.items())
        return [f"H {xi} {yi} {zi} {p.to_str()}" for zi, p in rows]

    def cache_lines(self) -> list[str]:
        """Line-oriented dump of the exact tables.

        One header line, then element lines "E i word=...", one P line
        per nonzero basis polynomial "P y z poly", and one H line per
        structure constant "H x y z poly" over every pair within the
        exact-product budget.  Indices refer to the E lines.  The order
        and the polynomial text are canonical, so two computations of the
        same ball dump byte-identical text."""
        return ([self.cache_header()] + self.element_lines()
                + self.p_lines() + self.h_lines())

    # ---------------- cells -------------------------------------------------
    def _ensure_cells(self) -> None:
        if self._cells is not None:
            return
        self._ensure_a_data()
        elems = list(self.ball)
        idx = self.ball.index
        n = len(elems)
        left_edges: list[set[int]] = [set() for _ in range(n)]
        right_edges: list[set[int]] = [set() for _ in range(n)]
        tbls = [self._cs_table(s) for s in range(len(self.gens))]

        for i, y in enumerate(elems):
            yi, om = self._wp_coset(y)
            # left edges: support of c_s c_y = iota(c_{y^-1} c_s) translated
            yinv = self.wp_inv[yi]
            for s in range(len(self.gens)):
                for wi, _A in tbls[s][yinv].items():
                    if wi < 0:
                        continue
                    x = self.pres.multiply(self.wp[self.wp_inv[wi]], om)
                    left_edges[i].add(idx[x])
            # right edges: c_y c_s = c_{y'} c_{omega s omega^-1} T_omega
            for s in range(len(self.gens)):
                s2 = self.pres.omega_conj_generator(om, s)
                for wi, _A in tbls[s2][yi].items():
                    if wi < 0:
                        continue
                    x = self.pres.multiply(self.wp[wi], om)
                    right_edges[i].add(idx[x])
            # Omega translations are invertible, so they link both ways
            for omg in self.omega_elems:
                if omg.is_identity():
                    continue
                j = idx.get(self.pres.multiply(omg, y))
                if j is not None:
                    left_edges[i].add(j)
                    left_edges[j].add(i)
                j = idx.get(self.pres.multiply(y, omg))
                if j is not None:
                    right_edges[i].add(j)
                    right_edges[j].add(i)

        def sccs(adj: list[set[int]]) -> tuple[list[list[int]], list[int]]:
            # iterative Tarjan
            index_counter = [0]
            stack: list[int] = []
            lowlink = [-1] * n
            number = [-1] * n
            on_stack = [False] * n
            comp_id = [-1] * n
            comps: list[list[int]] = []
            for root in range(n):
                if number[root] != -1:
                    continue
                work = [(root, iter(adj[root]))]
                number[root] = lowlink[root] = index_counter[0]
                index_counter[0] += 1
                stack.append(root)
                on_stack[root] = True
                while work:
                    v, it = work[-1]
                    advanced = False
                    for w in it:
                        if number[w] == -1:
                            number[w] = lowlink[w] = index_counter[0]
                            index_counter[0] += 1
                            stack.append(w)
                            on_stack[w] = True
                            work.append((w, iter(adj[w])))
                            advanced = True
                            break
                        elif on_stack[w]:
                            lowlink[v] = min(lowlink[v], number[w])
                    if advanced:
                        continue
                    work.pop()
                    if work:
                        pv = work[-1][0]
                        lowlink[pv] = min(lowlink[pv], lowlink[v])
                    if lowlink[v] == number[v]:
                        comp = []
                        while True:
                            w = stack.pop()
                            on_stack[w] = False
                            comp_id[w] = len(comps)
                            comp.append(w)
                            if w == v:
                                break
                        comps.append(comp)
            return comps, comp_id

        lcomp, lid = sccs(left_edges)
        rcomp, rid = sccs(right_edges)
        both = [left_edges[i] | right_edges[i] for i in range(n)]
        tcomp, tid = sccs(both)

        def order_comp(comps):
            return sorted(
                (sorted(c, key=lambda i: elems[i].key()) for c in comps),
                key=lambda c: elems[c[0]].key(),
            )

        lcomp_o = order_comp(lcomp)
        rcomp_o = order_comp(rcomp)
        tcomp_o = order_comp(tcomp)
        lid2 = {}
        for k, c in enumerate(lcomp_o):
            for i in c:
                lid2[elems[i]] = k
        rid2 = {}
        for k, c in enumerate(rcomp_o):
            for i in c:
                rid2[elems[i]] = k
        tid2 = {}
        for k, c in enumerate(tcomp_o):
            for i in c:
                tid2[elems[i]] = k

        records = []
        for c in tcomp_o:
            cert_elems = []
            cert_avals = set()
            all_cert = True
            for i in c:
                zi, _ = self._wp_coset(elems[i])
                if self._a_cert[zi]:
                    cert_elems.append(elems[i])
                    cert_avals.add(self._a_values[zi])
                else:
                    all_cert = False
            records.append(
                CellRecord(
                    elements=[elems[i] for i in c],
                    certified_elements=cert_elems,
                    a_value=cert_avals.pop() if len(cert_avals) == 1 else None,
                    fully_certified=all_cert and len(cert_avals) == 0,
                )
            )

        # two-sided preorder on cells, transitively closed
        pairs: set[tuple[int, int]] = set()
        for i in range(n):
            for j in both[i]:  # j <=_LR i
                pairs.add((tid2[elems[j]], tid2[elems[i]]))
        changed = True
        while changed:
            changed = False
            for a_, b_ in list(pairs):
                for c_, d_ in list(pairs):
                    if b_ == c_ and (a_, d_) not in pairs:
                        pairs.add((a_, d_))
                        changed = True

        self._cells = CellPartition(
            two_sided=records,
            left=[[elems[i] for i in c] for c in lcomp_o],
            right=[[elems[i] for i in c] for c in rcomp_o],
            left_id=lid2,
            right_id=rid2,
            two_sided_id=tid2,
            lr_order_pairs=pairs,
        )

    def cell_partition(self) -> CellPartition:
        self._ensure_cells()
        return self._cells

    def nhat(self, z: GroupElement) -> int:
        """n_d for the unique distinguished involution d in the left cell
        of z^-1."""
        self._ensure_cells()
        dinv = self.distinguished_involutions()
        target = self._cells.left_id.get(z.inverse())
        if target is None:
            raise BallOverflowError("element outside ball")
        hits = [(d, nd) for d, nd in dinv if self._cells.left_id.get(d) == target]
        if len(hits) != 1:
            raise UncertifiedError(
                f"expected one distinguished involution in the left cell, found {len(hits)}"
            )
        return hits[0][1]

    # ---------------- Lusztig properties ---------------------------------
    def check_properties(self) -> list[PropertyCheck]:
        """P1-P8 on the certified region; exhaustive, with counterexamples."""
        self._ensure_gamma()
        self._ensure_cells()
        cert_wp = [zi for zi in range(len(self.wp)) if self._a_cert[zi]]
        cert_set = set(cert_wp)
        dist = self.distinguished_involutions()
        dist_idx = list(self._dist_idx)
        dset = set(dist_idx)
        checks = []

        # P1: a(z) <= Delta(z)
        bad = []
        for zi in cert_wp:
            p = self._p[zi].get(0)
            if not p:
                continue
            if self._a_values[zi] > -max(p):
                bad.append(self.wp[zi])
        checks.append(PropertyCheck("P1", not bad, len(cert_wp), bad[:5]))

        # gamma lookups below stay on W' pairs in the budget
        def gam(xi: int, yi: int, zi: int) -> int | None:
            row = self._gamma.get((xi, yi))
            if row is None:
                return None
            return row.get(zi, 0)

        # P2: gamma_{x,y,d} != 0 with d distinguished forces x = y^-1
        bad = []
        count = 0
        for (xi, yi), row in self._gamma.items():
            if xi not in cert_set or yi not in cert_set:
                continue
            for di in dset:
                # symbol gamma_{x,y,d} is the coefficient of t_{d^-1} = t_d
                if self._a_cert[di] and row.get(di, 0):
                    count += 1
                    if self.wp_inv[xi] != yi:
                        bad.append((self.wp[xi], self.wp[yi], self.wp[di]))
        checks.append(PropertyCheck("P2", not bad, count, bad[:5]))

        # P3: for each y exactly one d with gamma_{y,y^-1,d} != 0; pairs
        # whose product support leaves the certified region are skipped
        bad = []
        count = 0
        for yi in cert_wp:
            pair = (yi, self.wp_inv[yi])
            if self.wp_len[yi] + self.wp_len[self.wp_inv[yi]] > self.radius:
                continue
            if pair in self._gamma_tainted:
                continue
            count += 1
            row = self._gamma.get(pair, {})
            hits = [zi for zi in row if zi in dset and row[zi]]
            if len(hits) != 1:
                bad.append((self.wp[yi], len(hits)))
        checks.append(PropertyCheck("P3", not bad, count, bad[:5]))

        # P5: gamma_{y^-1,y,d} = n_d = +-1
        bad = []
        count = 0
        for yi in cert_wp:
            yinv = self.wp_inv[yi]
            if self.wp_len[yi] + self.wp_len[yinv] > self.radius:
                continue
            row = self._gamma.get((yinv, yi), {})
            for di in dset:
                g = row.get(di, 0)
                if g:
                    count += 1
                    nd = self._p[di][0][max(self._p[di][0])]
                    if g != nd or abs(nd) != 1:
                        bad.append((self.wp[yi], self.wp[di], g, nd))
        checks.append(PropertyCheck("P5", not bad, count, bad[:5]))

        # P6: distinguished involutions square to e
        bad = [d for d, _ in dist if not (d * d).is_identity()]
        checks.append(PropertyCheck("P6", not bad, len(dist), bad[:5]))

        # P7: gamma_{x,y,z} = gamma_{y,z,x} (cyclic invariance)
        bad = []
        count = 0
        for (xi, yi), row in self._gamma.items():
            if xi not in cert_set or yi not in cert_set:
                continue
            for zi, g in row.items():
                if zi not in cert_set:
                    continue
                # symbol: gamma_{x,y,w} with w = z^-1
                wi = self.wp_inv[zi]
                g2 = gam(yi, wi, self.wp_inv[xi])
                if g2 is None:
                    continue
                count += 1
                if g != g2:
                    bad.append((self.wp[xi], self.wp[yi], self.wp[wi], g, g2))
        checks.append(PropertyCheck("P7", not bad, count, bad[:5]))

        # P8: gamma_{x,y,z} != 0 implies x ~L y^-1, y ~L z, z^-1 ~L x^-1
        bad = []
        count = 0
        lid = self._cells.left_id
        for (xi, yi), row in self._gamma.items():
            if xi not in cert_set or yi not in cert_set:
                continue
            for zi, g in row.items():
                if not g or zi not in cert_set:
                    continue
                count += 1
                x, y, z = self.wp[xi], self.wp[yi], self.wp[zi]
                ok = (
                    lid[x] == lid[y.inverse()]
                    and lid[y] == lid[z]
                    and lid[z.inverse()] == lid[x.inverse()]
                )
                if not ok:
                    bad.append((x, y, z))
        checks.append(PropertyCheck("P8", not bad, count, bad[:5]))

        # P4: z' <=_LR z implies a(z') >= a(z), on cells with a defined
        bad = []
        count = 0
        cells = self._cells
        for i, j in cells.lr_order_pairs:
            ci, cj = cells.two_sided[i], cells.two_sided[j]
            if ci.a_value is None or cj.a_value is None:
                continue
            count += 1
            if ci.a_value < cj.a_value:
                bad.append((i, j, ci.a_value, cj.a_value))
        checks.append(PropertyCheck("P4", not bad, count, bad[:5]))

        order = {"P1": 0, "P2": 1, "P3": 2, "P4": 3, "P5": 4, "P6": 5, "P7": 6, "P8": 7}
        checks.sort(key=lambda c: order[c.name])
        return checks
