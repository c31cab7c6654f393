"""Fixed loci and component censuses for finite groups acting on tori.

A group element acts on an algebraic torus through a unimodular integer
matrix on the cocharacter lattice.  Its fixed locus is a disjoint union
of translates of a subtorus: the free directions span ker(M - I), the
set of components is the torsion of coker(M - I).  Components carry an
action of the centralizer, and the pieces of the quotient are recorded
as exact descriptors.  All arithmetic is integer or Fraction; there are
no floating point numbers anywhere in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .coxeter import mat_identity, mat_mul, mat_vec

Matrix = list[list[int]]


class ExtQuotError(Exception):
    pass


def _ident_rows(r: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(r)] for i in range(r)]


def _grid(m) -> tuple:
    return tuple(tuple(row) for row in m)


# ---------------- integer linear algebra ------------------------------------

def smith_normal_form(a: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """U, D, V with D = U a V, U and V unimodular, and the diagonal of D
    a nonnegative divisibility chain d1 | d2 | ..."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(row) for row in a]
    u = _ident_rows(m)
    v = _ident_rows(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(i, j, c):
        d[i] = [x + c * y for x, y in zip(d[i], d[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]

    def add_col(i, j, c):
        for r in d:
            r[i] += c * r[j]
        for r in v:
            r[i] += c * r[j]

    t = 0
    while t < min(m, n):
        pivots = [
            (abs(d[i][j]), i, j)
            for i in range(t, m)
            for j in range(t, n)
            if d[i][j]
        ]
        if not pivots:
            break
        _, pi, pj = min(pivots)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while any(d[i][t] for i in range(t + 1, m)) or any(
            d[t][j] for j in range(t + 1, n)
        ):
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        swap_rows(i, t)
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        swap_cols(j, t)
        offender = next(
            (
                i
                for i in range(t + 1, m)
                if any(d[i][j] % d[t][t] for j in range(t + 1, n))
            ),
            None,
        )
        if offender is not None:
            # pull the offending row up so the pivot can absorb its gcd
            add_row(t, offender, 1)
            continue
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    if _grid(mat_mul(mat_mul(u, a), v)) != _grid(d):
        raise ExtQuotError("normal form bookkeeping broke")
    diag = [d[i][i] for i in range(min(m, n))]
    for x, y in zip(diag, diag[1:]):
        if x and y % x:
            raise ExtQuotError("divisibility chain broke")
    return u, d, v


def mat_inverse_unimodular(v: Matrix) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(v)
    work = [[Fraction(x) for x in row] + [Fraction(i == j) for j in range(n)]
            for i, row in enumerate(v)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise ExtQuotError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        scale = work[col][col]
        work[col] = [x / scale for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                c = work[r][col]
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
    out = []
    for row in work:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ExtQuotError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return out


def _frac_vec(m: Matrix, q: tuple[Fraction, ...]) -> list[Fraction]:
    return [sum((Fraction(c) * x for c, x in zip(row, q)), Fraction(0))
            for row in m]


def _mod1(xs) -> tuple[Fraction, ...]:
    return tuple(x - (x.numerator // x.denominator) for x in xs)


def cycle_type(perm: tuple[int, ...]) -> tuple[int, ...]:
    seen: set[int] = set()
    parts = []
    for i in range(len(perm)):
        if i in seen:
            continue
        n, j = 0, i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            n += 1
        parts.append(n)
    return tuple(sorted(parts, reverse=True))


# ---------------- descriptors ------------------------------------------------

@dataclass(frozen=True)
class Point:
    @property
    def dim(self) -> int:
        return 0

    def __str__(self) -> str:
        return "point"


@dataclass(frozen=True)
class FreeLine:
    """A punctured affine line, no identification along it."""

    @property
    def dim(self) -> int:
        return 1

    def __str__(self) -> str:
        return "line"


@dataclass(frozen=True)
class LineModInversion:
    """A punctured line with z and 1/z identified; same ring as an
    honest affine line."""

    @property
    def dim(self) -> int:
        return 1

    def __str__(self) -> str:
        return "line/inv"


@dataclass(frozen=True)
class SymProduct:
    """Product of symmetric powers of the punctured line, one factor of
    size n per entry.  Parts are listed by decreasing attached weight."""

    parts: tuple[int, ...]

    @property
    def dim(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "sym(" + ",".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class TorusModGroup:
    """Symbolic quotient of a torus of the given rank; the label names
    the acting group when it is known exactly."""

    rank: int
    label: str

    @property
    def dim(self) -> int:
        return self.rank

    def __str__(self) -> str:
        return f"torus({self.rank})/{self.label}"


Descriptor = Point | FreeLine | LineModInversion | SymProduct | TorusModGroup


def descriptor_sort_key(d: Descriptor) -> tuple:
    return (d.dim, type(d).__name__, str(d))


@dataclass(frozen=True)
class ExtQuotComponent:
    class_tag: str
    dim: int
    descriptor: Descriptor
    cycle: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.descriptor.dim != self.dim:
            raise ExtQuotError(
                f"descriptor {self.descriptor} does not have dimension {self.dim}"
            )

    def __str__(self) -> str:
        return f"[{self.class_tag}] dim={self.dim} {self.descriptor}"


def census(components: list[ExtQuotComponent]) -> list[tuple[int, str, int]]:
    """Sorted (dim, descriptor text, multiplicity) rows."""
    counts: dict[tuple[int, str], int] = {}
    for c in components:
        key = (c.dim, str(c.descriptor))
        counts[key] = counts.get(key, 0) + 1
    return [(d, s, n) for (d, s), n in sorted(counts.items())]


# ---------------- torus actions ----------------------------------------------

@dataclass
class ConjClass:
    rep: int
    members: tuple[int, ...]
    name: str
    cycle: tuple[int, ...] | None = None


@dataclass
class TorusAction:
    """A finite group of unimodular matrices acting on a lattice.

    `perms` optionally models the same group as permutations of a larger
    coordinate set; group arithmetic then runs on tuples, which is what
    makes the order-720 cases cheap.  `embed` maps lattice coordinates
    into ambient torus coordinates when the action lives on a sublattice
    cut out by a determinant condition."""

    rank: int
    matrices: list[Matrix]
    names: list[str]
    group_label: str
    family: str = "generic"
    perms: list[tuple[int, ...]] | None = None
    ambient_rank: int | None = None
    embed: Matrix | None = None

    def __post_init__(self):
        keys = [tuple(map(tuple, m)) for m in self.matrices]
        self._key_to_idx = {k: i for i, k in enumerate(keys)}
        if len(self._key_to_idx) != len(keys):
            raise ExtQuotError("action has repeated matrices")
        ident = tuple(map(tuple, mat_identity(self.rank)))
        if ident not in self._key_to_idx:
            raise ExtQuotError("action has no identity matrix")
        self._id = self._key_to_idx[ident]
        if self.perms is not None:
            self._perm_to_idx = {p: i for i, p in enumerate(self.perms)}
        self._mult: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.matrices)

    def identity_index(self) -> int:
        return self._id

    def mult(self, i: int, j: int) -> int:
        got = self._mult.get((i, j))
        if got is not None:
            return got
        if self.perms is not None:
            a, b = self.perms[i], self.perms[j]
            k = self._perm_to_idx[tuple(a[b[x]] for x in range(len(b)))]
        else:
            prod = tuple(map(tuple, mat_mul(self.matrices[i], self.matrices[j])))
            if prod not in self._key_to_idx:
                raise ExtQuotError("action is not closed under products")
            k = self._key_to_idx[prod]
        self._mult[(i, j)] = k
        return k

    def inverse_of(self, i: int) -> int:
        got = self._inv.get(i)
        if got is not None:
            return got
        if self.perms is not None:
            p = self.perms[i]
            q = [0] * len(p)
            for a, b in enumerate(p):
                q[b] = a
            j = self._perm_to_idx[tuple(q)]
        else:
            j = next(k for k in range(len(self)) if self.mult(i, k) == self._id)
        self._inv[i] = j
        return j

    def centralizer(self, i: int) -> list[int]:
        return [g for g in range(len(self)) if self.mult(g, i) == self.mult(i, g)]

    def conjugacy_classes(self) -> list[ConjClass]:
        if self.perms is not None and self.family in ("symmetric", "sl-dual"):
            # full symmetric group: classes are exactly the cycle types
            by_type: dict[tuple[int, ...], list[int]] = {}
            for i, p in enumerate(self.perms):
                by_type.setdefault(cycle_type(p), []).append(i)
            classes = [
                ConjClass(min(v), tuple(sorted(v)), self.names[min(v)], t)
                for t, v in by_type.items()
            ]
        else:
            seen: set[int] = set()
            classes = []
            for i in range(len(self)):
                if i in seen:
                    continue
                members = {
                    self.mult(self.mult(g, i), self.inverse_of(g))
                    for g in range(len(self))
                }
                seen |= members
                rep = min(members)
                cyc = cycle_type(self.perms[rep]) if self.perms else None
                classes.append(ConjClass(rep, tuple(sorted(members)), self.names[rep], cyc))
        classes.sort(key=lambda c: c.members[0])
        return classes

    def ambient_point(self, q: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        if self.embed is None:
            return q
        return _mod1(_frac_vec(self.embed, q))


# ---------------- factories --------------------------------------------------

def inversion_on_gm() -> TorusAction:
    return TorusAction(
        rank=1,
        matrices=[[[1]], [[-1]]],
        names=["1", "inv"],
        group_label="Z/2",
        family="rank1",
    )


def trivial_on_torus(rank: int) -> TorusAction:
    return TorusAction(
        rank=rank,
        matrices=[mat_identity(rank)],
        names=["1"],
        group_label="1",
        family="trivial",
    )


def so5_weyl_on_torus() -> TorusAction:
    """The order-8 signed permutation group of a rank-2 torus, numbered
    so that class representatives come out as elements 1, 2, 3, 5, 6."""
    mats = [
        [[1, 0], [0, 1]],     # identity
        [[0, 1], [1, 0]],     # swap coordinates
        [[-1, 0], [0, 1]],    # invert first
        [[1, 0], [0, -1]],    # invert second
        [[0, 1], [-1, 0]],    # quarter turn
        [[-1, 0], [0, -1]],   # invert both (central)
        [[0, -1], [1, 0]],    # opposite quarter turn
        [[0, -1], [-1, 0]],   # swap and invert both
    ]
    names = [f"gamma{i + 1}" for i in range(8)]
    return TorusAction(rank=2, matrices=mats, names=names,
                       group_label="W(B2)", family="so5")


def _perm_name(p: tuple[int, ...]) -> str:
    return "".join(str(x + 1) for x in p) if len(p) <= 9 else \
        "-".join(str(x + 1) for x in p)


def _perm_matrix_on_exponents(p: tuple[int, ...]) -> Matrix:
    # coordinate i of the image reads coordinate p^{-1}(i) of the source
    n = len(p)
    m = [[0] * n for _ in range(n)]
    for j in range(n):
        m[p[j]][j] = 1
    return m


def symmetric_on_torus(n: int) -> TorusAction:
    """All of S_n permuting the coordinates of a rank-n torus."""
    if not 1 <= n <= 6:
        raise ExtQuotError("coordinate permutation actions are kept small")
    perms = sorted(itertools.permutations(range(n)))
    mats = [_perm_matrix_on_exponents(p) for p in perms]
    return TorusAction(
        rank=n,
        matrices=mats,
        names=[_perm_name(p) for p in perms],
        group_label=f"S{n}",
        family="symmetric",
        perms=perms,
    )


def sl_dual_torus(n: int) -> TorusAction:
    """S_n permuting the coordinates of the determinant-one subtorus of
    a rank-n torus.  The restriction to the rank n-1 sublattice happens
    here, before any normal form is taken."""
    if not 2 <= n <= 6:
        raise ExtQuotError("coordinate permutation actions are kept small")
    perms = sorted(itertools.permutations(range(n)))
    # basis v_i = e_i - e_{i+1} of the sum-zero sublattice
    basis = []
    for i in range(n - 1):
        col = [0] * n
        col[i] = 1
        col[i + 1] = -1
        basis.append(col)
    embed = [[basis[j][i] for j in range(n - 1)] for i in range(n)]

    def restrict(p: tuple[int, ...]) -> Matrix:
        amb = _perm_matrix_on_exponents(p)
        cols = []
        for j in range(n - 1):
            img = mat_vec(amb, basis[j])
            # coefficients against v_i are the partial sums
            coeffs, run = [], 0
            for i in range(n - 1):
                run += img[i]
                coeffs.append(run)
            if run + img[n - 1] != 0:
                raise ExtQuotError("sum-zero sublattice was not preserved")
            cols.append(coeffs)
        return [[cols[j][i] for j in range(n - 1)] for i in range(n - 1)]

    mats = [restrict(p) for p in perms]
    return TorusAction(
        rank=n - 1,
        matrices=mats,
        names=[_perm_name(p) for p in perms],
        group_label=f"S{n}",
        family="sl-dual",
        perms=perms,
        ambient_rank=n,
        embed=embed,
    )


# ---------------- fixed loci --------------------------------------------------

@dataclass
class FixedLocus:
    gamma: int
    rank: int
    dim: int
    invariant_factors: tuple[int, ...]
    signatures: list[tuple[int, ...]]
    components: list[tuple[Fraction, ...]]
    kernel_basis: list[list[int]]
    v: Matrix = field(repr=False, default=None)
    v_inv: Matrix = field(repr=False, default=None)
    torsion_positions: tuple[int, ...] = field(repr=False, default=())

    def component_count(self) -> int:
        return len(self.components)

    def signature_of(self, q: tuple[Fraction, ...]) -> tuple[int, ...]:
        y = _frac_vec(self.v_inv, q)
        sig = []
        for pos, f in zip(self.torsion_positions, self.invariant_factors):
            val = y[pos] * f
            if val.denominator != 1:
                raise ExtQuotError("point does not lie on the fixed locus")
            sig.append(int(val) % f)
        return tuple(sig)


def fixed_locus(action: TorusAction, gamma: int) -> FixedLocus:
    m = action.matrices[gamma]
    r = action.rank
    a = [[m[i][j] - (i == j) for j in range(r)] for i in range(r)]
    _, d, v = smith_normal_form(a)
    diag = [d[i][i] for i in range(r)]
    tors = tuple(i for i, x in enumerate(diag) if x > 1)
    zeros = [i for i, x in enumerate(diag) if x == 0]
    factors = tuple(diag[i] for i in tors)
    v_inv = mat_inverse_unimodular(v)
    signatures = [tuple(s) for s in itertools.product(*[range(f) for f in factors])]
    components = []
    for sig in signatures:
        y = [Fraction(0)] * r
        for pos, j, f in zip(tors, sig, factors):
            y[pos] = Fraction(j, f)
        components.append(_mod1(_frac_vec(v, y)))
    kernel = [[v[i][j] for i in range(r)] for j in zeros]
    return FixedLocus(
        gamma=gamma,
        rank=r,
        dim=len(zeros),
        invariant_factors=factors,
        signatures=signatures,
        components=components,
        kernel_basis=kernel,
        v=v,
        v_inv=v_inv,
        torsion_positions=tors,
    )


def brute_force_component_count(action: TorusAction, gamma: int) -> dict:
    """Count torsion solutions directly on a finite grid and compare with
    what the normal form predicts.  Only for small rank and torsion."""
    fl = fixed_locus(action, gamma)
    k = lcm(*fl.invariant_factors) if fl.invariant_factors else 1
    if k ** fl.rank > 50000 or fl.rank > 3 or k > 12:
        raise ExtQuotError("grid too large for the brute force check")
    m = action.matrices[gamma]
    count = 0
    for q in itertools.product([Fraction(j, k) for j in range(k)], repeat=fl.rank):
        img = _frac_vec(m, q)
        if all((x - y).denominator == 1 for x, y in zip(img, q)):
            count += 1
    expected = k ** fl.dim
    for f in fl.invariant_factors:
        expected *= f
    return {"order": k, "count": count, "expected": expected,
            "agrees": count == expected}


# ---------------- quotient components ----------------------------------------

def _component_orbits(action: TorusAction, fl: FixedLocus, cent: list[int]):
    """Orbits of the centralizer on the component set, with stabilizers."""
    index = {s: i for i, s in enumerate(fl.signatures)}
    perms = {}
    for g in cent:
        n = action.matrices[g]
        images = []
        for q in fl.components:
            img = _mod1(_frac_vec(n, q))
            images.append(index[fl.signature_of(img)])
        perms[g] = images
    unseen = set(range(len(fl.components)))
    orbits = []
    while unseen:
        start = min(unseen)
        orbit = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for g in cent:
                y = perms[g][x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        unseen -= orbit
        stab = [g for g in cent if perms[g][start] == start]
        orbits.append((sorted(orbit), start, stab))
    return orbits


def _line_descriptor(action: TorusAction, fl: FixedLocus, stab: list[int]) -> Descriptor:
    k = tuple(fl.kernel_basis[0])
    neg = tuple(-x for x in k)
    inverted = False
    for g in stab:
        w = tuple(mat_vec(action.matrices[g], k))
        if w == neg:
            inverted = True
        elif w != k:
            raise ExtQuotError("stabilizer does not normalize the kernel line")
    return LineModInversion() if inverted else FreeLine()


def full_torus_descriptor(action: TorusAction) -> Descriptor:
    """What the whole torus looks like after dividing by the whole group."""
    r = action.rank
    if r == 0:
        return Point()
    if r == 1:
        if any(m[0][0] == -1 for m in action.matrices):
            return LineModInversion()
        return FreeLine()
    if len(action) == 1:
        return TorusModGroup(r, "1")
    return TorusModGroup(r, action.group_label)


def _sym_parts(cyc: tuple[int, ...]) -> tuple[int, ...]:
    # multiplicities of the distinct cycle lengths, largest length first
    parts = []
    for val in sorted(set(cyc), reverse=True):
        parts.append(sum(1 for c in cyc if c == val))
    return tuple(parts)


def extended_quotient(action: TorusAction) -> list[ExtQuotComponent]:
    """One component record per centralizer orbit on each fixed locus,
    over one representative per conjugacy class."""
    out = []
    for cls in action.conjugacy_classes():
        fl = fixed_locus(action, cls.rep)
        if action.family == "symmetric":
            # coordinate permutations: the quotient of each fixed locus
            # is a product of symmetric powers, one per distinct cycle
            # length; the locus itself is connected
            if fl.component_count() != 1 or fl.dim != len(cls.cycle):
                raise ExtQuotError("permutation fixed locus looks wrong")
            out.append(ExtQuotComponent(cls.name, fl.dim,
                                        SymProduct(_sym_parts(cls.cycle)),
                                        cls.cycle))
            continue
        if cls.rep == action.identity_index():
            out.append(ExtQuotComponent(cls.name, action.rank,
                                        full_torus_descriptor(action),
                                        cls.cycle))
            continue
        cent = action.centralizer(cls.rep)
        for _, rep_idx, stab in _component_orbits(action, fl, cent):
            if fl.dim == 0:
                descr: Descriptor = Point()
            elif fl.dim == 1:
                descr = _line_descriptor(action, fl, stab)
            else:
                # exact class tracking stops at curves; higher pieces
                # stay symbolic and are compared by dimension only
                descr = TorusModGroup(fl.dim, "symbolic")
            out.append(ExtQuotComponent(cls.name, fl.dim, descr, cls.cycle))
    out.sort(key=lambda c: (c.class_tag, descriptor_sort_key(c.descriptor)))
    return out


def torsion_orbit_census(action: TorusAction, gamma: int) -> list[dict]:
    """Centralizer orbits on a zero-dimensional fixed locus, as explicit
    points with exact coordinates."""
    fl = fixed_locus(action, gamma)
    if fl.dim != 0:
        raise ExtQuotError("fixed locus is positive dimensional")
    cent = action.centralizer(gamma)
    orbits = []
    for members, _, _ in _component_orbits(action, fl, cent):
        pts = sorted(fl.components[i] for i in members)
        orbits.append({
            "size": len(pts),
            "points": pts,
            "ambient": [action.ambient_point(p) for p in pts],
        })
    orbits.sort(key=lambda o: o["points"][0])
    return orbits
