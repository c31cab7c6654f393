"""Extended affine Weyl groups for a small fixed catalog of reductive groups.

An element is stored in normal form as a pair (translation, finite part):
``t_lambda * u`` with ``lambda`` an integer vector in the cocharacter
lattice and ``u`` in the finite Weyl group.  Multiplication is the
semidirect rule ``(t_lam u)(t_mu w) = t_{lam + u.mu} (u w)``.

Length comes from the standard alcove-walk count: for each positive root
``alpha``,

    contribution = |<lam, alpha>|      if u^-1(alpha) > 0
                   |<lam, alpha> - 1|  if u^-1(alpha) < 0

which the tests cross-validate against breadth-first search in the Cayley
graph.  Elements of length zero form the subgroup Omega; for each family
the Omega coset of an element is read off from its translation part, and
a stored length-zero representative realizes each coset.

Supported families:

* ``InfiniteDihedral``      rank-1 affine Weyl group of SL(2), trivial Omega
* ``ExtendedAffineA(n)``    GL(n): full lattice Z^n, Omega infinite cyclic
* ``ExtendedAffineA'(n)``   PGL(n): lattice Z^n mod (1,..,1), Omega = Z/n
* ``ExtendedAffineB2``      SO(5): lattice Z^2, Omega = Z/2
* ``FiniteA(n)``, ``FiniteB2``  finite Weyl groups, no translations

Ball enumeration requires finite Omega and therefore refuses GL(n); every
scenario that touches GL(n) works on the dual/combinatorial side instead.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


class CoxeterError(ValueError):
    pass


class MismatchedPresentations(CoxeterError):
    pass


class UnsupportedFamily(CoxeterError):
    pass


# ---------------------------------------------------------------- matrices
def mat_identity(r: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    # inner dimension comes from b; a need not be square
    r = len(b)
    cols = range(len(b[0]))
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(r)) for j in cols) for i in range(len(a))
    )


def mat_vec(m: Matrix, v: Vector) -> Vector:
    return tuple(sum(m[i][k] * v[k] for k in range(len(v))) for i in range(len(m)))


def vec_mat(v: Vector, m: Matrix) -> Vector:
    return tuple(sum(v[k] * m[k][j] for k in range(len(v))) for j in range(len(m[0])))


def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def dot(a: Vector, b: Vector) -> int:
    return sum(x * y for x, y in zip(a, b))


def close_group(generators: Sequence[Matrix], rank: int, limit: int = 100000):
    """BFS closure of a finite matrix group; returns (elements, index)."""
    ident = mat_identity(rank)
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in generators:
                p = mat_mul(m, g)
                if p not in index:
                    index[p] = len(elems)
                    elems.append(p)
                    nxt.append(p)
                    if len(elems) > limit:
                        raise CoxeterError("matrix group closure exceeded limit")
        frontier = nxt
    return elems, index


# ---------------------------------------------------------------- elements
class GroupElement:
    """Normal-form element t_lambda * u of an extended affine Weyl group."""

    __slots__ = ("pres", "trans", "fin", "_len", "_hash")

    def __init__(self, pres: "GroupPresentation", trans: Vector, fin: int):
        self.pres = pres
        self.trans = trans
        self.fin = fin
        self._len = -1
        self._hash = hash((trans, fin))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupElement)
            and self.pres is other.pres
            and self.fin == other.fin
            and self.trans == other.trans
        )

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.pres.multiply(self, other)

    def inverse(self) -> "GroupElement":
        return self.pres.inverse(self)

    @property
    def length(self) -> int:
        if self._len < 0:
            self._len = self.pres.length_of(self.trans, self.fin)
        return self._len

    def is_identity(self) -> bool:
        return self.fin == 0 and not any(self.trans)

    def key(self) -> tuple:
        return (self.length, self.trans, self.fin)

    def key_str(self) -> str:
        return ",".join(map(str, self.trans)) + ";" + str(self.fin)

    def omega_index(self) -> int:
        return self.pres.omega_index(self)

    def omega_part(self) -> "GroupElement":
        return self.pres.omega_rep(self.omega_index())

    def wprime_part(self) -> "GroupElement":
        """The w' of the unique factorization x = w' * omega."""
        return self * self.omega_part().inverse()

    def __repr__(self) -> str:
        return f"<{self.pres.family}: t{self.trans} f{self.fin}>"


# ------------------------------------------------------------ presentation
@dataclass(eq=False)
class GroupPresentation:
    family: str
    rank: int
    wf_elems: list[Matrix]
    wf_index: dict[Matrix, int]
    pos_roots: list[Vector]
    gen_specs: list[tuple[Vector, int]]
    gen_names: list[str]
    coxeter_m: dict[tuple[int, int], int | None]
    omega_count: int | None  # None means infinite cyclic
    _coset_of: Callable[[Vector], int] = field(repr=False)
    _normalize: Callable[[Vector], Vector] = field(repr=False)
    _omega_reps: dict[int, GroupElement] = field(default_factory=dict, repr=False)
    _wf_table: list[list[int]] = field(default_factory=list, repr=False)
    _wf_inv: list[int] = field(default_factory=list, repr=False)
    _neg_roots: set[Vector] = field(default_factory=set, repr=False)

    def __post_init__(self):
        n = len(self.wf_elems)
        self._wf_table = [[0] * n for _ in range(n)]
        for i, a in enumerate(self.wf_elems):
            for j, b in enumerate(self.wf_elems):
                self._wf_table[i][j] = self.wf_index[mat_mul(a, b)]
        self._wf_inv = [0] * n
        for i in range(n):
            for j in range(n):
                if self._wf_table[i][j] == 0:
                    self._wf_inv[i] = j
                    break
        self._neg_roots = {vec_neg(a) for a in self.pos_roots}
        if set(self.pos_roots) & self._neg_roots:
            raise CoxeterError("root list is not a positive system")

    # ---- basic structure -------------------------------------------------
    @property
    def wf_order(self) -> int:
        return len(self.wf_elems)

    @property
    def num_positive_roots(self) -> int:
        return len(self.pos_roots)

    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank, 0)

    def element(self, trans: Iterable[int], fin: int) -> GroupElement:
        t = tuple(int(x) for x in trans)
        if len(t) != self.rank:
            raise CoxeterError(f"translation needs {self.rank} coordinates, got {len(t)}")
        if not 0 <= fin < len(self.wf_elems):
            raise CoxeterError(f"finite part index {fin} out of range")
        return GroupElement(self, self._normalize(t), fin)

    def generators(self) -> list[GroupElement]:
        return [GroupElement(self, t, f) for t, f in self.gen_specs]

    def generator(self, name: str) -> GroupElement:
        if name not in self.gen_names:
            raise CoxeterError(f"{self.family}: no generator named {name!r}")
        t, f = self.gen_specs[self.gen_names.index(name)]
        return GroupElement(self, t, f)

    # ---- group law -------------------------------------------------------
    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        if x.pres is not self or y.pres is not self:
            raise MismatchedPresentations("elements live in different presentations")
        trans = self._normalize(vec_add(x.trans, mat_vec(self.wf_elems[x.fin], y.trans)))
        return GroupElement(self, trans, self._wf_table[x.fin][y.fin])

    def inverse(self, x: GroupElement) -> GroupElement:
        ui = self._wf_inv[x.fin]
        trans = self._normalize(vec_neg(mat_vec(self.wf_elems[ui], x.trans)))
        return GroupElement(self, trans, ui)

    def length_of(self, trans: Vector, fin: int) -> int:
        u = self.wf_elems[fin]
        total = 0
        for alpha in self.pos_roots:
            pairing = dot(trans, alpha)
            # u^-1(alpha) as a covector is alpha composed with u
            back = vec_mat(alpha, u)
            if back in self._neg_roots:
                total += abs(pairing - 1)
            else:
                total += abs(pairing)
        return total

    # ---- Omega -----------------------------------------------------------
    def omega_index(self, x: GroupElement) -> int:
        return self._coset_of(x.trans)

    def omega_rep(self, coset: int) -> GroupElement:
        if coset in self._omega_reps:
            return self._omega_reps[coset]
        rep = self._find_omega_rep(coset)
        self._omega_reps[coset] = rep
        return rep

    def _find_omega_rep(self, coset: int) -> GroupElement:
        if self.omega_count is None:
            # infinite cyclic Omega: powers of the basic shift
            base = self._omega_reps.get(1)
            if base is None:
                base = self._search_omega_rep(1)
                self._omega_reps[1] = base
            out = self.identity()
            step = base if coset >= 0 else self.inverse(base)
            for _ in range(abs(coset)):
                out = self.multiply(out, step)
            if out.length != 0 or self.omega_index(out) != coset:
                raise CoxeterError("failed to build length-zero representative")
            return out
        return self._search_omega_rep(coset)

    def _search_omega_rep(self, coset: int) -> GroupElement:
        box = range(-2, 3)
        candidates = []
        for fin in range(len(self.wf_elems)):
            for trans in _lattice_box(box, self.rank):
                t = self._normalize(trans)
                if self._coset_of(t) != coset:
                    continue
                if self.length_of(t, fin) == 0:
                    candidates.append(GroupElement(self, t, fin))
        if not candidates:
            raise CoxeterError(f"no length-zero element found for Omega coset {coset}")
        return min(candidates, key=lambda e: (e.trans, e.fin))

    def omega_elements(self) -> list[GroupElement]:
        if self.omega_count is None:
            raise UnsupportedFamily(
                f"{self.family}: Omega is infinite, enumerate cosets explicitly"
            )
        return [self.omega_rep(c) for c in range(self.omega_count)]

    def omega_conj_generator(self, omega: GroupElement, gen_idx: int) -> int:
        """Index j with omega s_i omega^-1 = s_j; error if not a generator."""
        t, f = self.gen_specs[gen_idx]
        s = GroupElement(self, t, f)
        conj = self.multiply(self.multiply(omega, s), self.inverse(omega))
        for j, (tj, fj) in enumerate(self.gen_specs):
            if conj.trans == tj and conj.fin == fj:
                return j
        raise CoxeterError("Omega conjugation does not preserve the generator set")

    # ---- words and descents ----------------------------------------------
    def left_descents(self, x: GroupElement) -> list[int]:
        lx = x.length
        return [
            i
            for i, s in enumerate(self.generators())
            if self.multiply(s, x).length < lx
        ]

    def right_descents(self, x: GroupElement) -> list[int]:
        lx = x.length
        return [
            i
            for i, s in enumerate(self.generators())
            if self.multiply(x, s).length < lx
        ]

    def reduced_word(self, x: GroupElement) -> tuple[list[str], GroupElement]:
        """Deterministic reduced word: returns (names, omega) with
        product(names) * omega == x."""
        word: list[str] = []
        cur = x
        gens = self.generators()
        while cur.length > 0:
            for i, s in enumerate(gens):
                if self.multiply(s, cur).length < cur.length:
                    word.append(self.gen_names[i])
                    cur = self.multiply(s, cur)
                    break
            else:  # pragma: no cover
                raise CoxeterError("no descent found for positive-length element")
        return word, cur

    def word_to_element(self, names: Iterable[str]) -> GroupElement:
        out = self.identity()
        for nm in names:
            out = self.multiply(out, self.generator(nm))
        return out

    # ---- balls -------------------------------------------------------------
    def ball(self, radius: int) -> "Ball":
        if self.omega_count is None:
            raise UnsupportedFamily(
                f"{self.family}: ball enumeration needs finite Omega"
            )
        if radius < 0:
            raise CoxeterError("radius must be nonnegative")
        shells: list[list[GroupElement]] = [sorted(self.omega_elements(), key=GroupElement.key)]
        seen = {e: 0 for e in shells[0]}
        gens = self.generators()
        for k in range(1, radius + 1):
            nxt = {}
            for x in shells[k - 1]:
                for s in gens:
                    y = self.multiply(x, s)
                    if y.length == k and y not in seen:
                        seen[y] = k
                        nxt[y] = True
            shells.append(sorted(nxt, key=GroupElement.key))
        elements: list[GroupElement] = []
        for sh in shells:
            elements.extend(sh)
        return Ball(self, radius, elements)


def _lattice_box(rng, rank: int):
    if rank == 0:
        yield ()
        return
    for rest in _lattice_box(rng, rank - 1):
        for x in rng:
            yield (x,) + rest


@dataclass
class Ball:
    """All elements of length <= radius, sorted by (length, key),
    closed under inverses and multiplication by Omega."""

    pres: GroupPresentation
    radius: int
    elements: list[GroupElement]

    def __post_init__(self):
        self.index = {e: i for i, e in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: GroupElement) -> bool:
        return x in self.index

    def __iter__(self):
        return iter(self.elements)

    def dump_lines(self) -> list[str]:
        return [dump_element(e) for e in self.elements]


# ------------------------------------------------------------- text format
def dump_element(x: GroupElement) -> str:
    word, omega = x.pres.reduced_word(x)
    w = ".".join(word) if word else "e"
    return (
        f"word={w} omega=w{omega.omega_index()} len={x.length} "
        f"trans=({','.join(map(str, x.trans))}) fin=f{x.fin}"
    )


_LINE_RE = re.compile(
    r"^word=(?P<word>\S+) omega=w(?P<om>-?\d+) len=(?P<len>\d+) "
    r"trans=\((?P<trans>[^)]*)\) fin=f(?P<fin>\d+)$"
)


def parse_element(pres: GroupPresentation, line: str) -> GroupElement:
    m = _LINE_RE.match(line.strip())
    if not m:
        raise CoxeterError(f"bad element line: {line!r}")
    names = [] if m.group("word") == "e" else m.group("word").split(".")
    x = pres.word_to_element(names)
    x = pres.multiply(x, pres.omega_rep(int(m.group("om"))))
    trans = tuple(int(t) for t in m.group("trans").split(",")) if m.group("trans") else ()
    if x.trans != pres._normalize(trans) or x.fin != int(m.group("fin")) or x.length != int(m.group("len")):
        raise CoxeterError(f"inconsistent element line: {line!r}")
    return x


def element_from_key(pres: GroupPresentation, key: str) -> GroupElement:
    ts, fs = key.split(";")
    trans = tuple(int(x) for x in ts.split(",")) if ts else ()
    return pres.element(trans, int(fs))


# ---------------------------------------------------------------- catalog
def _perm_matrix(perm: Sequence[int]) -> Matrix:
    n = len(perm)
    return tuple(tuple(1 if perm[j] == i else 0 for j in range(n)) for i in range(n))


def infinite_dihedral() -> GroupPresentation:
    """Affine Weyl group of SL(2): translations by the coroot lattice Z,
    generators s1 (finite reflection) and s2 = t_1 * s1.  Omega is trivial."""
    refl = ((-1,),)
    elems, index = close_group([refl], 1)
    pres = GroupPresentation(
        family="InfiniteDihedral",
        rank=1,
        wf_elems=elems,
        wf_index=index,
        pos_roots=[(2,)],
        gen_specs=[((0,), index[refl]), ((1,), index[refl])],
        gen_names=["s1", "s2"],
        coxeter_m={(0, 1): None},
        omega_count=1,
        _coset_of=lambda t: 0,
        _normalize=lambda t: t,
    )
    return pres


def extended_affine_b2() -> GroupPresentation:
    """Extended affine Weyl group of SO(5): lattice Z^2 with the B2 Weyl
    group of signed permutations, Omega = Z/2."""
    s1 = ((0, 1), (1, 0))       # reflection in e1 - e2
    s2 = ((1, 0), (0, -1))      # reflection in e2
    s_theta = ((0, -1), (-1, 0))  # reflection in e1 + e2
    elems, index = close_group([s1, s2], 2)
    if len(elems) != 8:
        raise CoxeterError("B2 Weyl group should have order 8")
    pres = GroupPresentation(
        family="ExtendedAffineB2",
        rank=2,
        wf_elems=elems,
        wf_index=index,
        pos_roots=[(1, 0), (0, 1), (1, -1), (1, 1)],
        gen_specs=[((1, 1), index[s_theta]), ((0, 0), index[s1]), ((0, 0), index[s2])],
        gen_names=["s0", "s1", "s2"],
        coxeter_m={(0, 1): 2, (0, 2): 4, (1, 2): 4},
        omega_count=2,
        _coset_of=lambda t: (t[0] + t[1]) % 2,
        _normalize=lambda t: t,
    )
    return pres


def _sym_group_matrices(n: int):
    if n > 7:
        raise UnsupportedFamily("symmetric groups beyond S7 are not enumerated")
    gens = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(_perm_matrix(perm))
    return close_group(gens, n), gens


def _type_a_data(n: int):
    (elems, index), adj_gens = _sym_group_matrices(n)
    pos = [
        tuple(1 if k == i else (-1 if k == j else 0) for k in range(n))
        for i in range(n)
        for j in range(i + 1, n)
    ]
    theta_perm = list(range(n))
    theta_perm[0], theta_perm[-1] = theta_perm[-1], theta_perm[0]
    s_theta = _perm_matrix(theta_perm)
    theta_cov = tuple(1 if k == 0 else (-1 if k == n - 1 else 0) for k in range(n))
    return elems, index, pos, adj_gens, s_theta, theta_cov


def extended_affine_gl(n: int) -> GroupPresentation:
    """GL(n): full cocharacter lattice Z^n with S_n.  Omega is infinite
    cyclic (the basic shift), so balls are refused for this family."""
    if n < 2:
        raise UnsupportedFamily("need n >= 2")
    elems, index, pos, adj_gens, s_theta, theta_cov = _type_a_data(n)
    gen_specs = [((0,) * n, index[g]) for g in adj_gens]
    gen_specs.append((theta_cov, index[s_theta]))
    names = [f"s{i}" for i in range(1, n)] + ["s0"]
    m: dict[tuple[int, int], int | None] = {}
    for i in range(n):
        for j in range(i + 1, n):
            m[(i, j)] = 2
    if n == 2:
        m[(0, 1)] = None
    else:
        for i in range(n - 2):
            m[(i, i + 1)] = 3
        m[(0, n - 1)] = 3
        m[(n - 2, n - 1)] = 3
    pres = GroupPresentation(
        family=f"ExtendedAffineA({n})",
        rank=n,
        wf_elems=elems,
        wf_index=index,
        pos_roots=pos,
        gen_specs=gen_specs,
        gen_names=names,
        coxeter_m=m,
        omega_count=None,
        _coset_of=lambda t: sum(t),
        _normalize=lambda t: t,
    )
    # the basic shift t_{e1} * (n-cycle), length zero, coset 1
    cyc = _perm_matrix([(i + 1) % n for i in range(n)])
    shift = GroupElement(pres, tuple(1 if k == 0 else 0 for k in range(n)), index[cyc])
    if shift.length != 0:
        raise CoxeterError("GL shift should have length zero")
    pres._omega_reps[1] = shift
    return pres


def extended_affine_pgl(n: int) -> GroupPresentation:
    """PGL(n): cocharacter lattice Z^n/(1,..,1) with S_n, Omega = Z/n.
    Translation vectors are normalized so their coordinate sum lies in
    [0, n); root pairings do not see the normalization."""
    if n < 2:
        raise UnsupportedFamily("need n >= 2")
    elems, index, pos, adj_gens, s_theta, theta_cov = _type_a_data(n)

    def normalize(t: Vector) -> Vector:
        c = sum(t) // n
        if c:
            return tuple(x - c for x in t)
        return t

    gen_specs = [((0,) * n, index[g]) for g in adj_gens]
    gen_specs.append((normalize(theta_cov), index[s_theta]))
    names = [f"s{i}" for i in range(1, n)] + [f"s{n}"]
    m: dict[tuple[int, int], int | None] = {}
    for i in range(n):
        for j in range(i + 1, n):
            m[(i, j)] = 2
    if n == 2:
        m[(0, 1)] = None
    else:
        for i in range(n - 2):
            m[(i, i + 1)] = 3
        m[(0, n - 1)] = 3
        m[(n - 2, n - 1)] = 3
    pres = GroupPresentation(
        family=f"ExtendedAffineA'({n})",
        rank=n,
        wf_elems=elems,
        wf_index=index,
        pos_roots=pos,
        gen_specs=gen_specs,
        gen_names=names,
        coxeter_m=m,
        omega_count=n,
        _coset_of=lambda t: sum(t) % n,
        _normalize=normalize,
    )
    return pres


def finite_a(n: int) -> GroupPresentation:
    """Finite Weyl group of type A(n) = S_{n+1}; no affine generator."""
    N = n + 1
    elems, index, pos, adj_gens, _, _ = _type_a_data(N)
    pres = GroupPresentation(
        family=f"FiniteA({n})",
        rank=N,
        wf_elems=elems,
        wf_index=index,
        pos_roots=pos,
        gen_specs=[((0,) * N, index[g]) for g in adj_gens],
        gen_names=[f"s{i}" for i in range(1, N)],
        coxeter_m={
            (i, j): (3 if j == i + 1 else 2) for i in range(N - 1) for j in range(i + 1, N - 1)
        },
        omega_count=1,
        _coset_of=lambda t: 0,
        _normalize=lambda t: t,
    )
    return pres


def finite_b2() -> GroupPresentation:
    s1 = ((0, 1), (1, 0))
    s2 = ((1, 0), (0, -1))
    elems, index = close_group([s1, s2], 2)
    return GroupPresentation(
        family="FiniteB2",
        rank=2,
        wf_elems=elems,
        wf_index=index,
        pos_roots=[(1, 0), (0, 1), (1, -1), (1, 1)],
        gen_specs=[((0, 0), index[s1]), ((0, 0), index[s2])],
        gen_names=["s1", "s2"],
        coxeter_m={(0, 1): 4},
        omega_count=1,
        _coset_of=lambda t: 0,
        _normalize=lambda t: t,
    )


FAMILIES: dict[str, Callable[..., GroupPresentation]] = {
    "InfiniteDihedral": infinite_dihedral,
    "ExtendedAffineA": extended_affine_gl,
    "ExtendedAffineA'": extended_affine_pgl,
    "ExtendedAffineB2": extended_affine_b2,
    "FiniteA": finite_a,
    "FiniteB2": finite_b2,
}
