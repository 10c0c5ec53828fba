"""Resolutions, Ext, depth, dimension and Hilbert series.

Free resolutions are built by iterated syzygy computations.  Because every
stage's columns are thinned to a minimal generating set first, the boundary
matrices automatically have all entries in the maximal ideal, i.e. the
resolutions are minimal; Betti numbers can be read off the ranks.

Two depth computations are provided on purpose: one through Ext against the
residue field, one through Koszul homology.  They share no code beyond the
Groebner engine, so their agreement is a meaningful runtime cross-check.
"""

from __future__ import annotations

import itertools
import random
from typing import NamedTuple

from .polyring import (
    Polynomial,
    intpoly_add,
    intpoly_shift,
    intpoly_sub,
    mono_divides,
)
from .groebner import GradedRing
from .fpmod import (
    FPModule,
    ModuleHom,
    RingMatrix,
    annihilator,
    cokernel,
    free_module,
    homology_at,
    homology_is_zero,
    is_injective,
    is_isomorphic,
    kernel,
    power_with_twists,
    quotient_by_element,
    residue_field_module,
    is_nzd_on,
    syzygies,
    zero_hom,
)
from .groebner import ideal_dimension

__all__ = [
    "TruncationError",
    "Resolution",
    "free_resolution",
    "k_resolution",
    "projective_dimension",
    "ChainComplex",
    "resolution_complex",
    "complex_quotient",
    "ext_module",
    "ext_modules",
    "ext_is_zero",
    "ext_dim_k",
    "depth",
    "depth_koszul",
    "DepthResult",
    "depth_with_witness",
    "koszul_boundary",
    "module_dimension",
    "regular_sequence_search",
    "base_change_matrix",
    "base_change_module",
    "hilbert_numerator_module",
    "hilbert_series",
    "hilbert_coefficients",
    "monomial_quotient_numerator",
]


class TruncationError(RuntimeError):
    """A computation hit its configured resource bound before reaching a
    certified answer.  Callers must treat this as 'unknown', never as a
    verified result."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


# ---------------------------------------------------------------------------
# Free resolutions.

def _syzygy_matrix(R: GradedRing, mat: RingMatrix):
    """Minimal generators of the syzygies of mat's columns, as the next
    boundary matrix; None when there are none."""
    out = syzygies(mat)
    return out if out.ncols else None


class Resolution:
    """A minimal graded free resolution, extended lazily.

    maps[i] is the boundary F_{i+1} -> F_i; F_0 covers the minimal
    presentation of the module.  complete means the next syzygy module
    vanished, so the projective dimension equals len(maps)."""

    __slots__ = ("module", "minimal_module", "f0", "maps", "complete")

    def __init__(self, module: FPModule):
        self.module = module
        self.minimal_module = module.minimal()[0]
        self.f0 = self.minimal_module.gen_degrees
        rel = self.minimal_module.relations
        if rel.ncols == 0:
            self.maps = []
            self.complete = True
        else:
            self.maps = [rel]
            self.complete = False

    @property
    def ring(self) -> GradedRing:
        return self.module.ring

    def ensure(self, length: int):
        """Extend until len(maps) >= length or the resolution terminates."""
        while not self.complete and len(self.maps) < length:
            nxt = _syzygy_matrix(self.ring, self.maps[-1])
            if nxt is None:
                self.complete = True
            else:
                self.maps.append(nxt)
        return self

    def degrees(self, i: int):
        """Generator degrees of F_i; requires ensure(i) to have run."""
        if i == 0:
            return self.f0
        if i <= len(self.maps):
            return self.maps[i - 1].col_degrees
        if self.complete:
            return ()
        raise ValueError(f"resolution not extended to stage {i}")

    def betti(self, i: int) -> int:
        return len(self.degrees(i))

    def known_length(self) -> int:
        return len(self.maps)

    def is_minimal(self) -> bool:
        return all(m.entries_in_maximal_ideal() for m in self.maps)


def free_resolution(M: FPModule, length: int) -> Resolution:
    """The cached minimal free resolution of M, extended to the requested
    length (or to its finite end)."""
    if M._resolution is None:
        M._resolution = Resolution(M)
    return M._resolution.ensure(length)


def k_resolution(R: GradedRing, length: int) -> Resolution:
    """The cached resolution of the residue field, shared per ring."""
    if R._kres is None:
        R._kres = Resolution(residue_field_module(R))
    return R._kres.ensure(length)


def projective_dimension(M: FPModule, bound: int) -> int:
    """Exact projective dimension, certified by a terminating minimal
    resolution; raises TruncationError if it runs past the bound."""
    res = free_resolution(M, bound + 1)
    if res.complete:
        return len(res.maps)
    raise TruncationError(
        f"projective dimension exceeds the resource bound {bound}",
        bound=bound)


# ---------------------------------------------------------------------------
# Chain complexes.

class ChainComplex:
    """modules[0..L] with boundaries maps[i]: modules[i] -> modules[i-1]."""

    def __init__(self, modules, maps, check: bool = True):
        self.modules = list(modules)
        self.maps = list(maps)
        if len(self.maps) != max(len(self.modules) - 1, 0):
            raise ValueError("one boundary map per adjacent pair required")
        for i, d in enumerate(self.maps, start=1):
            if d.source != self.modules[i] or d.target != self.modules[i - 1]:
                raise ValueError(f"boundary {i} does not match its modules")
        if check:
            for i in range(1, len(self.maps)):
                comp = self.maps[i - 1].compose(self.maps[i])
                if not comp.is_zero_hom():
                    raise ValueError(f"d_{i} . d_{i + 1} is not zero")

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def boundary(self, i: int) -> ModuleHom:
        return self.maps[i - 1]

    def homology(self, i: int) -> FPModule:
        L = self.length
        if i < 0 or i > L:
            return FPModule(self.modules[0].ring, ())
        if i == 0:
            if L == 0:
                return self.modules[0]
            return cokernel(self.maps[0])
        if i == L:
            return kernel(self.maps[L - 1])[0]
        return homology_at(self.maps[i], self.maps[i - 1])

    def is_exact_at(self, i: int) -> bool:
        L = self.length
        if i <= 0 or i > L:
            raise ValueError("interior exactness only")
        if i == L:
            return is_injective(self.maps[L - 1])
        return homology_is_zero(self.maps[i], self.maps[i - 1])

    def to_dict(self) -> dict:
        return {
            "lengths": [m.ngens for m in self.modules],
            "degrees": [list(m.gen_degrees) for m in self.modules],
            "maps": [d.matrix.to_rows_str() for d in self.maps],
        }


def resolution_complex(res: Resolution, length: int) -> ChainComplex:
    """The free complex F_length -> ... -> F_0 underlying a resolution."""
    res.ensure(length)
    R = res.ring
    top = min(length, len(res.maps))
    mods = [free_module(R, res.degrees(i)) for i in range(top + 1)]
    maps = [ModuleHom(mods[i], mods[i - 1], res.maps[i - 1])
            for i in range(1, top + 1)]
    return ChainComplex(mods, maps, check=False)


# ---------------------------------------------------------------------------
# Ext.

def _hom_into(N: FPModule, dmat: RingMatrix) -> ModuleHom:
    """Hom(d, N) for a boundary d between free modules: the block matrix
    whose (column j, row r) block is multiplication by d[r][j]."""
    R = N.ring
    amb = R.ambient
    p_prev = power_with_twists(N, dmat.row_degrees)
    p_next = power_with_twists(N, dmat.col_degrees)
    nN = N.ngens
    z = amb.zero()
    rows = []
    for j in range(dmat.ncols):
        for a in range(nN):
            row = []
            for r in range(dmat.nrows):
                f = dmat.entries[r][j]
                for b in range(nN):
                    row.append(f if a == b else z)
            rows.append(row)
    mat = RingMatrix(R, rows, p_next.gen_degrees, p_prev.gen_degrees)
    return ModuleHom(p_prev, p_next, mat)


def _ext_boundaries(res: Resolution, N: FPModule, i: int):
    """(T_i, T_{i+1}) around stage i of Hom(F_*, N); either may be None when
    the corresponding free module vanishes."""
    res.ensure(i + 1)
    R = res.ring
    if res.betti(i) == 0 or N.ngens == 0:
        return None, None
    p_i = power_with_twists(N, res.degrees(i))
    if i + 1 <= len(res.maps):
        t_next = _hom_into(N, res.maps[i])
    else:
        t_next = zero_hom(p_i, FPModule(R, ()))
    if i == 0:
        return None, t_next
    t_in = _hom_into(N, res.maps[i - 1])
    return t_in, t_next


def ext_module(M: FPModule, N: FPModule, i: int) -> FPModule:
    """Ext^i(M, N) as a presented module, via Hom of the minimal resolution
    of M into N."""
    if i < 0:
        raise ValueError("negative Ext index")
    res = free_resolution(M, i + 1)
    t_in, t_next = _ext_boundaries(res, N, i)
    if t_next is None:
        return FPModule(M.ring, ())
    if t_in is None:
        return kernel(t_next)[0]
    return homology_at(t_in, t_next)


def ext_is_zero(M: FPModule, N: FPModule, i: int) -> bool:
    """Vanishing of Ext^i(M, N), by membership checks only."""
    res = free_resolution(M, i + 1)
    t_in, t_next = _ext_boundaries(res, N, i)
    if t_next is None:
        return True
    if t_in is None:
        return is_injective(t_next)
    return homology_is_zero(t_in, t_next)


def ext_dim_k(M: FPModule, i: int) -> int:
    """dim_k Ext^i(M, k).  The maximal ideal kills this module, so the
    dimension is its number of minimal generators."""
    E = ext_module(M, residue_field_module(M.ring), i)
    return E.minimal()[0].ngens


# ---------------------------------------------------------------------------
# Depth, two ways.

def depth(M: FPModule) -> int:
    """depth M = min { i : Ext^i(k, M) != 0 }."""
    if M.is_zero_module():
        raise ValueError("the zero module has no depth")
    R = M.ring
    n = R.ambient.nvars
    kres = k_resolution(R, 1)
    for i in range(n + 1):
        kres.ensure(i + 1)
        t_in, t_next = _ext_boundaries(kres, M, i)
        if t_next is None:
            continue
        if t_in is None:
            if not is_injective(t_next):
                return i
        elif not homology_is_zero(t_in, t_next):
            return i
    raise RuntimeError("Ext(k, M) vanished through the variable count")


def koszul_boundary(M: FPModule, i: int) -> ModuleHom:
    """Boundary K_i(x; M) -> K_{i-1}(x; M) of the Koszul complex on the
    variables, with the usual alternating signs."""
    R = M.ring
    amb = R.ambient
    n = amb.nvars
    subsets = list(itertools.combinations(range(n), i))
    prev = list(itertools.combinations(range(n), i - 1))
    prev_index = {s: t for t, s in enumerate(prev)}
    wsum = lambda s: sum(amb.weights[j] for j in s)
    src = power_with_twists(M, [-wsum(s) for s in subsets])
    tgt = power_with_twists(M, [-wsum(s) for s in prev])
    nM = M.ngens
    z = amb.zero()
    rows = [[z] * (len(subsets) * nM) for _ in range(len(prev) * nM)]
    for col_block, s in enumerate(subsets):
        for pos, j in enumerate(s):
            rest = s[:pos] + s[pos + 1:]
            row_block = prev_index[rest]
            f = amb.variable(j) if pos % 2 == 0 else -amb.variable(j)
            for a in range(nM):
                rows[row_block * nM + a][col_block * nM + a] = f
    mat = RingMatrix(R, rows, tgt.gen_degrees, src.gen_degrees)
    return ModuleHom(src, tgt, mat)


def depth_koszul(M: FPModule) -> int:
    """depth M = nvars - top nonvanishing Koszul homology degree.  Fully
    independent of the Ext route above."""
    if M.is_zero_module():
        raise ValueError("the zero module has no depth")
    n = M.ring.ambient.nvars
    if n == 0:
        return 0
    boundaries = {}

    def bd(i):
        if i not in boundaries:
            boundaries[i] = koszul_boundary(M, i)
        return boundaries[i]

    for i in range(n, 0, -1):
        if i == n:
            nonzero = not is_injective(bd(n))
        else:
            nonzero = not homology_is_zero(bd(i + 1), bd(i))
        if nonzero:
            return n - i
    return n  # only H_0 = M/mM survives


# ---------------------------------------------------------------------------
# Dimension and regular sequences.

def module_dimension(M: FPModule) -> int:
    """Krull dimension of the support, read from the annihilator; -1 for the
    zero module."""
    return ideal_dimension(annihilator(M))


def regular_sequence_search(M: FPModule, degree_bound: int = 4,
                            seed: int = 0, random_tries: int = 64):
    """Greedy maximal M-regular sequence of homogeneous elements.

    Candidates are scanned in a fixed order: all standard monomials of each
    degree 1..degree_bound, then seeded random combinations within the degree,
    so runs are reproducible.  Returns (sequence, final quotient)."""
    R = M.ring
    rng = random.Random(seed)
    seq = []
    current = M
    while not current.is_zero_module():
        found = None
        for d in range(1, degree_bound + 1):
            monos = R.std_monomials(d)
            for e in monos:
                f = R.ambient.monomial(e)
                if is_nzd_on(current, f):
                    found = f
                    break
            if found is None and len(monos) > 1:
                for _ in range(random_tries):
                    f = R.ambient.zero()
                    for e in monos:
                        c = rng.randrange(R.field.p)
                        if c:
                            f = f + R.ambient.monomial(e, c)
                    if not f.is_zero and is_nzd_on(current, f):
                        found = f
                        break
            if found is not None:
                break
        if found is None:
            break
        seq.append(found)
        current = quotient_by_element(current, found)
    return seq, current


# ---------------------------------------------------------------------------
# Base change along a quotient of the same ambient ring.

def base_change_matrix(mat: RingMatrix, R2: GradedRing) -> RingMatrix:
    if R2.ambient != mat.ring.ambient:
        raise ValueError("base change must keep the ambient ring")
    return RingMatrix(R2, mat.entries, mat.row_degrees, mat.col_degrees)


def base_change_module(M: FPModule, R2: GradedRing) -> FPModule:
    """M tensored down to a further quotient: same presentation, new ring."""
    return FPModule(R2, M.gen_degrees, base_change_matrix(M.relations, R2))


# ---------------------------------------------------------------------------
# Hilbert series.  The graded pieces of a presented module are counted by the
# standard monomials of its initial module, one monomial ideal per row.

def _minimalize_monomials(mons):
    out = []
    for m in sorted(mons, key=sum):
        if not any(mono_divides(q, m) for q in out):
            out.append(m)
    return out


def monomial_quotient_numerator(mons, weights) -> dict:
    """Hilbert numerator of S/(monomial ideal), over the shared denominator
    prod (1 - t^w).  Recursion: splitting off one generator m gives
    N(J + m) = N(J) - t^|m| N(J : m)."""
    mons = _minimalize_monomials(mons)
    if not mons:
        return {0: 1}
    piv = mons[-1]
    rest = mons[:-1]
    colon = [tuple(max(a - b, 0) for a, b in zip(m, piv)) for m in rest]
    d = sum(w * e for w, e in zip(weights, piv))
    return intpoly_sub(
        monomial_quotient_numerator(rest, weights),
        intpoly_shift(monomial_quotient_numerator(colon, weights), d))


def hilbert_numerator_module(M: FPModule) -> dict:
    """Numerator of the Hilbert series of M over prod (1 - t^{w_i})."""
    weights = M.ring.ambient.weights
    by_row = M.relgb.lead_exps_by_row()
    out: dict = {}
    for i, g in enumerate(M.gen_degrees):
        piece = monomial_quotient_numerator(by_row.get(i, []), weights)
        out = intpoly_add(out, intpoly_shift(piece, g))
    return out


def hilbert_coefficients(numer: dict, weights, lo: int, hi: int):
    """Coefficients of numer / prod (1 - t^w) in degrees lo..hi inclusive."""
    if hi < lo:
        return []
    start = min([lo] + list(numer)) if numer else lo
    size = hi - start + 1
    arr = [0] * size
    for d, c in numer.items():
        if d <= hi:
            arr[d - start] += c
    for w in weights:
        for idx in range(w, size):
            arr[idx] += arr[idx - w]
    return arr[lo - start:]


def hilbert_series(M: FPModule):
    """(numerator, weights): the Hilbert series of M written as an integer
    polynomial over prod_i (1 - t^{w_i})."""
    return hilbert_numerator_module(M), M.ring.ambient.weights


# ---------------------------------------------------------------------------
# Convenience wrappers used by the verification layer.

def ext_modules(M: FPModule, N: FPModule, i_max: int):
    """Ext^0(M,N) .. Ext^{i_max}(M,N), sharing one cached resolution of M."""
    if i_max < 0:
        raise ValueError("negative Ext range")
    return [ext_module(M, N, i) for i in range(i_max + 1)]


class DepthResult(NamedTuple):
    value: int
    witness: list
    method: str


def depth_with_witness(M: FPModule, degree_bound: int = 4, seed: int = 0,
                       method: str = "ext_k") -> DepthResult:
    """Depth plus a maximal regular sequence realizing it.

    The value comes from the chosen method (Ext against the residue field, or
    the Koszul complex); the witness from the seeded greedy search.  A
    witness shorter than the depth means the search's degree bound was too
    small, which is an error here, never a silent downgrade."""
    value = depth(M) if method == "ext_k" else depth_koszul(M)
    seq, _ = regular_sequence_search(M, degree_bound=degree_bound, seed=seed)
    if len(seq) != value:
        raise TruncationError(
            f"regular sequence search found length {len(seq)} but depth is "
            f"{value}; raise the degree bound ({degree_bound})",
            bound=degree_bound)
    return DepthResult(value, seq, method)


def complex_quotient(K: ChainComplex, x: Polynomial) -> ChainComplex:
    """K/xK over R/(x), for x a nonzerodivisor on every chain module and on
    H_0(K).

    The quotient is verified to keep its homology concentrated in degree 0,
    with H_0(K/xK) isomorphic to H_0(K)/xH_0(K); either failure raises."""
    R = K.modules[0].ring
    x = R.nf(x)
    if x.is_zero or not x.is_homogeneous() or x.wdeg() == 0:
        raise ValueError("quotient element must be homogeneous of positive "
                         "degree")
    for i, m in enumerate(K.modules):
        if not is_nzd_on(m, x):
            raise ValueError(f"element is a zerodivisor on chain module {i}")
    H0 = K.homology(0)
    if not is_nzd_on(H0, x):
        raise ValueError("element is a zerodivisor on the degree-0 homology")
    R2 = R.quotient_by(x)
    mods = [base_change_module(m, R2) for m in K.modules]
    maps = [ModuleHom(mods[i], mods[i - 1],
                      base_change_matrix(K.maps[i - 1].matrix, R2),
                      K.maps[i - 1].shift)
            for i in range(1, len(mods))]
    Kq = ChainComplex(mods, maps)
    for i in range(1, Kq.length + 1):
        if not Kq.is_exact_at(i):
            raise RuntimeError(
                f"homology of the quotient complex survives in degree {i}")
    want = base_change_module(quotient_by_element(H0, x), R2)
    ok, _ = is_isomorphic(Kq.homology(0), want)
    if not ok:
        raise RuntimeError("degree-0 homology of the quotient complex does "
                           "not match H0/xH0")
    return Kq
