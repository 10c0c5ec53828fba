"""Seeded random constructions for the property tests.

Everything takes an explicit random.Random so a failing case can be
replayed from its seed alone.
"""

from semidual.fpmod import FPModule, RingMatrix
from semidual.linalg import matrix_rank


def random_homogeneous(R, d, rng, allow_zero=False):
    """A random degree-d element as a combination of the standard
    monomials of R; None when the degree-d piece is empty."""
    monos = R.std_monomials(d)
    if not monos:
        return None
    amb = R.ambient
    while True:
        f = amb.zero()
        for e in monos:
            c = rng.randrange(R.field.p)
            if c:
                f = f + amb.monomial(e, c)
        if allow_zero or not f.is_zero:
            return f


def random_element(R, rng, max_degree=3):
    """A nonzero homogeneous element of some degree in 1..max_degree."""
    degrees = [d for d in range(1, max_degree + 1) if R.std_monomials(d)]
    d = rng.choice(degrees)
    return random_homogeneous(R, d, rng)


def shift_spread(R):
    """Degree shifts that admit nonzero homogeneous entries: small ones
    on standard gradings, the variable weights otherwise."""
    if all(w == 1 for w in R.ambient.weights):
        return [0, 1, 2]
    return sorted({0, *R.ambient.weights})


def random_module(R, rng, max_gens=2, max_rels=3, degree_cap=3):
    """A nonzero module with a couple of generators and random
    homogeneous relations."""
    spread = shift_spread(R)
    while True:
        ngens = rng.randint(1, max_gens)
        gdegs = tuple(rng.choice(spread[:2]) for _ in range(ngens))
        cols = []
        cdegs = []
        for _ in range(rng.randint(0, max_rels)):
            shift = rng.choice([s for s in spread if s > 0])
            cdeg = max(gdegs) + shift
            col = []
            for gd in gdegs:
                f = None
                if cdeg - gd > 0 and rng.random() < 0.8:
                    f = random_homogeneous(R, cdeg - gd, rng,
                                           allow_zero=True)
                col.append(f if f is not None else R.ambient.zero())
            if any(not f.is_zero for f in col):
                cols.append(tuple(col))
                cdegs.append(cdeg)
        if cols:
            rel = RingMatrix.from_columns(R, cols, gdegs, cdegs)
            M = FPModule(R, gdegs, rel)
        else:
            M = FPModule(R, gdegs)
        if not M.is_zero_module():
            return M


def random_surjection(R, rng, max_rows=3, max_cols=4):
    """A random matrix whose scalar part has full row rank, so the map
    it defines on any power of a module is a split surjection.

    The first q columns carry an invertible random scalar block, so the
    rows share one degree; the rest mix scalars and higher-degree
    homogeneous entries."""
    p = R.field.p
    q = rng.randint(1, max_rows)
    n = rng.randint(q, max_cols)
    spread = shift_spread(R)
    rdegs = (rng.choice(spread[:2]),) * q
    while True:
        block = [[rng.randrange(p) for _ in range(q)] for _ in range(q)]
        if matrix_rank([row[:] for row in block], p) == q:
            break
    cdegs = list(rdegs)
    amb = R.ambient
    cols = [tuple(amb.constant(block[i][j]) for i in range(q))
            for j in range(q)]
    for _ in range(n - q):
        shift = rng.choice(spread)
        cdeg = max(rdegs) + shift
        col = []
        for rd in rdegs:
            d = cdeg - rd
            f = None
            if d == 0:
                f = amb.constant(rng.randrange(p))
            elif d > 0 and rng.random() < 0.8:
                f = random_homogeneous(R, d, rng, allow_zero=True)
            col.append(f if f is not None else amb.zero())
        cols.append(tuple(col))
        cdegs.append(cdeg)
    return RingMatrix.from_columns(R, cols, rdegs, cdegs)
