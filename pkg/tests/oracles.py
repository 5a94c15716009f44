"""Independent reference computations used by the tests.

Nothing here imports the package's linear algebra: polynomials are expanded
with sympy and ranks come from a plain Fraction Gauss-Jordan.
"""

from fractions import Fraction
from itertools import combinations_with_replacement

import sympy


def frac_rank(rows):
    mat = [[Fraction(v) for v in r] for r in rows]
    if not mat:
        return 0
    rank = 0
    ncols = len(mat[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank][c]
        mat[rank] = [v / p for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def frac_rank_mod(rows, p):
    mat = [[int(v) % p for v in r] for r in rows]
    if not mat:
        return 0
    rank = 0
    for c in range(len(mat[0])):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        mat[rank] = [v * inv % p for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def monomials(syms, t):
    return [sympy.Mul(*c) for c in combinations_with_replacement(syms, t)] if t > 0 else [sympy.Integer(1)]


def symbols(names):
    return sympy.symbols(" ".join(names) + ("," if len(names) == 1 else ""))


def piece_rows(gens, syms, t):
    """Coefficient rows of all ``m * g`` of degree ``t``."""
    mons = monomials(syms, t)
    index = {m: k for k, m in enumerate(mons)}
    rows = []
    for g in gens:
        deg = sympy.Poly(g, *syms).total_degree()
        if deg > t:
            continue
        for m in monomials(syms, t - deg):
            row = [Fraction(0)] * len(mons)
            for mono, coeff in sympy.Poly(sympy.expand(m * g), *syms).terms():
                key = sympy.Mul(*[s**e for s, e in zip(syms, mono)])
                row[index[key]] = Fraction(int(coeff.p), int(coeff.q))
            rows.append(row)
    return rows, len(mons)


def piece_dim(gens, syms, t, p=0):
    rows, _ = piece_rows(gens, syms, t)
    return frac_rank_mod(rows, p) if p else frac_rank(rows)


def hilbert_function(gens, names, tmax=12, p=0):
    syms = symbols(names)
    out = []
    for t in range(tmax + 1):
        n = len(monomials(syms, t))
        out.append(n - piece_dim(gens, syms, t, p))
        if out[-1] == 0:
            break
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def monomial_hilbert_function(exponents, d, tmax):
    """Count standard monomials of a monomial ideal given by exponent tuples."""
    out = []
    for t in range(tmax + 1):
        count = 0
        for c in combinations_with_replacement(range(d), t):
            e = [c.count(i) for i in range(d)]
            if not any(all(e[i] >= g[i] for i in range(d)) for g in exponents):
                count += 1
        out.append(count)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def socle_dims(gens, names, tmax=8):
    """``dim ((I : m) / I)_t`` from sympy nullspaces."""
    syms = symbols(names)
    out = {}
    hf = hilbert_function(gens, names, tmax)
    for t in range(len(hf)):
        mons_t = monomials(syms, t)
        nxt_rows, n_next = piece_rows(gens, syms, t + 1)
        nxt = sympy.Matrix(nxt_rows) if nxt_rows else sympy.zeros(0, n_next)
        rank_next = nxt.rank() if nxt_rows else 0
        idx_next = {m: k for k, m in enumerate(monomials(syms, t + 1))}
        # v in R_t lies in (I : m) iff x_i v adds nothing to the rank of I_{t+1}
        cols = []
        for m in mons_t:
            col = []
            for s in syms:
                vec = [0] * n_next
                vec[idx_next[sympy.expand(s * m)]] = 1
                col.append(vec)
            cols.append(col)
        # left null space of I_{t+1}: functionals vanishing on I_{t+1}
        funcs = nxt.nullspace() if nxt_rows else [sympy.eye(n_next)[:, k] for k in range(n_next)]
        if rank_next == n_next:
            colon_dim = len(mons_t)
        else:
            mat = []
            for f in funcs:
                for si in range(len(syms)):
                    mat.append([sum(f[k] * cols[j][si][k] for k in range(n_next)) for j in range(len(mons_t))])
            colon_dim = len(mons_t) - sympy.Matrix(mat).rank()
        out[t] = colon_dim - (len(mons_t) - hf[t])
    return {t: k for t, k in out.items() if k}


def sympify_all(texts, names):
    syms = symbols(names)
    local = {n: s for n, s in zip(names, syms)}
    return [sympy.sympify(t.replace("^", "**"), locals=local) for t in texts], syms


def bilinear_oracle(gens, names):
    """Solve ``x_i x_j - b h in I_2`` with sympy; ``h`` is the first monomial outside I_2."""
    syms = symbols(names)
    rows, _ = piece_rows(gens, syms, 2)
    mons = monomials(syms, 2)
    base = frac_rank(rows)

    def vec(m):
        return [Fraction(int(k == mons.index(m))) for k in range(len(mons))]

    h = next(m for m in mons if frac_rank(rows + [vec(m)]) > base)
    d = len(syms)
    out = [[None] * d for _ in range(d)]
    cs = sympy.symbols(f"c0:{len(rows)}")
    b = sympy.Symbol("b")
    for i in range(d):
        for j in range(d):
            m = sympy.expand(syms[i] * syms[j])
            target = vec(m)
            hv = vec(h)
            eqs = [sum(cs[k] * rows[k][col] for k in range(len(rows))) + b * hv[col] - target[col] for col in range(len(mons))]
            sol = sympy.linsolve(eqs, [*cs, b])
            (point,) = sol
            out[i][j] = Fraction(str(point[-1]))
    return h, out


def inertia(matrix):
    """(positive, negative) eigenvalue counts of a symmetric matrix, in floating point."""
    import numpy as np

    ev = np.linalg.eigvalsh(np.array([[float(v) for v in r] for r in matrix]))
    return int((ev > 1e-9).sum()), int((ev < -1e-9).sum())
