"""Exact conjugacy classes and complex character tables for small groups.

Tables are computed by the Dixon-Schneider method: the class-sum matrices
M_j (structure constants of the class algebra) commute and are split over
a prime field F_r with r = 1 mod exponent(G) and r > 2 sqrt(|G|); their
common eigenvectors are the central character vectors, degrees are
recovered from the second orthogonality relation plus a modular square
root, and the character values are lifted to exact cyclotomic integers
through eigenvalue-multiplicity discrete sums.  Everything downstream
(orthogonality, induced-character multiplicities, restriction norms) is
verified with exact Z[zeta_e] arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .cyclotomic import CycloNum, cyclotomic_poly
from .localring import get_ring
from .linalg import Mat, mat_mul, min_poly
from .groups import (CapExceeded, GroupTable, SubgroupHandle,
                     congruence_subgroup, unipotent_subgroup)
from .whittaker_verify import IntegralityError, NonDegenChar, predictions_supported
from .regular import TypeMatrix, type_of, iota

CHARTAB_CAP = 100_000
CLASS_SWEEP_CAP = 100_000
PRIME_SEARCH_BOUND = 10_000_000
ROOT_SCAN_BOUND = 1_000_000


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass
class ClassData:
    """Conjugacy partition of a fully tabulated group."""

    table: GroupTable
    class_of: np.ndarray  # element id -> class id
    reps: np.ndarray      # class id -> representative element id
    sizes: np.ndarray
    inverse_perm: np.ndarray  # class id -> class of inverse
    orders: np.ndarray        # element order of the class

    @property
    def k(self) -> int:
        return len(self.reps)

    def exponent(self) -> int:
        e = 1
        for o in self.orders:
            e = e * int(o) // gcd(e, int(o))
        return e

    def power_classes(self, i: int) -> list[int]:
        """Classes of rep_i^s for s = 0 .. ord-1."""
        table = self.table
        ring = table.ring
        out = [0]
        cur = np.eye(table.n, dtype=np.int64)
        x = table.elems[self.reps[i]]
        for _ in range(int(self.orders[i]) - 1):
            cur = mat_mul(ring, cur, x)
            out.append(int(self.class_of[table.id_of(cur)]))
        return out


def conjugacy_classes(table: GroupTable, cap: int = CLASS_SWEEP_CAP) -> ClassData:
    """Partition by full conjugation sweeps (one batched orbit per class)."""
    N = len(table)
    if N > cap:
        raise CapExceeded(f"|G| = {N} beyond the class-sweep cap {cap}")
    ring = table.ring
    elems = table.elems
    invs = table.inverses()
    class_of = np.full(N, -1, dtype=np.int64)
    reps = []
    sizes = []
    for i in range(N):
        if class_of[i] >= 0:
            continue
        cid = len(reps)
        orbit = mat_mul(ring, mat_mul(ring, elems, elems[i]), invs)
        ids = np.unique(table.ids_of(orbit))
        class_of[ids] = cid
        reps.append(i)
        sizes.append(len(ids))
    reps = np.array(reps, dtype=np.int64)
    sizes = np.array(sizes, dtype=np.int64)
    if sizes.sum() != N:
        raise AssertionError("class sizes do not partition the group")
    # inversion permutation and element orders per class
    inv_perm = np.array(
        [class_of[table.id_of(invs[r])] for r in reps], dtype=np.int64
    )
    orders = []
    eye = np.eye(table.n, dtype=np.int64)
    for r in reps:
        o, cur = 1, elems[r]
        while not np.array_equal(cur, eye):
            cur = mat_mul(ring, cur, elems[r])
            o += 1
        orders.append(o)
    return ClassData(table, class_of, reps, sizes, inv_perm,
                     np.array(orders, dtype=np.int64))


# ---------------------------------------------------------------------------
# arithmetic mod the Dixon prime r


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def dixon_prime(exponent: int, order: int, bound: int = PRIME_SEARCH_BOUND) -> int:
    """Smallest prime r = 1 mod exponent with r > 2 sqrt(order)."""
    floor = 2 * isqrt(order)
    r = exponent + 1
    while r <= bound:
        if r > floor and _is_prime(r):
            return r
        r += exponent
    raise CapExceeded(f"no Dixon prime below {bound} for exponent {exponent}")


def primitive_root(r: int) -> int:
    fac = []
    m = r - 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            fac.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        fac.append(m)
    for g in range(2, r):
        if all(pow(g, (r - 1) // f, r) != 1 for f in fac):
            return g
    raise AssertionError("no primitive root found")


def sqrt_mod(a: int, r: int) -> int:
    """Tonelli-Shanks square root mod an odd prime (deterministic)."""
    a %= r
    if a == 0:
        return 0
    if pow(a, (r - 1) // 2, r) != 1:
        raise ValueError("not a quadratic residue")
    if r % 4 == 3:
        return pow(a, (r + 1) // 4, r)
    q, s = r - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = next(z for z in range(2, r) if pow(z, (r - 1) // 2, r) == r - 1)
    m, c, t, x = s, pow(z, q, r), pow(a, q, r), pow(a, (q + 1) // 2, r)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % r
            i += 1
        b = pow(c, 1 << (m - i - 1), r)
        m, c = i, b * b % r
        t = t * c % r
        x = x * b % r
    return x


def rref_mod(A: np.ndarray, r: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(A, dtype=np.int64) % r
    nrows, ncols = A.shape
    piv = []
    row = 0
    for col in range(ncols):
        nz = np.flatnonzero(A[row:, col])
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            A[[row, i]] = A[[i, row]]
        A[row] = A[row] * pow(int(A[row, col]), r - 2, r) % r
        others = np.flatnonzero(A[:, col])
        others = others[others != row]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, col], A[row])) % r
        piv.append(col)
        row += 1
        if row == nrows:
            break
    return A[:row], piv


def nullspace_mod(A: np.ndarray, r: int) -> np.ndarray:
    """Row basis of the right kernel of A mod r."""
    R, piv = rref_mod(A, r)
    ncols = A.shape[1]
    free = [c for c in range(ncols) if c not in piv]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for t, fcol in enumerate(free):
        basis[t, fcol] = 1
        for j, pcol in enumerate(piv):
            basis[t, pcol] = (-int(R[j, fcol])) % r
    return basis


def charpoly_mod(A: np.ndarray, r: int) -> np.ndarray:
    """Characteristic polynomial of A mod r (coefficients ascending, monic)."""
    H = np.array(A, dtype=np.int64) % r
    n = H.shape[0]
    # similarity reduction to upper Hessenberg
    for j in range(n - 2):
        if H[j + 1, j] == 0:
            nz = np.flatnonzero(H[j + 2:, j])
            if nz.size == 0:
                continue
            i = j + 2 + int(nz[0])
            H[[j + 1, i]] = H[[i, j + 1]]
            H[:, [j + 1, i]] = H[:, [i, j + 1]]
        inv = pow(int(H[j + 1, j]), r - 2, r)
        for i in range(j + 2, n):
            f = int(H[i, j]) * inv % r
            if f:
                H[i] = (H[i] - f * H[j + 1]) % r
                H[:, j + 1] = (H[:, j + 1] + f * H[:, i]) % r
    # p_i(x) = (x - H[i,i]) p_{i-1} - sum_k H[k,i] (prod subdiag) p_{k-1}
    polys = [np.array([1], dtype=np.int64)]
    for i in range(n):
        prev = polys[i]
        cur = np.zeros(i + 2, dtype=np.int64)
        cur[1:] = prev
        cur[:-1] = (cur[:-1] - int(H[i, i]) * prev) % r
        cur %= r
        subprod = 1
        for k in range(i - 1, -1, -1):
            subprod = subprod * int(H[k + 1, k]) % r
            coef = int(H[k, i]) * subprod % r
            if coef:
                cur[: k + 1] = (cur[: k + 1] - coef * polys[k]) % r
        polys.append(cur)
    return polys[n]


def poly_roots_mod(coeffs: np.ndarray, r: int) -> np.ndarray:
    """All roots in F_r by full scan (sorted)."""
    if r > ROOT_SCAN_BOUND:
        raise CapExceeded(f"root scan refused for r = {r}")
    lam = np.arange(r, dtype=np.int64)
    acc = np.zeros(r, dtype=np.int64)
    for c in reversed(list(coeffs)):
        acc = (acc * lam + int(c)) % r
    return np.flatnonzero(acc == 0).astype(np.int64)


# ---------------------------------------------------------------------------
# the character table


class CharTable:
    """Exact character table: degrees plus Z[zeta_e] values per (row, class)."""

    def __init__(self, cd: ClassData, e: int, r: int, degrees: np.ndarray,
                 rows: np.ndarray):
        self.cd = cd
        self.e = e
        self.r = r
        self.degrees = degrees
        self.rows = rows  # (k, k, e) int64: coeff vectors of chi_t(class_i)

    @property
    def k(self) -> int:
        return self.cd.k

    @property
    def table(self) -> GroupTable:
        return self.cd.table

    def value(self, t: int, i: int) -> CycloNum:
        return CycloNum(self.e, self.rows[t, i].tolist())

    def reduction_matrix(self) -> np.ndarray:
        return _phi_reduction_matrix(self.e)

    def verify(self) -> None:
        """Exact completeness and both orthogonality relations; raises on failure."""
        order = len(self.table)
        if int(np.sum(self.degrees**2)) != order:
            raise AssertionError("sum of squared degrees differs from |G|")
        if any(order % int(d) for d in self.degrees):
            raise AssertionError("a degree does not divide |G|")
        red = self.reduction_matrix()
        phi_e = red.shape[1]
        k, e = self.k, self.e
        h = self.cd.sizes
        # row orthogonality: sum_i h_i chi_s(i) conj(chi_t(i)) = delta |G|
        weighted = self.rows * h[None, :, None]
        flat_w = weighted.reshape(k, -1)
        prods = np.empty((e, k, k), dtype=np.int64)
        for w in range(e):
            rolled = np.roll(self.rows, w, axis=2).reshape(k, -1)
            prods[w] = flat_w @ rolled.T
        reduced = red.T @ prods.reshape(e, -1)
        reduced = reduced.reshape(phi_e, k, k)
        expect = np.zeros((phi_e, k, k), dtype=np.int64)
        expect[0] = order * np.eye(k, dtype=np.int64)
        if not np.array_equal(reduced, expect):
            raise AssertionError("row orthogonality fails")
        # column orthogonality: sum_t chi_t(i) conj(chi_t(j)) = delta |C(g_i)|
        flat = self.rows
        prods2 = np.empty((e, k, k), dtype=np.int64)
        for w in range(e):
            rolled = np.roll(flat, w, axis=2)
            prods2[w] = np.einsum("tiu,tju->ij", flat, rolled)
        reduced2 = (red.T @ prods2.reshape(e, -1)).reshape(phi_e, k, k)
        expect2 = np.zeros((phi_e, k, k), dtype=np.int64)
        expect2[0] = np.diag(order // h)
        if not np.array_equal(reduced2, expect2):
            raise AssertionError("column orthogonality fails")


def _phi_reduction_matrix(e: int) -> np.ndarray:
    """Matrix sending a length-e exponent vector to its canonical residue
    mod Phi_e, in the basis 1, zeta, ..., zeta^(phi(e)-1)."""
    phi = list(cyclotomic_poly(e))
    deg = len(phi) - 1
    out = np.zeros((e, deg), dtype=np.int64)
    cur = [0] * deg
    for j in range(e):
        if j < deg:
            out[j, j] = 1
            continue
        # x^j mod Phi_e = x * (x^{j-1} mod Phi_e) mod Phi_e
        prev = out[j - 1]
        shifted = [0] + [int(c) for c in prev]
        lead = shifted.pop()
        red = [shifted[i] - lead * phi[i] for i in range(deg)]
        out[j] = red
    if np.abs(out).max() > 1 << 31:
        raise OverflowError("reduction matrix entries too large")
    return out


def class_matrix(cd: ClassData, j: int, r: int) -> np.ndarray:
    """Class-sum structure constants M_j[i, l] = #{x in C_j : x^-1 z_l in C_i}."""
    table = cd.table
    ring = table.ring
    ids_j = np.flatnonzero(cd.class_of == j)
    inv_j = table.inverses()[ids_j]
    k = cd.k
    M = np.zeros((k, k), dtype=np.int64)
    reps_elems = table.elems[cd.reps]
    for l in range(k):
        prod = mat_mul(ring, inv_j, reps_elems[l])
        classes = cd.class_of[table.ids_of(prod)]
        M[:, l] = np.bincount(classes, minlength=k)
    return M % r


def character_table(cd: ClassData, cap: int = CHARTAB_CAP,
                    prime_bound: int = PRIME_SEARCH_BOUND) -> CharTable:
    """Dixon-Schneider character table with exact cyclotomic lifting."""
    order = len(cd.table)
    if order > cap:
        raise CapExceeded(f"|G| = {order} beyond character-table cap {cap}")
    k = cd.k
    e = cd.exponent()
    r = dixon_prime(e, order, prime_bound)
    h = cd.sizes % r
    hinv = np.array([pow(int(x), r - 2, r) for x in h], dtype=np.int64)

    mats: dict[int, np.ndarray] = {}

    def M(j: int) -> np.ndarray:
        if j not in mats:
            mats[j] = class_matrix(cd, j, r)
        return mats[j]

    # split F_r^k into common eigen-rows of the transposed class matrices
    spaces = [np.eye(k, dtype=np.int64)]
    for j in range(1, k):
        if all(len(s) == 1 for s in spaces):
            break
        MT = M(j).T % r
        roots = poly_roots_mod(charpoly_mod(MT, r), r)
        nxt = []
        for W in spaces:
            if len(W) == 1:
                nxt.append(W)
                continue
            Wr, piv = rref_mod(W, r)
            act = (Wr @ MT) % r
            A = act[:, piv]  # restricted action: Wr @ MT = A @ Wr
            found = 0
            for lam in roots:
                if found == len(Wr):
                    break
                # row w = c Wr is an eigen-row iff c A = lam c
                ker = nullspace_mod((A.T - int(lam) * np.eye(len(Wr), dtype=np.int64)) % r, r)
                if len(ker):
                    nxt.append(ker @ Wr % r)
                    found += len(ker)
            if found != len(Wr):
                raise AssertionError("class matrix failed to act semisimply")
        spaces = nxt
    if any(len(s) != 1 for s in spaces):
        raise AssertionError("class matrices did not separate all characters")

    # normalized central character vectors: omega[t, identity-class] = 1
    W = np.array([s[0] % r for s in spaces], dtype=np.int64)
    if np.any(W[:, 0] == 0):
        raise AssertionError("eigenvector has zero identity coordinate")
    norm = np.array([pow(int(x), r - 2, r) for x in W[:, 0]], dtype=np.int64)
    W = W * norm[:, None] % r

    omega = np.empty((k, k), dtype=np.int64)
    for j in range(k):
        P = (W @ M(j).T) % r
        # eigenvalue read off at the identity-class coordinate (W[:,0] = 1)
        omega[:, j] = P[:, 0]

    # degrees from sum_j omega(j) omega(j*) / h_j = |G| / d^2
    s = np.zeros(k, dtype=np.int64)
    for j in range(k):
        s = (s + omega[:, j] * omega[:, cd.inverse_perm[j]] % r * hinv[j]) % r
    degrees = np.empty(k, dtype=np.int64)
    for t in range(k):
        d2 = order % r * pow(int(s[t]), r - 2, r) % r
        droot = sqrt_mod(d2, r)
        degrees[t] = min(droot, r - droot)
    if int(np.sum(degrees**2)) != order:
        raise AssertionError("degree recovery failed")

    # character values mod r, then exact lifting class by class
    chibar = degrees[:, None] * omega % r * hinv[None, :] % r
    g = primitive_root(r)
    z = pow(g, (r - 1) // e, r)
    rows = np.zeros((k, k, e), dtype=np.int64)
    for i in range(k):
        o = int(cd.orders[i])
        pcs = cd.power_classes(i)
        zi = pow(z, e // o, r)
        zmat = np.array([[pow(zi, (-u * s) % o, r) for s in range(o)] for u in range(o)],
                        dtype=np.int64)
        oinv = pow(o, r - 2, r)
        cbar = chibar[:, pcs] @ zmat.T % r * oinv % r
        if not np.array_equal(cbar.sum(axis=1), degrees):
            raise IntegralityError("eigenvalue multiplicities do not sum to degree")
        step = e // o
        rows[:, i, ::step][:, : o] = cbar
    # canonical row order: ascending degree, then coefficient data
    order_keys = sorted(range(k), key=lambda t: (int(degrees[t]), rows[t].tobytes()))
    degrees = degrees[order_keys]
    rows = rows[order_keys]

    ct = CharTable(cd, e, r, degrees, rows)
    ct.verify()
    return ct


# ---------------------------------------------------------------------------
# induced-character decomposition and regular classification


def decompose_induced(ct: CharTable, theta: NonDegenChar,
                      u_sub: SubgroupHandle | None = None) -> np.ndarray:
    """Multiplicities <Ind_U^G theta, chi_t> by Frobenius reciprocity:
    (1/|U|) sum_u chi_t(u) conj(theta(u))."""
    table = ct.table
    if theta.spec.key() != table.spec.key():
        raise ValueError("theta and table are over different groups")
    if u_sub is None:
        u_sub = unipotent_subgroup(table, 0)
    e, m = ct.e, theta.m
    if e % m:
        raise AssertionError("character field does not contain the theta values")
    scale = e // m
    u_elems = u_sub.elements()
    u_classes = ct.cd.class_of[u_sub.ids]
    u_expos = theta.exponents_on(u_elems)
    k = ct.k
    acc = np.zeros((k, e), dtype=np.int64)
    for cls, s in zip(u_classes, u_expos):
        acc += np.roll(ct.rows[:, cls, :], int(-s * scale) % e, axis=1)
    mults = _extract_integers(acc, ct, len(u_sub))
    if np.any(mults < 0):
        raise IntegralityError("negative multiplicity")
    if int(np.sum(mults * ct.degrees)) != len(table) // len(u_sub):
        raise AssertionError("multiplicities do not sum to the induced dimension")
    return mults


def _extract_integers(acc: np.ndarray, ct: CharTable, divisor: int) -> np.ndarray:
    """Exact integer values of a stack of exponent vectors divided by divisor."""
    red = ct.reduction_matrix()
    flat = acc.reshape(-1, ct.e)
    reduced = flat @ red
    if np.any(reduced[:, 1:]):
        raise IntegralityError("character sum is not rational")
    vals, rem = np.divmod(reduced[:, 0], divisor)
    if np.any(rem):
        raise IntegralityError("character sum is not divisible by the index")
    return vals.reshape(acc.shape[:-1])


@dataclass
class RegularFlag:
    index: int
    degree: int
    regular: bool
    tau: TypeMatrix | None
    label: str | None


def classify_regular(ct: CharTable, cap_pairs: int = 1 << 22) -> list[RegularFlag]:
    """Classify irreducibles by their restriction to K^(l-1).

    For each chi and each x in g(F_q), computes <chi|_{K^(l-1)}, phi_x>
    exactly; chi is regular iff every x with nonzero pairing is regular,
    and the common factorization type of those x gives the label.
    """
    table = ct.table
    spec = table.spec
    ring = table.ring
    ell = ring.ell
    if ell < 2:
        raise ValueError("regular classification needs l >= 2")
    ksub = congruence_subgroup(table, ell - 1)
    n = spec.n
    q = ring.q
    res = ring.residue_field()
    # levels y' of the kernel elements: y = I + pi^(l-1) y'
    vpk = ring.q ** (ell - 1)
    yprimes = (ksub.elements() - np.eye(n, dtype=np.int64)[None]) // vpk % q
    y_classes = ct.cd.class_of[ksub.ids]
    # all x in g(F_q) (trace 0 for sl)
    xs = _lie_algebra_residue(spec)
    if len(xs) * len(yprimes) > cap_pairs:
        raise CapExceeded("classification pair count beyond cap")
    # pairing exponents: phi(pi^(l-1) tr(x y')) as exponents of zeta_e
    phi_expo = ring.phi_exponents()
    e = ct.e
    m = ring.char_order
    scale = e // m
    tr = np.zeros((len(xs), len(yprimes)), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            tr = res.v_add(tr, res.v_mul(xs[:, a, b][:, None], yprimes[:, b, a][None, :]))
    expo = phi_expo[np.asarray(
        [[ring.mul_varpi_pow(int(t), ell - 1) for t in row] for row in tr],
        dtype=np.intp)]
    k = ct.k
    acc = np.zeros((len(xs), k, e), dtype=np.int64)
    for yi in range(len(yprimes)):
        rolled_by = expo[:, yi]
        block = ct.rows[:, y_classes[yi], :]
        for s in np.unique(rolled_by):
            sel = np.flatnonzero(rolled_by == s)
            acc[sel] += np.roll(block, int(-s * scale) % e, axis=1)[None, :, :]
    mults = _extract_integers(acc.reshape(-1, e), ct, len(ksub)).reshape(len(xs), k)
    if np.any(mults < 0):
        raise IntegralityError("negative restriction multiplicity")

    flags = []
    fdesc = res.desc
    for t in range(k):
        support = np.flatnonzero(mults[:, t])
        if len(support) == 0:
            raise AssertionError("restriction to the kernel has empty support")
        reg = True
        taus = set()
        for xi in support:
            xmat = Mat(fdesc, xs[xi])
            if min_poly(xmat).degree != n:
                reg = False
                break
            taus.add(type_of(xmat))
        if reg and len(taus) != 1:
            raise AssertionError("factorization type is not orbit-constant")
        tau = taus.pop() if reg else None
        flags.append(RegularFlag(t, int(ct.degrees[t]), reg, tau,
                                 tau.label() if tau else None))
    return flags


def _lie_algebra_residue(spec) -> np.ndarray:
    """All elements of g(F_q): full matrix algebra for gl, trace zero for sl."""
    ring = get_ring(spec.ring)
    q = ring.q
    res = ring.residue_field()
    n = spec.n
    if spec.family == "GL":
        total = q ** (n * n)
        idx = np.arange(total, dtype=np.int64)
        out = np.empty((total, n * n), dtype=np.int64)
        for epos in range(n * n):
            out[:, epos] = (idx // q**epos) % q
        return out.reshape(total, n, n)
    total = q ** (n * n - 1)
    idx = np.arange(total, dtype=np.int64)
    out = np.zeros((total, n, n), dtype=np.int64)
    epos = 0
    diag_sum = np.zeros(total, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i == n - 1 and j == n - 1:
                continue
            vals = (idx // q**epos) % q
            out[:, i, j] = vals
            if i == j:
                diag_sum = res.v_add(diag_sum, vals)
            epos += 1
    out[:, n - 1, n - 1] = res.v_neg(diag_sum)
    return out


def restriction_norm(ct_gl: CharTable, t: int, sl_table: GroupTable,
                     sl_class_counts: np.ndarray | None = None) -> int:
    """<Res chi_t, Res chi_t>_SL = (1/|SL|) sum over SL of |chi_t|^2, exact."""
    if sl_class_counts is None:
        sl_class_counts = sl_class_profile(ct_gl, sl_table)
    e = ct_gl.e
    row = ct_gl.rows[t]
    acc = np.zeros(e, dtype=np.int64)
    weighted = row * sl_class_counts[:, None]
    for w in range(e):
        acc[w] = int(np.sum(weighted * np.roll(row, w, axis=1)))
    val = _extract_integers(acc[None, :], ct_gl, len(sl_table))[0]
    return int(val)


def sl_class_profile(ct_gl: CharTable, sl_table: GroupTable) -> np.ndarray:
    """How many SL elements land in each GL conjugacy class."""
    gl_table = ct_gl.table
    counts = np.zeros(ct_gl.k, dtype=np.int64)
    for m in sl_table.elems:
        counts[ct_gl.cd.class_of[gl_table.id_of(m)]] += 1
    return counts


@dataclass
class SpecialRegularRecord:
    index: int
    degree: int
    label: str | None
    tau: TypeMatrix | None
    units_with_model: tuple[int, ...]
    all_units: bool
    predicted_all_units: bool | None  # iota(tau, q-1) == 1, when available


def special_regular_scan(ct: CharTable, flags: list[RegularFlag] | None = None,
                         predict: bool = True) -> list[SpecialRegularRecord]:
    """For each regular irreducible of an SL table, which theta_a contain it.

    The prediction (has a model for every unit a iff iota(tau, q-1) = 1)
    applies when (p,2) = (p,n) = 1; otherwise observed sets are reported
    without an asserted classification.
    """
    table = ct.table
    spec = table.spec
    if spec.family != "SL":
        raise ValueError("special-regular scan applies to SL tables")
    ring = table.ring
    if flags is None:
        flags = classify_regular(ct)
    u_sub = unipotent_subgroup(table, 0)
    units = ring.unit_codes()
    mult_by_a = {}
    for a in units:
        mult_by_a[a] = decompose_induced(ct, NonDegenChar(spec, a), u_sub)
        if np.any(mult_by_a[a] > 1):
            raise AssertionError("multiplicity above one")
    predok = predict and predictions_supported(spec)
    out = []
    for fl in flags:
        if not fl.regular:
            continue
        with_model = tuple(a for a in units if mult_by_a[a][fl.index] == 1)
        out.append(SpecialRegularRecord(
            index=fl.index,
            degree=fl.degree,
            label=fl.label,
            tau=fl.tau,
            units_with_model=with_model,
            all_units=len(with_model) == len(units),
            predicted_all_units=(iota(fl.tau, ring.q - 1) == 1) if predok else None,
        ))
    return out
