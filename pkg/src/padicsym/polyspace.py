"""Polynomial coefficient modules with monoid actions and Clebsch-Gordan calculus.

``TensorPoly`` models the space of polynomials in (X1, Y1, X2, Y2),
bi-homogeneous of degree (n1, n2), with a left action of pairs of matrices

    (gamma1, gamma2) . P  =  P(d_i X_i - b_i Y_i, -c_i X_i + a_i Y_i).

``HomPoly`` is the one-pair analogue; with ``side="right"`` it instead carries
the right action (P|k)(S, T) = P(aS + bT, cS + dT).

Coefficients may be ``PadicNumber`` (the p-adic pipeline) or exact
``Fraction``/``int`` (characteristic-zero identities); the operators below are
ring-agnostic.  Over a p-adic ring the Clebsch-Gordan operations require
p > n so that n! is invertible.
"""

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import DegreeTooLow, MixedPrime, SmallPrime
from .padic import PadicNumber, binomial


def _is_zero(c):
    if isinstance(c, PadicNumber):
        return c.is_zero()
    return c == 0


def _equiv(a, b):
    if isinstance(a, PadicNumber) or isinstance(b, PadicNumber):
        return a.equiv(b) if isinstance(a, PadicNumber) else b.equiv(a)
    return a == b


class HomPoly:
    """Homogeneous polynomial of degree n in one variable pair."""

    __slots__ = ("n", "coeffs", "side")

    def __init__(self, n, coeffs, side="left"):
        coeffs = tuple(coeffs)
        if len(coeffs) != n + 1:
            raise ValueError(f"need {n + 1} coefficients, got {len(coeffs)}")
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.n = n
        self.coeffs = coeffs  # coeffs[j] multiplies X^(n-j) Y^j (or S, T)
        self.side = side

    def __eq__(self, other):
        if not isinstance(other, HomPoly) or self.n != other.n:
            return False
        return all(_equiv(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"HomPoly(n={self.n}, {list(self.coeffs)})"

    def act(self, m):
        """Apply a single 2x2 matrix on the declared side."""
        if self.side == "left":
            rows = _subst_rows(m.a, m.b, m.c, m.d, self.n, left=True)
        else:
            rows = _subst_rows(m.a, m.b, m.c, m.d, self.n, left=False)
        out = [None] * (self.n + 1)
        for j, cj in enumerate(self.coeffs):
            if _is_zero(cj):
                continue
            for r, w in rows[j]:
                term = cj * w
                out[r] = term if out[r] is None else out[r] + term
        zero = _zero_like(self.coeffs[0])
        return HomPoly(self.n, [zero if c is None else c for c in out], self.side)


def _zero_like(c):
    if isinstance(c, PadicNumber):
        return PadicNumber.zero(c.p, c.M)
    if isinstance(c, Fraction):
        return Fraction(0)
    return 0


def _binom_product(u, v, deg_u, deg_v, n):
    """Coefficient list of u_poly^deg_u * v_poly^deg_v where u_poly, v_poly are
    linear forms given as (coeff of X, coeff of Y), in the basis X^(n-r) Y^r."""
    # expand (u0 X + u1 Y)^deg_u (v0 X + v1 Y)^deg_v
    acc = {0: 1}
    for (c0, c1), deg in ((u, deg_u), (v, deg_v)):
        new = {}
        for r, w in acc.items():
            for t in range(deg + 1):
                key = r + t
                term = w * binomial(deg, t) * (c0 ** (deg - t)) * (c1**t)
                if key in new:
                    new[key] = new[key] + term
                else:
                    new[key] = term
        acc = new
    return acc


def _subst_rows(a, b, c, d, n, left):
    """For each basis index j, the expansion of the substituted monomial as a
    list of (row, weight): left action X -> dX - bY, Y -> -cX + aY; right
    action S -> aS + bT, T -> cS + dT."""
    rows = []
    for j in range(n + 1):
        if left:
            terms = _binom_product((d, -b), (-c, a), n - j, j, n)
        else:
            terms = _binom_product((a, b), (c, d), n - j, j, n)
        rows.append([(r, w) for r, w in terms.items() if not _is_zero(w)])
    return rows


class TensorPoly:
    """Bi-homogeneous polynomial of degree (n1, n2) in (X1, Y1) and (X2, Y2).

    ``coeffs[j][l]`` multiplies X1^(n1-j) Y1^j X2^(n2-l) Y2^l.
    """

    __slots__ = ("n1", "n2", "coeffs")

    def __init__(self, n1, n2, coeffs):
        coeffs = tuple(tuple(row) for row in coeffs)
        if len(coeffs) != n1 + 1 or any(len(r) != n2 + 1 for r in coeffs):
            raise ValueError("coefficient array must be (n1+1) x (n2+1)")
        self.n1 = n1
        self.n2 = n2
        self.coeffs = coeffs

    @classmethod
    def zero(cls, n1, n2, zero_elt):
        return cls(n1, n2, [[zero_elt] * (n2 + 1) for _ in range(n1 + 1)])

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return False
        if (self.n1, self.n2) != (other.n1, other.n2):
            return False
        return all(_equiv(a, b) for ra, rb in zip(self.coeffs, other.coeffs)
                   for a, b in zip(ra, rb))

    def __add__(self, other):
        if (self.n1, self.n2) != (other.n1, other.n2):
            raise ValueError("degree mismatch")
        return TensorPoly(self.n1, self.n2,
                          [[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.coeffs, other.coeffs)])

    def scale(self, s):
        return TensorPoly(self.n1, self.n2,
                          [[c * s for c in row] for row in self.coeffs])

    def is_zero(self):
        return all(_is_zero(c) for row in self.coeffs for c in row)

    def __repr__(self):
        return f"TensorPoly(n1={self.n1}, n2={self.n2}, {self.coeffs!r})"

    def evaluate(self, x1, y1, x2, y2):
        total = None
        for j, row in enumerate(self.coeffs):
            for l, c in enumerate(row):
                if _is_zero(c):
                    continue
                term = c * (x1 ** (self.n1 - j)) * (y1**j) * (x2 ** (self.n2 - l)) * (y2**l)
                total = term if total is None else total + term
        return _zero_like(self.coeffs[0][0]) if total is None else total

    def to_json(self):
        return {"n1": self.n1, "n2": self.n2,
                "coeffs": [[c.to_json() for c in row] for row in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["n1"], obj["n2"],
                   [[PadicNumber.from_json(c) for c in row] for row in obj["coeffs"]])


class MonoidMatrix:
    """A 2x2 matrix with PadicNumber entries, by default constrained to the
    monoid Sigma_0(p): c = 0 mod p, d a unit, nonzero determinant."""

    __slots__ = ("a", "b", "c", "d", "p", "M")

    def __init__(self, a, b, c, d, *, relaxed=False):
        self.p = a.p
        self.M = min(x.M for x in (a, b, c, d))
        for x in (b, c, d):
            if x.p != self.p:
                raise MixedPrime("matrix entries over different primes")
        self.a, self.b, self.c, self.d = a, b, c, d
        det = a * d - b * c
        if det.is_zero():
            raise ValueError("determinant is zero at working precision")
        if not relaxed:
            if not c.is_zero() and c.valuation() < 1:
                raise ValueError("Sigma_0(p) requires p | c")
            if not d.is_unit():
                raise ValueError("Sigma_0(p) requires d to be a unit")

    @classmethod
    def from_ints(cls, a, b, c, d, p, M, *, relaxed=False):
        f = lambda x: PadicNumber.from_int(x, p, M)
        return cls(f(a), f(b), f(c), f(d), relaxed=relaxed)

    @classmethod
    def identity(cls, p, M):
        return cls.from_ints(1, 0, 0, 1, p, M)

    @classmethod
    def up_rep(cls, i, p, M):
        """The U_p coset representative (p, i; 0, 1)."""
        return cls.from_ints(p, i, 0, 1, p, M)

    def det(self):
        return self.a * self.d - self.b * self.c

    def __mul__(self, other):
        return MonoidMatrix(self.a * other.a + self.b * other.c,
                            self.a * other.b + self.b * other.d,
                            self.c * other.a + self.d * other.c,
                            self.c * other.b + self.d * other.d,
                            relaxed=True)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"[{self.a}, {self.b}; {self.c}, {self.d}]"


def act_poly(gamma_pair, P):
    """Left action of a matrix pair: componentwise P(dX - bY, -cX + aY)."""
    g1, g2 = gamma_pair
    if isinstance(P.coeffs[0][0], PadicNumber) and P.coeffs[0][0].p != g1.p:
        raise MixedPrime("polynomial and matrices over different primes")
    rows1 = _subst_rows(g1.a, g1.b, g1.c, g1.d, P.n1, left=True)
    rows2 = _subst_rows(g2.a, g2.b, g2.c, g2.d, P.n2, left=True)
    out = [[None] * (P.n2 + 1) for _ in range(P.n1 + 1)]
    for j, row in enumerate(P.coeffs):
        for l, c in enumerate(row):
            if _is_zero(c):
                continue
            for r1, w1 in rows1[j]:
                cw1 = c * w1
                for r2, w2 in rows2[l]:
                    term = cw1 * w2
                    cur = out[r1][r2]
                    out[r1][r2] = term if cur is None else cur + term
    zero = _zero_like(P.coeffs[0][0])
    return TensorPoly(P.n1, P.n2,
                      [[zero if c is None else c for c in row] for row in out])


def nabla(P):
    """The Clebsch-Gordan differential operator
    d^2/dX2 dY1 - d^2/dX1 dY2, dropping the bi-degree by (1, 1)."""
    if P.n1 < 1 or P.n2 < 1:
        raise DegreeTooLow("nabla needs positive degree in both pairs")
    n1, n2 = P.n1, P.n2
    zero = _zero_like(P.coeffs[0][0])
    out = [[zero] * n2 for _ in range(n1)]
    for j in range(n1 + 1):
        for l in range(n2 + 1):
            c = P.coeffs[j][l]
            if _is_zero(c):
                continue
            # d^2/dX2 dY1 on X1^(n1-j) Y1^j X2^(n2-l) Y2^l
            if j >= 1 and n2 - l >= 1:
                out[j - 1][l] = out[j - 1][l] + c * (j * (n2 - l))
            # - d^2/dX1 dY2
            if n1 - j >= 1 and l >= 1:
                out[j][l - 1] = out[j][l - 1] - c * ((n1 - j) * l)
    return TensorPoly(n1 - 1, n2 - 1, out)


def diagonal_collapse(P):
    """Identify (X2, Y2) with (X1, Y1): the image in the single-pair space of
    degree n1 + n2."""
    n = P.n1 + P.n2
    zero = _zero_like(P.coeffs[0][0])
    out = [zero] * (n + 1)
    for j, row in enumerate(P.coeffs):
        for l, c in enumerate(row):
            out[j + l] = out[j + l] + c
    return HomPoly(n, out)


def _require_large_prime(P, n):
    c = P.coeffs[0][0]
    if isinstance(c, PadicNumber) and c.p <= n:
        raise SmallPrime(f"need p > {n}, got p = {c.p}")


def _inv_sq_factorial(i, sample):
    """(i!)^(-2) in the coefficient ring of ``sample``."""
    if isinstance(sample, PadicNumber):
        f = PadicNumber.from_int(factorial(i), sample.p, sample.M)
        return (f * f).inverse()
    return Fraction(1, factorial(i) ** 2)


def cg_decompose(P):
    """Clebsch-Gordan decomposition of P in V_{n,n}: the list of components
    (i!)^(-2) nabla^i P collapsed to one variable pair, of degrees
    2n, 2n-2, ..., 0.  Requires n1 = n2 = n and (p-adically) p > n."""
    if P.n1 != P.n2:
        raise ValueError("decomposition needs n1 = n2")
    n = P.n1
    _require_large_prime(P, n)
    sample = P.coeffs[0][0]
    comps = []
    Q = P
    for i in range(n + 1):
        scale = _inv_sq_factorial(i, sample)
        collapsed = diagonal_collapse(Q)
        comps.append(HomPoly(collapsed.n, [c * scale for c in collapsed.coeffs]))
        if i < n:
            Q = nabla(Q)
    return comps


@lru_cache(maxsize=None)
def _cg_matrix_inverse(n, p, M):
    """Inverse of the decomposition matrix on integer coordinates mod p^M.

    Columns are indexed by the monomial basis (j, l) of V_{n,n}; rows stack the
    components' coefficient vectors.  All entries lie in Z_p once (i!)^(-2) is
    expanded mod p^M, so the inverse is computed by Gaussian elimination over
    Z/p^M (every pivot is a unit because the map is bijective when p > n).
    """
    if p <= n:
        raise SmallPrime(f"need p > {n}, got p = {p}")
    q = p**M
    dim = (n + 1) ** 2
    cols = []
    one = PadicNumber.one(p, M)
    zero = PadicNumber.zero(p, M)
    for j in range(n + 1):
        for l in range(n + 1):
            basis = TensorPoly.zero(n, n, zero)
            rows = [list(r) for r in basis.coeffs]
            rows[j][l] = one
            comps = cg_decompose(TensorPoly(n, n, rows))
            vec = []
            for comp in comps:
                vec.extend(c.lift() % q for c in comp.coeffs)
            cols.append(vec)
    # matrix[r][c] over Z/q; augment with identity and eliminate
    mat = [[cols[c][r] for c in range(dim)] for r in range(dim)]
    aug = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    for col in range(dim):
        piv = next(r for r in range(col, dim) if mat[r][col] % p != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(mat[col][col], -1, q)
        mat[col] = [x * inv % q for x in mat[col]]
        aug[col] = [x * inv % q for x in aug[col]]
        for r in range(dim):
            if r != col and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(x - f * y) % q for x, y in zip(mat[r], mat[col])]
                aug[r] = [(x - f * y) % q for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row) for row in aug)


def cg_reconstruct(components, p=None, M=None):
    """Inverse of ``cg_decompose``: rebuild P in V_{n,n} from its components.

    For PadicNumber coefficients the cached inverse matrix mod p^M is used;
    the result is exact at precision M.
    """
    n = len(components) - 1
    sample = components[0].coeffs[0]
    if not isinstance(sample, PadicNumber):
        raise TypeError("cg_reconstruct works over PadicNumber coefficients")
    p = sample.p if p is None else p
    M = sample.M if M is None else M
    inv = _cg_matrix_inverse(n, p, M)
    q = p**M
    vec = []
    for comp in components:
        vec.extend(c.lift() % q for c in comp.coeffs)
    dim = (n + 1) ** 2
    out = [sum(inv[r][c] * vec[c] for c in range(dim)) % q for r in range(dim)]
    coeffs = [[PadicNumber.from_int(out[j * (n + 1) + l], p, M)
               for l in range(n + 1)] for j in range(n + 1)]
    return TensorPoly(n, n, coeffs)


def trivial_projection(P, n=None):
    """(n!)^(-2) nabla^n P, the projection of V_{n,n} onto the trivial
    component.  The value on (X1 - z1 Y1)^n (X2 - z2 Y2)^n is
    (-1)^n (z1 - z2)^n; the sign is a consequence of the definition of nabla
    and is asserted by the evaluation pipeline, not silently absorbed here."""
    if P.n1 != P.n2:
        raise ValueError("projection needs n1 = n2")
    if n is None:
        n = P.n1
    elif n != P.n1:
        raise ValueError("declared degree does not match the polynomial")
    _require_large_prime(P, n)
    Q = P
    for _ in range(n):
        Q = nabla(Q)
    return Q.coeffs[0][0] * _inv_sq_factorial(n, P.coeffs[0][0])


def monomial_projection_value(n, a, p=None, M=None):
    """Closed form of the projection on X1^(n-a) Y1^a X2^a Y2^(n-a):
    (-1)^(n-a) / binom(n, a).  Cross-check route for trivial_projection."""
    val = Fraction((-1) ** (n - a), binomial(n, a))
    if p is None:
        return val
    return PadicNumber.from_rational(val, p, M)
