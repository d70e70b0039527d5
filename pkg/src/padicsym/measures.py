"""Test functions and measures on X = Z_p x Z_p, weight actions, and U_p.

Measures are finite linear combinations of Dirac atoms with coefficients in
O (PadicNumber) or in a truncated Iwasawa algebra (IwasawaElement).  They are
closed under the weight-kappa action of Sigma_0(p) x Sigma_0(p),

    (gamma .kappa mu)(f) = mu(f |kappa gamma),

and under the U_p operator given by the p^2 coset representatives
((p, i; 0, 1), (p, j; 0, 1)).  Everything is exact at the tracked precision.

Cell measures (one stored level) are the duals of locally constant functions;
integrating a polynomial against them is only possible approximately and is
gated behind ``approx_evaluate`` which reports a precision certificate.
Unbounded distributions are not representable: cell values must lie in O.
"""

from .errors import (LevelMismatch, MixedPrime, NonUnitDenominator,
                     NotLocallyConstant)
from .iwasawa import THETA, IwasawaElement, as_weight, theta_or_zero
from .padic import PadicNumber, binomial


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

class PolyFn:
    """Polynomial in (z1, z2) with PadicNumber coefficients."""

    __slots__ = ("p", "M", "terms")

    def __init__(self, p, M, terms):
        self.p = p
        self.M = M
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    @classmethod
    def from_int_terms(cls, p, M, terms):
        return cls(p, M, {k: PadicNumber.from_int(v, p, M) for k, v in terms.items()})

    @classmethod
    def one(cls, p, M):
        return cls.from_int_terms(p, M, {(0, 0): 1})

    @classmethod
    def diff_power(cls, k, p, M):
        """(z1 - z2)^k expanded."""
        return cls.from_int_terms(
            p, M, {(j, k - j): (-1) ** (k - j) * binomial(k, j) for j in range(k + 1)})

    def degree_bounds(self):
        if not self.terms:
            return (0, 0)
        return (max(a for a, _ in self.terms), max(b for _, b in self.terms))

    def eval_at(self, s1, s2):
        q = self.p**self.M
        total = PadicNumber.zero(self.p, self.M)
        for (a, b), c in self.terms.items():
            total = total + c * (pow(s1, a, q) * pow(s2, b, q))
        return total

    def weight_action(self, gamma_pair, k):
        """(f |_k gamma)(z) = (c1 z1 + d1)^k (c2 z2 + d2)^k f(gamma z), as an
        exact polynomial; needs every monomial degree <= k per variable."""
        d1, d2 = self.degree_bounds()
        if d1 > k or d2 > k:
            raise ValueError(f"degree ({d1},{d2}) exceeds weight {k}")
        g1, g2 = gamma_pair
        rows1 = _clearing_rows(g1, k)
        rows2 = _clearing_rows(g2, k)
        out = {}
        for (a, b), c in self.terms.items():
            for e1, w1 in rows1[a].items():
                cw = c * w1
                for e2, w2 in rows2[b].items():
                    key = (e1, e2)
                    t = cw * w2
                    out[key] = out[key] + t if key in out else t
        return PolyFn(self.p, self.M, out)

    def scale(self, s):
        return PolyFn(self.p, self.M, {k: c * s for k, c in self.terms.items()})

    def equiv(self, other):
        keys = set(self.terms) | set(other.terms)
        zero = PadicNumber.zero(self.p, self.M)
        return all((self.terms.get(t, zero) - other.terms.get(t, zero)).is_zero()
                   for t in keys)

    def __repr__(self):
        return f"PolyFn({dict(sorted(self.terms.items()))})"


def _clearing_rows(g, k):
    """For each exponent a <= k, the expansion of (az+b)^a (cz+d)^(k-a) as a
    map exponent -> PadicNumber coefficient."""
    a_, b_, c_, d_ = g.a, g.b, g.c, g.d
    rows = []
    for a in range(k + 1):
        acc = {0: PadicNumber.one(a_.p, a_.M)}
        for (x, y), deg in (((a_, b_), a), ((c_, d_), k - a)):
            new = {}
            for e, w in acc.items():
                for t in range(deg + 1):
                    term = w * binomial(deg, t) * (x**t) * (y ** (deg - t))
                    key = e + t
                    new[key] = new[key] + term if key in new else term
            acc = new
        rows.append(acc)
    return rows


class CellFn:
    """Locally constant function at level m: a table on (Z/p^m)^2."""

    __slots__ = ("p", "m", "table")

    def __init__(self, p, m, table):
        q = p**m
        if len(table) != q * q:
            raise ValueError(f"table must have exactly p^(2m) = {q * q} entries")
        self.p = p
        self.m = m
        self.table = dict(table)

    @classmethod
    def from_function(cls, p, m, fn, M):
        q = p**m
        table = {}
        for r1 in range(q):
            for r2 in range(q):
                v = fn(r1, r2)
                if isinstance(v, int):
                    v = PadicNumber.from_int(v, p, M)
                table[(r1, r2)] = v
        return cls(p, m, table)

    @classmethod
    def indicator_x_prime(cls, p, M):
        """Characteristic function of X' = {z1 - z2 a unit}, a level-1 table."""
        return cls.from_function(p, 1, lambda r1, r2: 1 if (r1 - r2) % p else 0, M)

    def eval_at(self, s1, s2):
        q = self.p**self.m
        return self.table[(s1 % q, s2 % q)]

    def compose_mobius(self, gamma_pair):
        """The table of z -> f(gamma z); well-defined at level m for matrices
        with c = 0 mod p and d a unit."""
        g1, g2 = gamma_pair
        q = self.p**self.m
        m1 = _mobius_mod(g1, q, self.p)
        m2 = _mobius_mod(g2, q, self.p)
        table = {(r1, r2): self.table[(m1[r1], m2[r2])]
                 for r1 in range(q) for r2 in range(q)}
        return CellFn(self.p, self.m, table)

    def equiv(self, other):
        return self.p == other.p and self.m == other.m and all(
            (self.table[k] - other.table[k]).is_zero() for k in self.table)

    def __repr__(self):
        return f"CellFn(level={self.m})"


def _mobius_mod(g, q, p):
    """residue -> residue table of the Mobius map of g modulo q."""
    a, b, c, d = (x.lift() % q for x in g.entries())
    out = {}
    for r in range(q):
        den = (c * r + d) % q
        if den % p == 0:
            raise NonUnitDenominator("matrix outside Sigma_0(p)")
        out[r] = (a * r + b) * pow(den, -1, q) % q
    return out


class ThetaFn:
    """The Lambda-valued map (z1, z2) -> theta(z1 - z2), extended by zero off
    the locus where the difference is a unit; carries its truncation level."""

    __slots__ = ("p", "M", "m")

    def __init__(self, p, M, m=None):
        self.p = p
        self.M = M
        self.m = M if m is None else m

    def eval_at(self, s1, s2):
        return theta_or_zero((s1 - s2), self.p, self.M, self.m)

    def __repr__(self):
        return f"ThetaFn(p={self.p}, level={self.m})"


class ProductFn:
    """Product of a locally constant function and a polynomial."""

    __slots__ = ("cell", "poly")

    def __init__(self, cell, poly):
        if cell.p != poly.p:
            raise MixedPrime("mixed primes in product function")
        self.cell = cell
        self.poly = poly

    def eval_at(self, s1, s2):
        return self.cell.eval_at(s1, s2) * self.poly.eval_at(s1, s2)

    def weight_action(self, gamma_pair, k):
        return ProductFn(self.cell.compose_mobius(gamma_pair),
                         self.poly.weight_action(gamma_pair, k))

    def equiv(self, other):
        return self.cell.equiv(other.cell) and self.poly.equiv(other.poly)

    def __repr__(self):
        return f"ProductFn({self.cell!r} * {self.poly!r})"


def function_weight_action(f, gamma_pair, kappa):
    """The right weight action on test functions, computed directly on the
    function side (the independent route for the duality checks)."""
    kappa = as_weight(kappa)
    if kappa.r % 1 != 0 or kappa.r != 0:
        raise NotImplementedError("function-side action implemented for integral weights")
    k = kappa.k
    if isinstance(f, PolyFn):
        return f.weight_action(gamma_pair, k)
    if isinstance(f, ProductFn):
        return f.weight_action(gamma_pair, k)
    if isinstance(f, CellFn):
        p, M = f.p, gamma_pair[0].M
        aut = PolyFn.one(p, M).weight_action(gamma_pair, k)
        return ProductFn(f.compose_mobius(gamma_pair), aut)
    raise TypeError(f"unsupported test function {f!r}")


# ---------------------------------------------------------------------------
# atomic measures
# ---------------------------------------------------------------------------

class AtomicMeasure:
    """Finite linear combination of Dirac atoms on Z_p x Z_p.

    Coefficients are PadicNumber (ring "O") or IwasawaElement (ring
    "Lambda"); points are residues mod p^M.
    """

    __slots__ = ("p", "M", "atoms", "ring")

    def __init__(self, p, M, atoms):
        q = p**M
        ring = None
        normalized = []
        for coeff, (s1, s2) in atoms:
            if isinstance(coeff, int):
                coeff = PadicNumber.from_int(coeff, p, M)
            kind = "Lambda" if isinstance(coeff, IwasawaElement) else "O"
            if ring is None:
                ring = kind
            elif ring != kind:
                raise ValueError("coefficient ring must be uniform across atoms")
            if kind == "O" and coeff.valuation() < 0:
                raise ValueError("measure coefficients must lie in O (valuation >= 0)")
            normalized.append((coeff, (s1 % q, s2 % q)))
        self.p = p
        self.M = M
        self.atoms = tuple(normalized)
        self.ring = ring or "O"

    @classmethod
    def dirac(cls, point, p, M, coeff=1):
        return cls(p, M, [(coeff, point)])

    def is_lambda(self):
        return self.ring == "Lambda"

    def _zero_value(self):
        if self.is_lambda():
            m = self.atoms[0][0].m if self.atoms else self.M
            return IwasawaElement.zero(self.p, self.M, m)
        return PadicNumber.zero(self.p, self.M)

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        if (self.p, self.M) != (other.p, other.M):
            raise ValueError("incompatible measures")
        return AtomicMeasure(self.p, self.M, self.atoms + other.atoms)

    def scale(self, s):
        return AtomicMeasure(self.p, self.M,
                             [(c * s, pt) for c, pt in self.atoms])

    def normalized(self):
        """Merge atoms supported at the same point."""
        merged = {}
        for c, pt in self.atoms:
            merged[pt] = merged[pt] + c if pt in merged else c
        atoms = [(c, pt) for pt, c in sorted(merged.items())
                 if not c.is_zero()]
        return AtomicMeasure(self.p, self.M, atoms)

    def equiv(self, other):
        a = self.normalized()
        b = other.normalized()
        da = {pt: c for c, pt in a.atoms}
        db = {pt: c for c, pt in b.atoms}
        for pt in set(da) | set(db):
            ca = da.get(pt)
            cb = db.get(pt)
            if ca is None:
                if not cb.is_zero():
                    return False
            elif cb is None:
                if not ca.is_zero():
                    return False
            elif not (ca - cb).is_zero():
                return False
        return True

    def mass(self):
        total = self._zero_value()
        for c, _ in self.atoms:
            total = total + c
        return total

    # -- integration -----------------------------------------------------------

    def evaluate(self, f):
        """The linear functional: sum of coeff * f(point)."""
        if isinstance(f, ThetaFn):
            if f.m > self.M:
                raise LevelMismatch("theta truncation exceeds measure resolution")
            total = None
            for c, (s1, s2) in self.atoms:
                v = f.eval_at(s1, s2)
                if v.is_zero():
                    continue
                term = v * c if not isinstance(c, IwasawaElement) else c * v
                total = term if total is None else total + term
            if total is None:
                return IwasawaElement.zero(self.p, self.M, f.m)
            return total
        if isinstance(f, CellFn) and f.m > self.M:
            raise LevelMismatch("cell level exceeds measure resolution")
        total = self._zero_value()
        for c, (s1, s2) in self.atoms:
            total = total + c * f.eval_at(s1, s2)
        return total

    # -- monoid action and U_p ----------------------------------------------------

    def weight_action(self, gamma_pair, kappa):
        """(gamma .kappa mu): each atom c delta_s maps to
        kappa(c1 s1 + d1) kappa(c2 s2 + d2) c delta_(gamma s)."""
        g1, g2 = gamma_pair
        q = self.p**self.M
        out = []
        for c, (s1, s2) in self.atoms:
            t1, den1 = _mobius_point(g1, s1, q, self.p)
            t2, den2 = _mobius_point(g2, s2, q, self.p)
            c2 = _apply_weight_factor(c, den1, den2, kappa, self.p, self.M)
            out.append((c2, (t1, t2)))
        return AtomicMeasure(self.p, self.M, out)

    def u_p(self, kappa):
        """U_p mu = sum over the p^2 coset representatives
        gamma_ij = ((p, i; 0, 1), (p, j; 0, 1)) of gamma_ij .kappa mu.

        For these representatives c = 0 and d = 1, so the automorphy factor is
        kappa(1) = 1 for every weight and the action only remaps atoms to
        (p s1 + i, p s2 + j); the atom count multiplies by p^2.
        """
        del kappa  # the factor kappa(1) = 1 for every weight tag
        p, q = self.p, self.p**self.M
        out = []
        for c, (s1, s2) in self.atoms:
            b1 = (p * s1) % q
            b2 = (p * s2) % q
            for i in range(p):
                for j in range(p):
                    out.append((c, ((b1 + i) % q, (b2 + j) % q)))
        return AtomicMeasure(p, self.M, out)

    def restrict_support(self, region):
        """Drop atoms outside the region; for X' those whose coordinate
        difference is divisible by p.  Idempotent."""
        if region == "X":
            return self
        if region != "X'":
            raise ValueError(f"unknown region {region!r}")
        kept = [(c, pt) for c, pt in self.atoms if (pt[0] - pt[1]) % self.p]
        return AtomicMeasure(self.p, self.M, kept)

    # -- ring maps ------------------------------------------------------------------

    def specialize(self, kappa):
        """Coefficientwise weight specialization Lambda -> O."""
        if not self.is_lambda():
            raise ValueError("specialize applies to Lambda-coefficient measures")
        return AtomicMeasure(self.p, self.M,
                             [(c.sp(kappa), pt) for c, pt in self.atoms])

    def to_lambda(self, m=None):
        """Embed an O-measure as a Lambda-measure via c -> c [1]."""
        if self.is_lambda():
            return self
        m = self.M if m is None else m
        out = [(IwasawaElement(self.p, self.M, m, {1: c}), pt)
               for c, pt in self.atoms]
        return AtomicMeasure(self.p, self.M, out)

    # -- serialization -----------------------------------------------------------------

    def to_json(self):
        return {"p": self.p, "M": self.M, "ring": self.ring,
                "atoms": [{"coeff": c.to_json(), "point": list(pt)}
                          for c, pt in self.atoms]}

    @classmethod
    def from_json(cls, obj):
        loader = IwasawaElement.from_json if obj["ring"] == "Lambda" \
            else PadicNumber.from_json
        atoms = [(loader(a["coeff"]), tuple(a["point"])) for a in obj["atoms"]]
        return cls(obj["p"], obj["M"], atoms)

    def __repr__(self):
        return f"AtomicMeasure({self.ring}, {len(self.atoms)} atoms, p={self.p}, M={self.M})"


def _mobius_point(g, s, q, p):
    a, b, c, d = (x.lift() % q for x in g.entries())
    den = (c * s + d) % q
    if den % p == 0:
        raise NonUnitDenominator("c z + d is not a unit: matrix outside Sigma_0(p)")
    num = (a * s + b) % q
    return num * pow(den, -1, q) % q, den


def _apply_weight_factor(coeff, den1, den2, kappa, p, M):
    if kappa is THETA:
        if not isinstance(coeff, IwasawaElement):
            raise ValueError("theta-weight action needs Lambda coefficients")
        return coeff.translate(den1).translate(den2)
    kappa = as_weight(kappa)
    if kappa.k == 0 and kappa.r == 0:
        return coeff
    factor = kappa.value(den1, p, M) * kappa.value(den2, p, M)
    return coeff * factor


# module-level operation aliases matching the measure contracts

def evaluate(mu, f):
    return mu.evaluate(f)


def weight_action(gamma_pair, mu, kappa):
    return mu.weight_action(gamma_pair, kappa)


def u_p(mu, kappa):
    return mu.u_p(kappa)


def restrict_support(mu, region):
    return mu.restrict_support(region)


# ---------------------------------------------------------------------------
# cell measures
# ---------------------------------------------------------------------------

class CellMeasure:
    """A measure presented by its values on the level-m cells of X.

    Values must lie in O: tables with denominators (negative valuation) are
    rejected, since they correspond to unbounded distributions for which
    Riemann sums do not converge.
    """

    __slots__ = ("p", "M", "m", "values")

    def __init__(self, p, M, m, values):
        q = p**m
        if len(values) != q * q:
            raise ValueError(f"need exactly p^(2m) = {q * q} cell values")
        table = {}
        for key, v in values.items():
            if isinstance(v, int):
                v = PadicNumber.from_int(v, p, M)
            if v.valuation() < 0:
                raise ValueError("cell values must lie in O: unbounded "
                                 "distributions are not representable")
            table[key] = v
        self.p = p
        self.M = M
        self.m = m
        self.values = table

    def mass(self):
        total = PadicNumber.zero(self.p, self.M)
        for v in self.values.values():
            total = total + v
        return total

    def evaluate(self, f):
        """Exact integration of a locally constant function of level <= m."""
        if isinstance(f, PolyFn) or isinstance(f, ProductFn):
            raise NotLocallyConstant(
                "polynomials are not locally constant; use approx_evaluate")
        if isinstance(f, (CellFn, ThetaFn)):
            if f.m > self.m:
                raise LevelMismatch(f"function level {f.m} > measure level {self.m}")
            if isinstance(f, ThetaFn):
                total = IwasawaElement.zero(self.p, self.M, f.m)
                for (r1, r2), v in self.values.items():
                    fv = f.eval_at(r1, r2)
                    if not fv.is_zero():
                        total = total + fv * v
                return total
            total = PadicNumber.zero(self.p, self.M)
            for (r1, r2), v in self.values.items():
                total = total + v * f.eval_at(r1, r2)
            return total
        raise TypeError(f"unsupported test function {f!r}")

    def approx_evaluate(self, f):
        """Riemann sum of a polynomial over the stored cells, with an explicit
        precision certificate: on each cell a polynomial with O coefficients
        varies by a multiple of p^m, so the result is valid mod
        p^(m + min valuation of the cell values), capped at M."""
        if not isinstance(f, PolyFn):
            raise TypeError("approx_evaluate integrates polynomials")
        total = PadicNumber.zero(self.p, self.M)
        min_v = None
        for (r1, r2), v in self.values.items():
            if v.is_zero():
                continue
            total = total + v * f.eval_at(r1, r2)
            min_v = v.valuation() if min_v is None else min(min_v, v.valuation())
        if min_v is None:
            return total, {"valid_mod_exponent": self.M, "error_bound": "0"}
        prec = min(self.M, self.m + min_v)
        return total.reduce_precision(prec), {
            "valid_mod_exponent": prec,
            "error_bound": f"{self.p}^-{prec}",
        }
