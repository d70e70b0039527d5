"""Evaluation maps on measures and the interpolation pipeline.

The three maps that matter:

- ``rho_k``:  mu -> integral of (X1 - z1 Y1)^k (X2 - z2 Y2)^k d mu, landing in
  the bi-degree (k, k) polynomial module; Sigma_0(p)^2-equivariant.
- ``ev``:     mu -> integral of (z1 - z2)^k over X, or over the open locus X'
  where z1 - z2 is a unit.
- ``big_pi``: the Lambda-valued interpolation mu -> integral of theta(z1 - z2),
  with theta extended by zero, so only atoms with unit difference contribute.

Their interplay is exactly the content of the support-discrepancy identity

    Ev_X(U_p mu) - Ev_X'(U_p mu) = p^(k+1) Ev_X(mu)

which holds unconditionally for every measure and is the engine behind the
Euler factor (1 - alpha^(-1) p^(k+1)) appearing in ``interpolation_check``
and ``assemble_padic_L``.
"""

from dataclasses import dataclass

from .errors import (IdentityViolation, NonInvertibleEigenvalue, RouteMismatch,
                     SmallPrime)
from .iwasawa import IwasawaElement, as_weight
from .measures import AtomicMeasure
from .padic import PadicNumber, binomial
from .polyspace import TensorPoly, trivial_projection


def _require_o_coefficients(mu):
    if mu.is_lambda():
        raise ValueError("operation needs O-coefficients; specialize first")


def _moment(mu, j, l):
    """mu(z1^j z2^l), exact mod p^M via integer accumulation."""
    q = mu.p**mu.M
    total = 0
    for c, (s1, s2) in mu.atoms:
        total = (total + c.lift() * pow(s1, j, q) * pow(s2, l, q)) % q
    return total


def rho_k(mu, k):
    """The weight-k specialization of a measure: the (k, k) polynomial with
    entry (j, l) equal to (-1)^(j+l) binom(k,j) binom(k,l) mu(z1^j z2^l)."""
    _require_o_coefficients(mu)
    p, M = mu.p, mu.M
    q = p**M
    rows = []
    for j in range(k + 1):
        row = []
        for l in range(k + 1):
            c = (-1) ** (j + l) * binomial(k, j) * binomial(k, l) * _moment(mu, j, l)
            row.append(PadicNumber.from_int(c % q, p, M))
        rows.append(row)
    return TensorPoly(k, k, rows)


def ev(mu, k, region="X"):
    """Integral of (z1 - z2)^k over the region (all of X, or the unit-difference
    locus X')."""
    _require_o_coefficients(mu)
    q = mu.p**mu.M
    total = 0
    for c, (s1, s2) in mu.atoms:
        d = (s1 - s2) % q
        if region == "X'" and d % mu.p == 0:
            continue
        total = (total + c.lift() * pow(d, k, q)) % q
    return PadicNumber.from_int(total, mu.p, mu.M)


def big_pi(mu):
    """The Lambda-valued evaluation: sum over atoms with unit difference of
    coeff * [s1 - s2]; atoms with p | (s1 - s2) contribute zero."""
    if not mu.is_lambda():
        raise ValueError("big_pi needs Lambda-coefficient atoms")
    m = mu.atoms[0][0].m if mu.atoms else mu.M
    total = IwasawaElement.zero(mu.p, mu.M, m)
    for c, (s1, s2) in mu.atoms:
        d = (s1 - s2) % mu.p**mu.M
        if d % mu.p == 0:
            continue
        total = total + c.translate(d)
    return total


@dataclass(frozen=True)
class SymbolClass:
    """A symbol class is carried by the single measure the evaluation pipeline
    consumes, optionally with a declared U_p-eigenvalue; the eigen-hypothesis
    is never assumed, only tested through the implication form."""

    mu: AtomicMeasure
    declared_eigenvalue: object = None


def l_small(phi, k, check_route=None):
    """The weight-k evaluation of a symbol class: Ev_X of its measure.

    When p > k (so the factorials are invertible) the result is cross-checked
    against the Clebsch-Gordan route: the trivial projection of rho_k equals
    (-1)^k Ev_X, the sign coming from the antisymmetry of nabla.  Pass
    ``check_route=False`` to skip, or ``check_route=True`` to insist (raising
    SmallPrime when p <= k makes the route impossible).
    """
    mu = phi.mu if isinstance(phi, SymbolClass) else phi
    _require_o_coefficients(mu)
    value = ev(mu, k, "X")
    if check_route is None:
        check_route = mu.p > k
    if check_route:
        if mu.p <= k:
            raise SmallPrime(f"CG route needs p > {k}, got p = {mu.p}")
        cg = trivial_projection(rho_k(mu, k))
        expected = value * ((-1) ** k)
        if not cg.equiv(expected):
            raise RouteMismatch(
                f"CG route gave {cg!r}, expected (-1)^{k} * {value!r}")
    return value


def discrepancy_check(mu, k, raise_on_failure=True):
    """Both sides of Ev_X(U_p mu) - Ev_X'(U_p mu) = p^(k+1) Ev_X(mu), exact
    mod p^M.  The identity holds for every measure; failure signals a bug."""
    _require_o_coefficients(mu)
    nu = mu.u_p(k)
    lhs = ev(nu, k, "X") - ev(nu, k, "X'")
    rhs = ev(mu, k, "X") * (mu.p ** (k + 1))
    equal = (lhs - rhs).is_zero()
    report = {
        "identity": "up-support-discrepancy",
        "p": mu.p,
        "k": k,
        "lhs": str(lhs.reduce_precision(mu.M).lift()),
        "rhs": str(rhs.reduce_precision(mu.M).lift()),
        "equal_mod": f"{mu.p}^{mu.M}",
        "pass": equal,
    }
    if raise_on_failure and not equal:
        raise IdentityViolation(f"discrepancy identity failed: {report}")
    return report


def specialization_check(mu, k):
    """sp_k(Pi(mu)) = Ev_X'(sp_k(mu)) for a Lambda-coefficient measure: the
    commuting replacement for the interpolation square, both sides computed
    through independent code paths."""
    if not mu.is_lambda():
        raise ValueError("specialization check needs a Lambda-coefficient measure")
    lhs = big_pi(mu).sp(k)
    rhs = ev(mu.specialize(k), k, "X'")
    equal = (lhs - rhs).is_zero()
    return {
        "identity": "specialization-compatibility",
        "p": mu.p,
        "k": k,
        "lhs": str(lhs.reduce_precision(mu.M).lift()),
        "rhs": str(rhs.reduce_precision(mu.M).lift()),
        "equal_mod": f"{mu.p}^{min(lhs.M, rhs.M)}",
        "pass": equal,
    }


def _eigenvalue_at_weight(alpha, k):
    if isinstance(alpha, IwasawaElement):
        return alpha.sp(k)
    if isinstance(alpha, PadicNumber):
        return alpha
    raise TypeError(f"unsupported eigenvalue {alpha!r}")


def euler_factor(alpha_k, p, k, M):
    """(1 - alpha^(-1) p^(k+1)) in the valuation-tracked fraction model; for
    non-ordinary alpha the inverse costs 2 v(alpha) digits of precision,
    which the result reports by itself."""
    if alpha_k.is_zero():
        raise NonInvertibleEigenvalue("declared eigenvalue is zero")
    one = PadicNumber.one(p, M)
    return one - alpha_k.inverse() * (p ** (k + 1))


def interpolation_check(phi, k):
    """Two checks on a symbol class with a declared eigenvalue.

    (a) implication form: with nu = U_p(phi.mu), verify
        Ev_X'(nu) = Ev_X(nu) - p^(k+1) Ev_X(phi.mu)
        (the unconditional restatement of the eigen-corollary);
    (b) declared form: report (1 - alpha^(-1) p^(k+1)) Ev_X(phi.mu) as the
        weight-k specialization of the interpolated L-value under the
        declared eigen-hypothesis, together with its precision.
    """
    mu = phi.mu
    _require_o_coefficients(mu)
    p, M = mu.p, mu.M
    nu = mu.u_p(k)
    lhs = ev(nu, k, "X'")
    rhs = ev(nu, k, "X") - ev(mu, k, "X") * (p ** (k + 1))
    implication_ok = (lhs - rhs).is_zero()
    alpha_k = _eigenvalue_at_weight(phi.declared_eigenvalue, k)
    factor = euler_factor(alpha_k, p, k, M)
    value = factor * ev(mu, k, "X")
    return {
        "identity": "interpolated-euler-factor",
        "p": p,
        "k": k,
        "implication_lhs": str(lhs.lift()),
        "implication_rhs": str(rhs.reduce_precision(lhs.M).lift()),
        "implication_pass": implication_ok,
        "eigenvalue_valuation": alpha_k.valuation(),
        "euler_factor": str(factor.lift()),
        "l_value": str(value.lift()),
        "value_precision": f"{p}^{value.M}",
        "precision_loss": 2 * alpha_k.valuation(),
        "pass": implication_ok,
    }


def assemble_padic_L(phi, alpha, weights, r=None, enforce_filter=False):
    """Assemble the interpolated element and its specialization table.

    Emits L = Pi(phi.mu) and, per weight k, the columns sp_k(L) and
    (1 - sp_k(alpha)^(-1) p^(k+1)) * Ev_X(sp_k(phi.mu)); the consistency
    column is the implication form, which holds for every measure.  The
    "L_alg" column is the synthetic Ev_X value and the normalization constant
    c_P is fixed to 1 for synthetic data; both facts are recorded in the
    report rather than hidden.

    With ``enforce_filter`` the weights must satisfy k = r mod (p - 1) (the
    arithmetic-progression filter of the weight space); violations raise
    ValueError, which the CLI maps to a configuration error.
    """
    mu = phi.mu
    if not mu.is_lambda():
        raise ValueError("assemble_padic_L consumes Lambda-coefficient classes")
    p, M = mu.p, mu.M
    if enforce_filter:
        if r is None:
            raise ValueError("the weight filter needs a residue r")
        bad = [k for k in weights if (k - r) % (p - 1)]
        if bad:
            raise ValueError(f"weights {bad} violate k = {r} mod {p - 1}")
    big_L = big_pi(mu)
    rows = []
    all_ok = True
    for k in weights:
        mu_k = mu.specialize(k)
        sp_L = big_L.sp(k)
        ev_x = ev(mu_k, k, "X")
        ev_xp = ev(mu_k, k, "X'")
        # consistency column: the implication form on the specialized class
        nu = mu_k.u_p(k)
        imp_lhs = ev(nu, k, "X'")
        imp_rhs = ev(nu, k, "X") - ev_x * (p ** (k + 1))
        implication_ok = (imp_lhs - imp_rhs).is_zero()
        # specialization route: sp_k(Pi) against Ev_X' of the specialization
        spec_ok = (sp_L - ev_xp).is_zero()
        alpha_k = _eigenvalue_at_weight(alpha, k)
        factor = euler_factor(alpha_k, p, k, M)
        declared = factor * ev_x
        agree = (sp_L - declared).is_zero()
        # eigen-consistency of the declared alpha on the difference functional
        diff_mu = ev_x - ev_xp
        diff_nu = ev(nu, k, "X") - imp_lhs
        eigen_ok = (diff_nu - alpha_k * diff_mu).is_zero()
        all_ok = all_ok and implication_ok and spec_ok
        rows.append({
            "k": k,
            "sp_L": str(sp_L.lift()),
            "sp_L_precision": f"{p}^{sp_L.M}",
            "euler_factor": str(factor.lift()),
            "L_alg_synthetic": str(ev_x.lift()),
            "declared_product": str(declared.lift()),
            "declared_precision": f"{p}^{declared.M}",
            "consistency_implication": implication_ok,
            "specialization_consistent": spec_ok,
            "declared_agrees": agree,
            "eigen_hypothesis_consistent": eigen_ok,
        })
    return {
        "suite": "assemble-padic-L",
        "p": p,
        "M": M,
        "r": r,
        "filter_enforced": enforce_filter,
        "c_P": "1 (synthetic normalization)",
        "big_L": big_L.to_json(),
        "rows": rows,
        "passed": all_ok,
    }
