"""Places where the implemented forms differ from the commonly printed ones.

Every entry pairs a printed expression with the form the code derives and
uses.  Entries marked ``computed`` are re-evaluated at a fixed reference
point each time the log is built.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .algebra import CoeffVector, apply_operator
from .models import PotentialModel
from .recurrence import RecurrenceSpec, generate_polynomials
from .spectra import full_spectrum, real_roots
from .tabulated import table_check

__all__ = ["Discrepancy", "collect_discrepancies", "discrepancy_topics", "naive_series_residual"]


@dataclass(frozen=True)
class Discrepancy:
    topic: str
    printed: str
    derived: str
    kind: str          # "typo", "sign", "symbol", "table" or "convention"
    detail: str = ""

    def as_dict(self) -> dict[str, str]:
        return asdict(self)


_STATIC = (
    Discrepancy(
        "basis-span", "<x^0, x^2, ..., x^j>", "<x^0, x^1, ..., x^j>", "typo",
        "the invariant subspace contains every power up to j",
    ),
    Discrepancy(
        "oned2-gauge-sign",
        "psi = exp(-B x^2/(2 sqrt2) - C x^3/(3 sqrt2)) R",
        "psi = exp(+B x^2/(2 sqrt2) + C x^3/(3 sqrt2)) R",
        "sign",
        "only the + sign turns the Schrodinger operator into "
        "-J-^2 - sqrt2 B J0 - sqrt2 C J+ with A = -sqrt2 C (j+1)",
    ),
    Discrepancy(
        "oned2-energy", "E = eps - (j+1) B/sqrt2", "E = V0 + eps - (j+1) B/sqrt2", "typo",
        "the constant V0 of the potential shifts every level",
    ),
    Discrepancy(
        "separation-ground-identity",
        "V0 - E0 = W'' + F'' - W'^2 - F'^2 (f = 0)",
        "V0 - E0 = W'^2 - W'' + F'^2 - F'' (f = 0)",
        "sign",
    ),
    Discrepancy(
        "separation-drift-sign",
        "-R'' - 2 W' R' + (g + E0 - E + c1) R = 0; -Q'' - 2 F' Q' + (h - c1) Q = 0",
        "-R'' + 2 W' R' + (g + E0 - E + c1) R = 0; -Q'' + 2 F' Q' + (h - c1) Q = 0",
        "sign",
    ),
    Discrepancy(
        "twod1-potential",
        "V = A^2 x^4 + A B x^2 + C^2 y^2 + 2 A alpha x",
        "V = A^2 x^4 + 2 A B x^2 + C^2 y^2 - 2 A alpha x",
        "typo",
        "the derived form is the one for which exp(-A x^3/3 - B x - C y^2/2) "
        "is an eigenfunction with E0 = C - B^2 at alpha = 1",
    ),
    Discrepancy(
        "twod1-separated-equations",
        "-Q'' + 2 B y Q' - c1 Q = 0; -R'' + 2 (C + A x^2) R' + (E - E0 + c1 + 2 A x (1 - alpha)) R = 0",
        "-Q'' + 2 C y Q' - c1 Q = 0; -R'' + 2 (B + A x^2) R' + (E0 - E + c1 + 2 A x (1 - alpha)) R = 0",
        "symbol",
        "drifts follow from differentiating the ground-state exponent",
    ),
    Discrepancy(
        "twod1-y-solution",
        "Q = N1 1F1(1/2 - c1/(4B), 3/2, B y^2) + N2 1F1(-c1/(4B), 1/2, B y^2)",
        "Q = N1 y 1F1(1/2 - c1/(4C), 3/2, C y^2) + N2 1F1(-c1/(4C), 1/2, C y^2)",
        "symbol",
        "the odd solution carries a factor y; c1 = 2 C k truncates one branch at degree k",
    ),
    Discrepancy(
        "twod1-spectral-variable",
        "T R = (E0 - E - c1) R, rows tabulated in u = c1 - E0 + E",
        "T R = (E - E0 - c1) R, rows agree with u = E0 + c1 - E = -eps",
        "sign",
        "E = E0 + c1 + eps; e.g. A = 1, B = -1, j = 1 gives eps = +-2",
    ),
    Discrepancy(
        "twod2-ground-energy", "E0 = B1^2 + B2^2", "E0 = -(B1^2 + B2^2)", "sign",
        "direct substitution of exp(-A1 x^3/3 - A2 y^3/3 - B1 x - B2 y) at alpha = beta = 1",
    ),
    Discrepancy(
        "twod2-separated-equations",
        "-R'' + 2 (B1 + A1 x^2) R' + (E - E0 + c1 + 2 A1 (1 - alpha) x) = 0; "
        "-Q'' + 2 (B2 + A2 y^2) Q' - (c1 - 2 A2 (1 - beta) y) = 0",
        "-R'' + 2 (B1 + A1 x^2) R' + (E0 - E + c1 + 2 A1 (1 - alpha) x) R = 0; "
        "-Q'' + 2 (B2 + A2 y^2) Q' + (2 A2 (1 - beta) y - c1) Q = 0",
        "typo",
        "the last terms multiply R and Q",
    ),
)

_ONED2_PRINTED = {
    2: "sqrt2 (eps^3 - 2 eps B^2 - 4 B C) + 4 eps C",
    3: "4 eps^4 - 20 (B^2 - 2 sqrt2 C) eps^2 + 96 eps B C + 9 B^2 (B^2 - 4 sqrt2 C)",
}
_ONED2_DERIVED = {
    2: "eps^3 - 2 B^2 eps + 8 C^2 (up to a constant factor)",
    3: "4 eps^4 - 20 B^2 eps^2 + 192 C^2 eps + 9 B^4 (up to a constant factor)",
}

REFERENCE = {"B": 2.0, "C": 1.0}


def naive_series_residual(model: PotentialModel, j: int) -> float:
    """Largest relative residual |T R - eps R| / |R| with R = sum_m P_m(eps) x^m.

    That is the series with every extra coefficient a_m set to one; it is
    not an eigenfunction because the P_m form a left eigenvector.
    """
    m = model.constrained(j)
    spec = RecurrenceSpec(m, j)
    fam = generate_polynomials(spec)
    T = spec.operator
    worst = 0.0
    for eps in real_roots(fam.critical).real:
        R = CoeffVector([float(p(eps)) for p in fam.polys])
        res = apply_operator(T, R) - R.scale(eps)
        worst = max(worst, res.max_abs() / R.max_abs())
    return worst


def collect_discrepancies(reference: dict[str, float] | None = None) -> list[Discrepancy]:
    """Static entries plus the table rows and series check evaluated at ``reference``."""
    ref = dict(REFERENCE if reference is None else reference)
    out = list(_STATIC)
    resid = naive_series_residual(PotentialModel.create("oned1", B=1.0, C=1.0), 1)
    out.insert(1, Discrepancy(
        "series-coefficients",
        "R = sum_m a_m P_m(eps) x^m",
        "coefficients of R solve (T - eps) u = 0 by downward recurrence from u_j = 1",
        "convention",
        f"computed: with a_m = 1 at oned1 B = C = 1, j = 1, |T R - eps R| / |R| = {resid:.6g}",
    ))
    for j in (2, 3):
        model = PotentialModel.create("oned2", **ref)
        chk = table_check(model, j)
        if chk.ok:
            continue
        st = max(full_spectrum(model, j).self_test_residuals, default=0.0)
        out.append(Discrepancy(
            f"oned2-table-j{j}", _ONED2_PRINTED[j], _ONED2_DERIVED[j], "table",
            f"computed at B = {ref['B']:g}, C = {ref['C']:g}: proportionality defect "
            f"{chk.defect:.6g}; operator self-test of the generated row {st:.3g}",
        ))
    return out


def discrepancy_topics(reference: dict[str, float] | None = None) -> set[str]:
    return {d.topic for d in collect_discrepancies(reference)}
