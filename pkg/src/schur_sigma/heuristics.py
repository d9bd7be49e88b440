"""Expected-frequency model and observed-vs-expected frequency reports.

With C_k = prod_{i=1..k} (1 - p^{-i}), the expected probability of a
catalog class H among 2-generated cases is

    mu(H)      = C_inf / C_{2-m} * p^2 / |Aut(H)|
    mu_cond(H) = mu(H) / mu_inf  with  mu_inf = C_inf / C_2^2 * p^{-4}
               = C_2^2 / C_{2-m} * p^6 / |Aut(H)|,

where m is the minimal number of relations presenting H over the
rank-2 free group modulo its fourth Zassenhaus term (computed by
rel_rank with the D_4 recipe) and |Aut_sigma| = |Aut| / p^2.

All finite quantities are exact rationals; only C_inf is a truncated
product (relative error < 1e-15, truncation recorded).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


_C_INF_CACHE = {}
C_INF_METADATA = {}


def c_k(p, k):
    """C_k = prod_{i=1..k}(1 - p^-i) as an exact Fraction; k may be the
    string "inf" (or float infinity) for the converged infinite product,
    truncated once the next factor deviates from 1 by less than 1e-30.
    The truncation is deliberately much deeper than double precision so
    the stored value lies strictly below every finite C_k a caller may
    compare it against, while agreeing with the limit to ~30 digits."""
    if k == "inf" or k == float("inf"):
        got = _C_INF_CACHE.get(p)
        if got is None:
            val = Fraction(1)
            i = 1
            while Fraction(1, p ** i) >= Fraction(1, 10 ** 30):
                val *= 1 - Fraction(1, p ** i)
                i += 1
            _C_INF_CACHE[p] = val
            C_INF_METADATA[p] = {"terms": i - 1, "tail_bound": f"2*{p}^-{i}"}
        return _C_INF_CACHE[p]
    if k < 0:
        raise ValueError("C_k needs k >= 0")
    val = Fraction(1)
    for i in range(1, k + 1):
        val *= 1 - Fraction(1, p ** i)
    return val


@dataclass(frozen=True)
class ExpectedEntry:
    label: str
    alias: object
    abelianization: tuple
    m: int
    aut_order: int
    aut_sigma_order: int
    mu: Fraction
    mu_cond: Fraction


@dataclass(frozen=True)
class ExpectedModel:
    p: int
    c_values: dict               # k -> Fraction, including "inf"
    mu_sch2: Fraction            # expected probability of the 2-generated event
    entries: tuple               # ExpectedEntry per catalog entry

    def by_label(self):
        return {e.label: e for e in self.entries}


def expected_model(catalog=None):
    from . import classify, schur

    if catalog is None:
        catalog = classify.build_catalog()
    p = 3
    d4 = schur.zassenhaus_recipe(4)
    cinf = c_k(p, "inf")
    c2 = c_k(p, 2)
    mu_sch2 = cinf / c2 ** 2 / p ** 4
    entries = []
    for e in catalog:
        m = schur.rel_rank(e.group, d4)
        aut = e.aut_order
        if aut % p ** 2:
            raise AssertionError("|Aut| must be divisible by p^2")
        mu = cinf / c_k(p, 2 - m) * p ** 2 / aut
        mu_cond = c2 ** 2 / c_k(p, 2 - m) * p ** 6 / aut
        entries.append(ExpectedEntry(
            label=e.label, alias=e.gap_alias,
            abelianization=tuple(e.abelianization),
            m=m, aut_order=aut, aut_sigma_order=aut // p ** 2,
            mu=mu, mu_cond=mu_cond))
    cvals = {0: c_k(p, 0), 1: c_k(p, 1), 2: c_k(p, 2), "inf": cinf}
    return ExpectedModel(p=p, c_values=cvals, mu_sch2=mu_sch2,
                         entries=tuple(entries))


@dataclass(frozen=True)
class FrequencyRow:
    label: str
    alias: object
    abelianization: tuple
    mu_cond: Fraction
    count: int
    mu_obs: Fraction
    ratio: float


@dataclass(frozen=True)
class FrequencyReport:
    total: int
    rows: tuple                  # FrequencyRow per catalog entry

    def render_markdown(self):
        def name(r):
            if isinstance(r.alias, list):
                return f"[{r.alias[0]},{r.alias[1]}]"
            return r.label

        def ab(r):
            return "[" + ",".join(str(x) for x in r.abelianization) + "]"

        lines = [
            "| H | H_ab | mu_cond | n(H) | mu_obs | mu_obs/mu_cond |",
            "|---|------|---------|------|--------|----------------|",
        ]
        for r in self.rows:
            lines.append(
                f"| {name(r)} | {ab(r)} | {float(r.mu_cond):.5f}"
                f" | {r.count} | {float(r.mu_obs):.5f} | {r.ratio:.5f} |")
        return "\n".join(lines) + "\n"

    def to_json_dict(self):
        return {
            "total": self.total,
            "rows": [{
                "label": r.label,
                "alias": r.alias,
                "abelianization": list(r.abelianization),
                "mu_cond": [r.mu_cond.numerator, r.mu_cond.denominator],
                "count": r.count,
                "mu_obs": [r.mu_obs.numerator, r.mu_obs.denominator],
                "ratio": r.ratio,
            } for r in self.rows],
        }


def frequency_report(classified, model=None):
    """Observed-vs-expected table from (discriminant, label) pairs.

    `classified` is any iterable of (discriminant, catalog label); the
    discriminants are only counted, never interpreted.
    """
    if model is None:
        model = expected_model()
    by_label = model.by_label()
    counts = {label: 0 for label in by_label}
    total = 0
    for _, label in classified:
        if label not in counts:
            valid = ", ".join(sorted(counts))
            raise ValueError(f"unknown label {label!r}; valid labels: {valid}")
        counts[label] += 1
        total += 1
    if total == 0:
        raise ValueError("N = 0: no classified records to report on")
    rows = []
    for e in model.entries:
        n = counts[e.label]
        mu_obs = Fraction(n, total)
        rows.append(FrequencyRow(
            label=e.label, alias=e.alias,
            abelianization=e.abelianization,
            mu_cond=e.mu_cond, count=n, mu_obs=mu_obs,
            ratio=float(mu_obs / e.mu_cond)))
    return FrequencyReport(total=total, rows=tuple(rows))


__all__ = [
    "c_k", "C_INF_METADATA",
    "ExpectedEntry", "ExpectedModel", "expected_model",
    "FrequencyRow", "FrequencyReport", "frequency_report",
]
