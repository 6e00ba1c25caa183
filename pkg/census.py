# selmer/census.py
import logging
import math
import time
from collections import Counter
from datetime import datetime
from enum import Enum
from fractions import Fraction
from multiprocessing import Pool
from typing import Optional, Sequence, Union

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from arith import FactoredInteger, SieveCache, factor_block, jacobi
from exceptions import DomainError, UsageError
from graphs import even_partition_count, graph_G, graph_G_prime
from selmer import (
    PHIHAT_OFFSET_NOTE,
    BsdSet,
    Coverage,
    bsd_status,
    selmer_profile,
    selmer_trivial_2mod8,
    selmer_trivial_3mod8,
)

logger = logging.getLogger(__name__)

BLOCK_SPAN = 1 << 20
MAX_CONSTANT_K = 64
SYMBOL_PATTERN_KS = (2, 3)

Number = Union[Fraction, float]


# ---------------------------------------------------------------- constants

def _check_k(k: int, minimum: int = 1) -> None:
    if not minimum <= k <= MAX_CONSTANT_K:
        raise DomainError(f"k={k} out of range {minimum}..{MAX_CONSTANT_K}")


def q(k: int) -> Fraction:
    _check_k(k)
    return math.prod((1 - Fraction(1, 2 ** (2 * j - 1)) for j in range(1, k // 2 + 1)), start=Fraction(1))


def d(m: int, s: int) -> Fraction:
    # product index runs to s-1
    if m < 0 or s < 0:
        raise DomainError(f"d(m, s) needs m, s >= 0, got ({m}, {s})")
    return math.prod((Fraction(2 ** m - 2 ** i, 2 ** s - 2 ** i) for i in range(s)), start=Fraction(1))


def q_ke(k: int, e: int) -> Fraction:
    _check_k(k)
    if not 0 <= e <= k - 1:
        raise DomainError(f"q(k, e) needs 0 <= e <= k-1, got e={e} for k={k}")
    power = Fraction(2) ** (math.comb(k - e, 2) - math.comb(k, 2))
    tail = math.prod((1 - Fraction(1, 2 ** (2 * j - 1)) for j in range(1, (k - e) // 2 + 1)), start=Fraction(1))
    return power * d(k - 1, e) * tail


def p_full_rank(k: int) -> Fraction:
    _check_k(k + 1)
    return q_ke(k + 1, 0)


def p_full_rank_product(k: int) -> Fraction:
    _check_k(k + 1)
    return math.prod((1 - Fraction(1, 2 ** (2 * j - 1)) for j in range(1, (k + 1) // 2 + 1)), start=Fraction(1))


def c3(k: int) -> Fraction:
    _check_k(k)
    return Fraction(k, 2 ** (k - 1)) * q(k)


def c2_printed(k: int) -> Fraction:
    _check_k(k, 2)
    return Fraction(2 ** (k - 1) - 1, 2 ** (2 * k - 2)) * q(k)


def c2_derived(k: int) -> Fraction:
    _check_k(k, 2)
    return Fraction(2 ** (k - 1) - 1, 2 ** (2 * k - 3)) * q(k - 1)


def b2_share(k_odd: int) -> Fraction:
    # k_odd = omega(n/2)
    _check_k(k_odd)
    return Fraction(2 ** k_odd - 1, 2 ** k_odd) * q(k_odd)


def _lambda_mp():
    with mpmath.workdps(40):
        product = mpmath.mpf(1)
        j = 1
        while True:
            step = mpmath.mpf(2) ** -j
            if step < mpmath.mpf(10) ** -17:
                break
            product /= 1 + step
            j += 1
        return +product


def lam() -> float:
    return float(_lambda_mp())


def d_r(r: int) -> float:
    if r < 0:
        raise DomainError(f"d_r needs r >= 0, got {r}")
    with mpmath.workdps(40):
        denominator = math.prod(2 ** j - 1 for j in range(1, r + 1))
        return float(_lambda_mp() * mpmath.mpf(2) ** r / denominator)


def landau_main_term(X: float, k: int) -> float:
    _check_k(k)
    if X <= math.e:
        raise DomainError(f"main terms need X > e, got {X}")
    return X * math.log(math.log(X)) ** (k - 1) / (math.factorial(k - 1) * math.log(X))


def reduced_residues(m: int) -> list[int]:
    if m < 2:
        raise DomainError(f"modulus must be at least 2, got {m}")
    return [r for r in range(1, m) if math.gcd(r, m) == 1]


def multinomial_share(m: int, counts: Sequence[int]) -> Fraction:
    k = sum(counts)
    coefficient = math.factorial(k) // math.prod(math.factorial(a) for a in counts)
    return Fraction(coefficient, len(reduced_residues(m)) ** k)


def pik_main_term(X: float, m: int, counts: Sequence[int]) -> float:
    return float(multinomial_share(m, counts)) * landau_main_term(X, sum(counts))


# coefficients c with |class| ~ c * X (log log X)^(k-1) / log X
CLASS_DENSITIES = {
    "S3": lambda k: Fraction(1, 4 * math.factorial(k - 1)),
    "R": lambda k: Fraction(1, 2 ** (k + 1) * math.factorial(k - 1)),
    "K": lambda k: Fraction(1, 4 ** k * math.factorial(k - 1)),
    "B3": lambda k: Fraction(k, 4 ** k * math.factorial(k - 1)),
    "B2": lambda k: Fraction(1, 2 ** (k + 1) * math.factorial(k - 1)),
    "D1": lambda k: Fraction(1, 4 ** k * math.factorial(k - 1)),
}


def class_density(name: str, k: int) -> Fraction:
    _check_k(k)
    try:
        return CLASS_DENSITIES[name](k)
    except KeyError:
        raise DomainError(f"unknown class {name!r}; expected one of {sorted(CLASS_DENSITIES)}") from None


def class_main_term(name: str, X: float, k: int) -> float:
    return float(class_density(name, k) * math.factorial(k - 1)) * landau_main_term(X, k)


def s2_main_term(X: float, k: int) -> float:
    # k counts the prime 2
    _check_k(k, 2)
    return landau_main_term(X, k - 1) / 2


def constant(name: str, **params) -> Number:
    table = {
        "q": lambda: q(params["k"]),
        "q_ke": lambda: q_ke(params["k"], params["e"]),
        "d": lambda: d(params["m"], params["s"]),
        "p": lambda: p_full_rank(params["k"]),
        "c3": lambda: c3(params["k"]),
        "c2": lambda: c2_printed(params["k"]),
        "c2_derived": lambda: c2_derived(params["k"]),
        "b2_share": lambda: b2_share(params["k"]),
        "lambda": lam,
        "d_r": lambda: d_r(params["r"]),
        "landau": lambda: landau_main_term(params["X"], params["k"]),
        "pik": lambda: pik_main_term(params["X"], params["m"], params["counts"]),
        "class_density": lambda: class_density(params["cls"], params["k"]),
    }
    if name not in table:
        raise DomainError(f"unknown constant {name!r}; expected one of {sorted(table)}")
    try:
        return table[name]()
    except KeyError as exc:
        raise DomainError(f"constant {name!r} is missing parameter {exc.args[0]!r}") from None


# ------------------------------------------------------------------- specs

class Statistic(str, Enum):
    SELMER_TRIVIAL = "SELMER_TRIVIAL"
    GRAPH_ODD_DISTRIBUTION = "GRAPH_ODD_DISTRIBUTION"
    BSD_VERIFIED = "BSD_VERIFIED"
    PIK_COUNT = "PIK_COUNT"
    SYMBOL_PATTERN = "SYMBOL_PATTERN"
    SELMER_DISTRIBUTION = "SELMER_DISTRIBUTION"


class ResidueFilter(BaseModel):
    """Per-prime congruence constraints.

    ``allowed``: every odd prime factor lies in one of these classes.
    ``ordered``: the ascending prime factors lie in these classes, in order.
    ``counts``: multiplicities over the reduced residues of ``modulus``
    (the pattern a pi_k census counts; it does not shrink the denominator).
    ``reference``: a second pattern of the same k counted alongside ``counts``.
    """

    model_config = ConfigDict(frozen=True)

    modulus: int = 8
    allowed: Optional[tuple[int, ...]] = None
    ordered: Optional[tuple[int, ...]] = None
    counts: Optional[tuple[int, ...]] = None
    reference: Optional[tuple[int, ...]] = None

    @field_validator("modulus")
    @classmethod
    def check_modulus(cls, value: int) -> int:
        if value < 2:
            raise ValueError("modulus must be at least 2")
        return value

    @model_validator(mode="after")
    def check_counts(self):
        width = len(reduced_residues(self.modulus))
        for name, pattern in (("counts", self.counts), ("reference", self.reference)):
            if pattern is None:
                continue
            if len(pattern) != width:
                raise ValueError(f"{name} needs {width} entries for modulus {self.modulus}")
            if any(a < 0 for a in pattern) or sum(pattern) < 1:
                raise ValueError(f"{name} must be non-negative with a positive sum")
        if self.reference is not None:
            if self.counts is None or sum(self.reference) != sum(self.counts):
                raise ValueError("reference must accompany counts with the same total")
        return self


class CensusSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    limit: int
    k: int
    statistic: Statistic
    class_mod8: Optional[int] = None
    factor_residue_filter: Optional[ResidueFilter] = None
    start: int = 1
    threads: int = 1
    seed: int = 0

    @model_validator(mode="after")
    def check_ranges(self):
        if self.limit < 2:
            raise ValueError("X must be at least 2")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.class_mod8 is not None and self.class_mod8 not in (1, 2, 3, 5, 7):
            raise ValueError("class_mod8 must be odd or equal to 2")
        if not 1 <= self.start <= self.limit:
            raise ValueError("start must lie in 1..X")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        return self

    def same_census(self, other: "CensusSpec") -> bool:
        fields = ("k", "statistic", "class_mod8", "factor_residue_filter")
        return all(getattr(self, f) == getattr(other, f) for f in fields)


class Theory(BaseModel):
    values: dict[str, float] = Field(default_factory=dict)
    exact: dict[str, str] = Field(default_factory=dict)
    # comparison name -> (observed key, theory key)
    comparisons: dict[str, tuple[str, str]] = Field(default_factory=dict)
    count_comparisons: dict[str, tuple[str, str]] = Field(default_factory=dict)
    conditionals: dict[str, tuple[str, str]] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)

    def put(self, name: str, value: Number) -> None:
        self.values[name] = float(value)
        if isinstance(value, Fraction):
            self.exact[name] = str(value)


class CensusReport(BaseModel):
    spec: CensusSpec
    denominator_count: int
    numerator_counts: dict[str, int]
    theory: Theory
    notes: tuple[str, ...] = ()
    runtime_seconds: float = 0.0
    created_at: datetime = Field(default_factory=datetime.utcnow)

    @model_validator(mode="after")
    def check_counts(self):
        for label, count in self.numerator_counts.items():
            if not 0 <= count <= self.denominator_count:
                raise ValueError(f"bucket {label} has {count} > denominator {self.denominator_count}")
        return self

    @property
    def X(self) -> int:
        return self.spec.limit

    @property
    def theoretical_values(self) -> dict[str, float]:
        return self.theory.values

    def _observed(self, key: str) -> tuple[Optional[float], int]:
        if key in self.theory.conditionals:
            top, bottom = self.theory.conditionals[key]
            base = self.numerator_counts.get(bottom, 0)
            return (self.numerator_counts.get(top, 0) / base if base else None), base
        if key == "denominator":
            return float(self.denominator_count), self.denominator_count
        count = self.numerator_counts.get(key, 0)
        return (count / self.denominator_count if self.denominator_count else None), self.denominator_count

    @property
    def empirical_proportions(self) -> dict[str, Optional[float]]:
        return {label: self._observed(label)[0] for label in self.numerator_counts}

    @property
    def conditional_proportions(self) -> dict[str, Optional[float]]:
        return {label: self._observed(label)[0] for label in self.theory.conditionals}

    @property
    def ratios(self) -> dict[str, Optional[float]]:
        out = {}
        for name, (observed, target) in {**self.theory.comparisons, **self.theory.count_comparisons}.items():
            value, _ = self._observed(observed)
            expected = self.theory.values.get(target)
            out[name] = value / expected if value is not None and expected else None
        return out

    @property
    def z_scores(self) -> dict[str, Optional[float]]:
        out = {}
        for name, (observed, target) in self.theory.comparisons.items():
            value, size = self._observed(observed)
            expected = self.theory.values.get(target)
            if value is None or expected is None or not 0 < expected < 1 or size == 0:
                out[name] = None
                continue
            out[name] = (value - expected) / math.sqrt(expected * (1 - expected) / size)
        return out

    def merge(self, other: "CensusReport") -> "CensusReport":
        if not self.spec.same_census(other.spec):
            raise UsageError("only reports of the same census can be merged")
        low, high = sorted((self.spec, other.spec), key=lambda spec: spec.start)
        if high.start != low.limit + 1:
            raise UsageError(
                f"merged reports must cover adjacent ranges, got [{low.start}, {low.limit}] and [{high.start}, {high.limit}]"
            )
        spec = self.spec.model_copy(
            update={"start": min(self.spec.start, other.spec.start), "limit": max(self.spec.limit, other.spec.limit)}
        )
        counts = Counter(self.numerator_counts)
        counts.update(other.numerator_counts)
        return finalize_report(
            spec,
            self.denominator_count + other.denominator_count,
            counts,
            runtime=self.runtime_seconds + other.runtime_seconds,
            created_at=max(self.created_at, other.created_at),
        )

    def to_document(self, with_timing: bool = False) -> dict:
        theory = {name: self.theory.exact.get(name, value) for name, value in sorted(self.theory.values.items())}
        document = {
            "spec": self.spec.model_dump(mode="json", exclude={"threads"}),
            "denominator": self.denominator_count,
            "buckets": dict(sorted(self.numerator_counts.items())),
            "proportions": dict(sorted(self.empirical_proportions.items())),
            "conditional": dict(sorted(self.conditional_proportions.items())),
            "theory": theory,
            "ratios": dict(sorted(self.ratios.items())),
            "z_scores": dict(sorted(self.z_scores.items())),
            "notes": list(self.notes),
        }
        if with_timing:
            document["runtime_seconds"] = self.runtime_seconds
            document["created_at"] = self.created_at.isoformat()
        return document


# ------------------------------------------------------------------ theory

def _sign_labels(k: int) -> list[str]:
    pairs = math.comb(k, 2)
    return ["".join("-" if (code >> i) & 1 else "+" for i in range(pairs)) for code in range(2 ** pairs)]


def _empty_buckets(spec: CensusSpec) -> dict[str, int]:
    if spec.statistic == Statistic.SELMER_TRIVIAL:
        return {"pattern": 0, "trivial": 0}
    if spec.statistic == Statistic.GRAPH_ODD_DISTRIBUTION:
        return {f"e={e}": 0 for e in range(spec.k)}
    if spec.statistic == Statistic.BSD_VERIFIED:
        return {"member": 0, "graph_odd": 0, "verified": 0}
    if spec.statistic == Statistic.PIK_COUNT:
        if spec.factor_residue_filter and spec.factor_residue_filter.reference is not None:
            return {"pattern": 0, "reference": 0}
        return {"pattern": 0}
    if spec.statistic == Statistic.SYMBOL_PATTERN:
        return {label: 0 for label in _sign_labels(spec.k)}
    return {"not_covered": 0}


def _selmer_trivial_theory(spec: CensusSpec, theory: Theory, X: int) -> None:
    k = spec.k
    theory.conditionals["trivial|pattern"] = ("trivial", "pattern")
    if spec.class_mod8 == 3:
        theory.put("c3(k)", c3(k))
        theory.put("q(k)", q(k))
        theory.put("pattern_share", Fraction(k, 2 ** (k - 1)))
        theory.comparisons["trivial~c3(k)"] = ("trivial", "c3(k)")
        theory.comparisons["pattern~pattern_share"] = ("pattern", "pattern_share")
        theory.comparisons["trivial|pattern~q(k)"] = ("trivial|pattern", "q(k)")
        if X > math.e:
            theory.put("S(X,3,k)_main_term", class_main_term("S3", X, k))
            theory.count_comparisons["denominator~main_term"] = ("denominator", "S(X,3,k)_main_term")
        return
    if k < 2:
        theory.notes.append("no theoretical constant for n = 2 alone (k must count the prime 2 and one odd prime)")
        return
    theory.put("c2(k)", c2_printed(k))
    theory.put("c2_derived(k)", c2_derived(k))
    theory.put("q(k-1)", q(k - 1))
    theory.put("pattern_share", Fraction(2 ** (k - 1) - 1, 2 ** (2 * k - 3)))
    theory.comparisons["trivial~c2(k)"] = ("trivial", "c2(k)")
    theory.comparisons["trivial~c2_derived(k)"] = ("trivial", "c2_derived(k)")
    theory.comparisons["pattern~pattern_share"] = ("pattern", "pattern_share")
    theory.comparisons["trivial|pattern~q(k-1)"] = ("trivial|pattern", "q(k-1)")
    if X > math.e:
        theory.put("S(X,2,k)_main_term", s2_main_term(X, k))
        theory.count_comparisons["denominator~main_term"] = ("denominator", "S(X,2,k)_main_term")


def _bsd_theory(spec: CensusSpec, theory: Theory, X: int) -> None:
    k = spec.k
    theory.conditionals["verified|member"] = ("verified", "member")
    if spec.class_mod8 == 3:
        name, share, main = "B3", q(k), ("B3", k)
    elif spec.class_mod8 == 2:
        if k < 2:
            theory.notes.append("B2 needs at least one odd prime factor")
            return
        name, share, main = "B2", b2_share(k - 1), ("B2", k - 1)
    else:
        name, share, main = "D1", q(k) / 2, ("D1", k)
        theory.notes.append("D1 share is a lower bound: only the sufficient direction is verified")
    theory.put(f"{name}_verified_share", share)
    theory.comparisons[f"verified|member~{name}"] = ("verified|member", f"{name}_verified_share")
    if X > math.e:
        theory.put(f"{name}(X,k)_main_term", class_main_term(main[0], X, main[1]))
        theory.count_comparisons["member~main_term"] = ("member", f"{name}(X,k)_main_term")


def _theory(spec: CensusSpec) -> Theory:
    theory = Theory()
    X, k = spec.limit, spec.k
    if k > MAX_CONSTANT_K:
        theory.notes.append(f"no theoretical constants beyond k={MAX_CONSTANT_K}")
        return theory
    if spec.statistic == Statistic.SELMER_TRIVIAL:
        _selmer_trivial_theory(spec, theory, X)
    elif spec.statistic == Statistic.GRAPH_ODD_DISTRIBUTION:
        for e in range(k):
            theory.put(f"q({k},{e})", q_ke(k, e))
            theory.comparisons[f"e={e}~q({k},{e})"] = (f"e={e}", f"q({k},{e})")
        allowed = spec.factor_residue_filter.allowed if spec.factor_residue_filter else None
        modulus = spec.factor_residue_filter.modulus if spec.factor_residue_filter else 8
        if not (allowed and modulus % 4 == 0 and all(a % 4 == 1 for a in allowed)):
            theory.notes.append("q(k,e) describes undirected graphs; restrict primes to 1 mod 4 for a like-for-like comparison")
    elif spec.statistic == Statistic.BSD_VERIFIED:
        _bsd_theory(spec, theory, X)
    elif spec.statistic == Statistic.PIK_COUNT:
        residue_filter = spec.factor_residue_filter
        theory.put("pattern_share", multinomial_share(residue_filter.modulus, residue_filter.counts))
        theory.comparisons["pattern~pattern_share"] = ("pattern", "pattern_share")
        if X > math.e:
            theory.put("pi_k_main_term", pik_main_term(X, residue_filter.modulus, residue_filter.counts))
            theory.put("landau_main_term", landau_main_term(X, k))
            theory.count_comparisons["pattern~main_term"] = ("pattern", "pi_k_main_term")
            theory.count_comparisons["denominator~landau"] = ("denominator", "landau_main_term")
        if residue_filter.reference is not None:
            ratio = multinomial_share(residue_filter.modulus, residue_filter.counts) / multinomial_share(
                residue_filter.modulus, residue_filter.reference
            )
            theory.put("multinomial_ratio", ratio)
            theory.conditionals["pattern|reference"] = ("pattern", "reference")
            theory.count_comparisons["pattern|reference~multinomial_ratio"] = ("pattern|reference", "multinomial_ratio")
    elif spec.statistic == Statistic.SYMBOL_PATTERN:
        share = Fraction(1, 2 ** math.comb(k, 2))
        theory.put("pattern_share", share)
        for label in _sign_labels(k):
            theory.comparisons[f"{label}~pattern_share"] = (label, "pattern_share")
    elif spec.statistic == Statistic.SELMER_DISTRIBUTION:
        phi_shift = 1 if spec.class_mod8 == 5 else 2
        for r in range(k):
            theory.put(f"q({k},{r})", q_ke(k, r))
            theory.comparisons[f"s_phi={r + phi_shift}~q({k},{r})"] = (f"s_phi={r + phi_shift}", f"q({k},{r})")
            theory.comparisons[f"s_phihat={r}~q({k},{r})"] = (f"s_phihat={r}", f"q({k},{r})")
        theory.notes.append(PHIHAT_OFFSET_NOTE)
    return theory


def _supported_c2(report: CensusReport) -> Optional[str]:
    values = report.theory.values
    if "c2(k)" not in values or not report.denominator_count:
        return None
    observed = report.numerator_counts.get("trivial", 0) / report.denominator_count
    best = min(("c2(k)", "c2_derived(k)"), key=lambda name: abs(observed - values[name]))
    return f"observed share {observed:.6f} is closer to {best} = {report.theory.exact[best]}"


def _pik_ratio_note(report: CensusReport) -> Optional[str]:
    if "multinomial_ratio" not in report.theory.values:
        return None
    observed = report.conditional_proportions["pattern|reference"]
    if observed is None:
        return None
    return (
        f"observed pattern/reference ratio {observed:.6f} against multinomial ratio "
        f"{report.theory.exact['multinomial_ratio']} (asymptotic, convergence in X is slow)"
    )


def finalize_report(
    spec: CensusSpec,
    denominator: int,
    counts: dict[str, int],
    runtime: float = 0.0,
    created_at: Optional[datetime] = None,
) -> CensusReport:
    buckets = _empty_buckets(spec)
    buckets.update(counts)
    theory = _theory(spec)
    notes = list(theory.notes)
    if denominator == 0:
        notes.append("empty class: no n in range satisfies the filters (denominator 0)")
    report = CensusReport(
        spec=spec,
        denominator_count=denominator,
        numerator_counts=buckets,
        theory=theory,
        notes=tuple(notes),
        runtime_seconds=runtime,
        created_at=created_at or datetime.utcnow(),
    )
    extra = tuple(note for note in (_supported_c2(report), _pik_ratio_note(report)) if note)
    if extra:
        report = report.model_copy(update={"notes": report.notes + extra})
    return report


# ------------------------------------------------------------------ blocks

def _candidates(spec: CensusSpec, lo: int, hi: int) -> np.ndarray:
    lo = max(lo, 2)
    if lo >= hi:
        return np.zeros(0, dtype=np.int64)
    if spec.class_mod8 is None:
        return np.arange(lo, hi, dtype=np.int64)
    first = lo + (spec.class_mod8 - lo) % 8
    return np.arange(first, hi, 8, dtype=np.int64)


def _residue_mask(residue_filter: Optional[ResidueFilter], primes: np.ndarray) -> np.ndarray:
    keep = np.ones(primes.shape[0], dtype=bool)
    if residue_filter is None:
        return keep
    residues = primes % residue_filter.modulus
    if residue_filter.allowed is not None:
        ok = (primes <= 2) | np.isin(residues, residue_filter.allowed)
        keep &= ok.all(axis=1)
    if residue_filter.ordered is not None:
        width = len(residue_filter.ordered)
        keep &= (residues[:, :width] == np.array(residue_filter.ordered, dtype=np.int64)).all(axis=1)
    return keep


def _pik_pattern(modulus: int, counts: Sequence[int], primes: np.ndarray) -> int:
    residues = primes % modulus
    matches = np.ones(primes.shape[0], dtype=bool)
    for r, a in zip(reduced_residues(modulus), counts):
        matches &= (residues == r).sum(axis=1) == a
    return int(matches.sum())


def _pik_tally(residue_filter: ResidueFilter, primes: np.ndarray) -> Counter:
    counts = Counter({"pattern": _pik_pattern(residue_filter.modulus, residue_filter.counts, primes)})
    if residue_filter.reference is not None:
        counts["reference"] = _pik_pattern(residue_filter.modulus, residue_filter.reference, primes)
    return counts


def _tally(spec: CensusSpec, rows: list[list[int]]) -> Counter:
    counts = Counter()
    statistic = spec.statistic
    for primes in rows:
        n = FactoredInteger.from_primes(primes)
        if statistic == Statistic.SELMER_TRIVIAL:
            check = selmer_trivial_3mod8(n) if spec.class_mod8 == 3 else selmer_trivial_2mod8(n)
            counts["pattern"] += check.pattern_holds
            counts["trivial"] += bool(check.trivial)
        elif statistic == Statistic.GRAPH_ODD_DISTRIBUTION:
            graph = graph_G_prime(n.odd_factors) if n.is_even else graph_G(n.factors)
            counts[f"e={even_partition_count(graph).bit_length() - 2}"] += 1
        elif statistic == Statistic.BSD_VERIFIED:
            status = bsd_status(n)
            if status.set != BsdSet.NONE:
                counts["member"] += 1
                counts["graph_odd"] += bool(status.graph_odd)
                counts["verified"] += status.verified
        elif statistic == Statistic.SYMBOL_PATTERN:
            label = "".join(
                "-" if jacobi(primes[i], primes[j]) == -1 else "+"
                for i in range(len(primes))
                for j in range(i + 1, len(primes))
            )
            counts[label] += 1
        elif statistic == Statistic.SELMER_DISTRIBUTION:
            profile = selmer_profile(n)
            if profile.coverage in (Coverage.FJ_CASE_1, Coverage.FJ_CASE_2):
                counts[f"s_phi={profile.s_phi}"] += 1
                counts[f"s_phihat={profile.s_phihat}"] += 1
            else:
                counts["not_covered"] += 1
    return counts


def census_block(spec: CensusSpec, lo: int, hi: int, cache: SieveCache) -> tuple[int, Counter]:
    values = _candidates(spec, lo, hi)
    if not values.size:
        return 0, Counter()
    block = factor_block(values, cache)
    keep = block.squarefree & (block.omega == spec.k)
    if not keep.any():
        return 0, Counter()
    primes = block.primes[keep][:, : spec.k]
    keep = _residue_mask(spec.factor_residue_filter, primes)
    primes = primes[keep]
    denominator = int(primes.shape[0])
    if spec.statistic == Statistic.PIK_COUNT:
        return denominator, _pik_tally(spec.factor_residue_filter, primes)
    logger.debug("block [%d, %d): %d candidates", lo, hi, denominator)
    return denominator, _tally(spec, primes.tolist())


_WORKER_CACHE: Optional[SieveCache] = None


def _init_worker(cache: SieveCache) -> None:
    global _WORKER_CACHE
    _WORKER_CACHE = cache


def _run_block(task: tuple[CensusSpec, int, int]) -> tuple[int, Counter]:
    spec, lo, hi = task
    return census_block(spec, lo, hi, _WORKER_CACHE)


def block_ranges(start: int, stop: int, span: int = BLOCK_SPAN) -> list[tuple[int, int]]:
    ranges = []
    lo = start
    while lo <= stop:
        hi = min((lo // span + 1) * span, stop + 1)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def _check_spec(spec: CensusSpec, cache: SieveCache) -> None:
    if spec.limit > cache.limit:
        raise DomainError(f"census X={spec.limit} exceeds the sieve limit {cache.limit}")
    if spec.statistic == Statistic.SELMER_TRIVIAL and spec.class_mod8 not in (2, 3):
        raise UsageError("SELMER_TRIVIAL censuses run over class 3 or class 2 (mod 8)")
    if spec.statistic == Statistic.BSD_VERIFIED and spec.class_mod8 not in (1, 2, 3):
        raise UsageError("BSD_VERIFIED censuses run over class 1 (D1), 2 (B2) or 3 (B3)")
    if spec.statistic == Statistic.SELMER_DISTRIBUTION and spec.class_mod8 not in (1, 5):
        raise UsageError("SELMER_DISTRIBUTION censuses run over class 5 (R) or class 1 (K)")
    if spec.statistic == Statistic.PIK_COUNT:
        residue_filter = spec.factor_residue_filter
        if residue_filter is None or residue_filter.counts is None:
            raise UsageError("PIK_COUNT needs a residue filter with counts")
        if sum(residue_filter.counts) != spec.k:
            raise UsageError(f"counts sum to {sum(residue_filter.counts)}, expected k={spec.k}")
    if spec.statistic == Statistic.SYMBOL_PATTERN:
        residue_filter = spec.factor_residue_filter
        if spec.k not in SYMBOL_PATTERN_KS:
            raise UsageError(f"symbol censuses support k in {SYMBOL_PATTERN_KS}, got {spec.k}")
        if residue_filter is None or residue_filter.ordered is None or len(residue_filter.ordered) != spec.k:
            raise UsageError("SYMBOL_PATTERN needs one residue class per prime")


def run_census(spec: CensusSpec, cache: SieveCache) -> CensusReport:
    _check_spec(spec, cache)
    started = time.perf_counter()
    tasks = [(spec, lo, hi) for lo, hi in block_ranges(spec.start, spec.limit, BLOCK_SPAN)]
    if spec.threads == 1 or len(tasks) == 1:
        results = [census_block(spec, lo, hi, cache) for _, lo, hi in tasks]
    else:
        with Pool(processes=spec.threads, initializer=_init_worker, initargs=(cache,)) as pool:
            results = pool.map(_run_block, tasks)
    denominator = 0
    counts = Counter()
    for block_denominator, block_counts in results:
        denominator += block_denominator
        counts.update(block_counts)
    if denominator == 0:
        logger.warning("census %s over [%d, %d] found no n in class", spec.statistic.value, spec.start, spec.limit)
    return finalize_report(spec, denominator, dict(counts), runtime=time.perf_counter() - started)


def pik_census(
    X: int,
    m: int,
    counts: Sequence[int],
    cache: SieveCache,
    threads: int = 1,
    reference: Optional[Sequence[int]] = None,
) -> CensusReport:
    residues = reduced_residues(m)
    for pattern in (counts, reference):
        if pattern is None:
            continue
        if len(pattern) != len(residues) or any(a < 0 for a in pattern) or sum(pattern) < 1:
            raise UsageError(f"counts {list(pattern)} must give one non-negative entry per residue in {residues}")
    if reference is not None and sum(reference) != sum(counts):
        raise UsageError(f"reference {list(reference)} must have the same k as counts {list(counts)}")
    spec = CensusSpec(
        limit=X,
        k=sum(counts),
        statistic=Statistic.PIK_COUNT,
        factor_residue_filter=ResidueFilter(
            modulus=m, counts=tuple(counts), reference=tuple(reference) if reference is not None else None
        ),
        threads=threads,
    )
    return run_census(spec, cache)


def symbol_independence_census(
    X: int, k: int, delta: Sequence[int], cache: SieveCache, threads: int = 1
) -> CensusReport:
    if k not in SYMBOL_PATTERN_KS:
        raise UsageError(f"symbol censuses support k in {SYMBOL_PATTERN_KS}, got {k}")
    if len(delta) != k or any(r not in (1, 3, 5, 7) for r in delta):
        raise UsageError(f"delta must give {k} residues from 1, 3, 5, 7, got {list(delta)}")
    spec = CensusSpec(
        limit=X,
        k=k,
        statistic=Statistic.SYMBOL_PATTERN,
        factor_residue_filter=ResidueFilter(modulus=8, ordered=tuple(delta)),
        threads=threads,
    )
    return run_census(spec, cache)


def selmer_distribution_spec(X: int, k: int, family: str, threads: int = 1) -> CensusSpec:
    if family == "R":
        return CensusSpec(
            limit=X, k=k, statistic=Statistic.SELMER_DISTRIBUTION, class_mod8=5,
            factor_residue_filter=ResidueFilter(modulus=4, allowed=(1,)), threads=threads,
        )
    if family == "K":
        return CensusSpec(
            limit=X, k=k, statistic=Statistic.SELMER_DISTRIBUTION, class_mod8=1,
            factor_residue_filter=ResidueFilter(modulus=8, allowed=(1,)), threads=threads,
        )
    raise UsageError(f"family must be R or K, got {family!r}")
