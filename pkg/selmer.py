# selmer/selmer.py
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, model_validator

from arith import FactoredInteger, NotSquarefree, SieveCache, delta_n, factor, jacobi
from exceptions import DomainError
from graphs import even_partition_count, graph_G, graph_G_neg, graph_G_prime, is_odd_graph

PHIHAT_OFFSET_NOTE = (
    "s_phihat is taken from |S^phihat| = 2^(2+s_phihat); the asymptotic count for this "
    "class is stated with exponent r+2 where these sizes give r"
)


class Coverage(str, Enum):
    THM_2_4 = "THM_2_4"
    THM_2_6 = "THM_2_6"
    FJ_CASE_1 = "FJ_CASE_1"
    FJ_CASE_2 = "FJ_CASE_2"
    NOT_COVERED = "NOT_COVERED"


class Family(str, Enum):
    HEEGNER = "HEEGNER"
    MONSKY = "MONSKY"
    LAGRANGE = "LAGRANGE"
    ISKRA = "ISKRA"
    NONE = "NONE"


class Verdict(str, Enum):
    CONGRUENT = "CONGRUENT"
    NON_CONGRUENT = "NON_CONGRUENT"
    UNKNOWN = "UNKNOWN"


class BsdSet(str, Enum):
    B3 = "B3"
    B2 = "B2"
    D1 = "D1"
    NONE = "NONE"


FAMILY_VERDICT = {
    Family.HEEGNER: Verdict.CONGRUENT,
    Family.MONSKY: Verdict.CONGRUENT,
    Family.LAGRANGE: Verdict.NON_CONGRUENT,
    Family.ISKRA: Verdict.NON_CONGRUENT,
    Family.NONE: Verdict.UNKNOWN,
}


class TrivialityCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    applicable: bool
    trivial: Optional[bool] = None
    pattern_holds: bool = False
    graph_odd: Optional[bool] = None
    all_odd_primes_1mod4: Optional[bool] = None
    has_prime_5mod8: Optional[bool] = None


class SelmerProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: FactoredInteger
    phi_size_log2: Optional[int] = None
    phihat_size_log2: Optional[int] = None
    s_phi: Optional[int] = None
    s_phihat: Optional[int] = None
    rank_upper_bound: Optional[int] = None
    non_congruent_certified: bool = False
    coverage: Coverage = Coverage.NOT_COVERED
    notes: tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_exponents(self):
        if self.phi_size_log2 is not None and self.s_phi != self.phi_size_log2:
            raise ValueError("s_phi must equal log2 |S^phi|")
        if self.phihat_size_log2 is not None and self.s_phihat != self.phihat_size_log2 - 2:
            raise ValueError("s_phihat must equal log2 |S^phihat| - 2")
        if self.non_congruent_certified and self.rank_upper_bound != 0:
            raise ValueError("a non-congruence certificate needs rank bound 0")
        if self.coverage == Coverage.NOT_COVERED and (
            self.phi_size_log2 is not None or self.phihat_size_log2 is not None
        ):
            raise ValueError("uncovered n cannot carry Selmer sizes")
        return self


class FamilyTag(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family = Family.NONE
    verdict: Verdict = Verdict.UNKNOWN

    @model_validator(mode="after")
    def check_verdict(self):
        if FAMILY_VERDICT[self.family] != self.verdict:
            raise ValueError(f"{self.family.value} implies {FAMILY_VERDICT[self.family].value}")
        return self


class BsdStatus(BaseModel):
    model_config = ConfigDict(frozen=True)

    set: BsdSet = BsdSet.NONE
    verified: bool = False
    graph_odd: Optional[bool] = None
    delta: Optional[int] = None

    @model_validator(mode="after")
    def check_verified(self):
        if self.verified and self.set == BsdSet.NONE:
            raise ValueError("only members of B3, B2 or D1 can be verified")
        return self


class AnalysisReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    squarefree: bool
    repeated_prime: Optional[int] = None
    factors: tuple[int, ...] = ()
    residue_mod8: int
    profile: Optional[SelmerProfile] = None
    family: Optional[FamilyTag] = None
    bsd: Optional[BsdStatus] = None
    graphs: tuple[dict, ...] = ()

    def to_document(self) -> dict:
        if not self.squarefree:
            return self.model_dump(mode="json", include={"n", "squarefree", "repeated_prime", "residue_mod8"})
        # profile fields sit at the top level; n is already there
        document = self.model_dump(mode="json", include={"n", "factors", "residue_mod8"})
        document.update(self.profile.model_dump(mode="json", exclude={"n", "notes"}))
        document.update(self.model_dump(mode="json", include={"family", "bsd"}))
        document.update(self.profile.model_dump(mode="json", include={"notes"}))
        document.update(self.model_dump(mode="json", include={"graphs"}))
        return document


def _log2(size: int) -> int:
    return size.bit_length() - 1


def _profile(n: FactoredInteger, coverage: Coverage, phi_log2: int, phihat_log2: int, notes=()) -> SelmerProfile:
    s_phi = phi_log2
    s_phihat = phihat_log2 - 2
    bound = s_phi + s_phihat
    return SelmerProfile(
        n=n,
        phi_size_log2=phi_log2,
        phihat_size_log2=phihat_log2,
        s_phi=s_phi,
        s_phihat=s_phihat,
        rank_upper_bound=bound,
        non_congruent_certified=bound == 0,
        coverage=coverage,
        notes=tuple(notes),
    )


def selmer_trivial_3mod8(n: FactoredInteger) -> TrivialityCheck:
    if n.is_even:
        raise DomainError(f"the n = 3 mod 8 criterion needs odd n, got {n.value}")
    if n.residue_mod8 not in (3, 5):
        return TrivialityCheck(applicable=False)
    pattern = n.residue_mod8 == 3 and sum(p % 4 == 3 for p in n.factors) == 1
    if not pattern:
        return TrivialityCheck(applicable=True, trivial=False)
    odd = is_odd_graph(graph_G(n.factors))
    return TrivialityCheck(applicable=True, trivial=odd, pattern_holds=True, graph_odd=odd)


def selmer_trivial_2mod8(n: FactoredInteger) -> TrivialityCheck:
    if n.value % 4 != 2:
        raise DomainError(f"the 2 || n criterion needs n = 2 mod 4, got {n.value}")
    odd_primes = n.odd_factors
    all_1mod4 = all(p % 4 == 1 for p in odd_primes)
    has_5mod8 = any(p % 8 == 5 for p in odd_primes)
    odd = is_odd_graph(graph_G_prime(odd_primes))
    # the necessary conditions guard against edges r -> 2 from primes = 3 mod 8
    return TrivialityCheck(
        applicable=True,
        trivial=odd and all_1mod4 and has_5mod8,
        pattern_holds=all_1mod4 and has_5mod8,
        graph_odd=odd,
        all_odd_primes_1mod4=all_1mod4,
        has_prime_5mod8=has_5mod8,
    )


def selmer_sizes_5mod8(n: FactoredInteger) -> SelmerProfile:
    if n.is_even or n.residue_mod8 != 5 or any(p % 4 != 1 for p in n.factors):
        return SelmerProfile(n=n)
    e = _log2(even_partition_count(graph_G(n.factors)))
    return _profile(n, Coverage.FJ_CASE_1, e, e + 1, notes=(PHIHAT_OFFSET_NOTE,))


def selmer_sizes_1mod8(n: FactoredInteger) -> SelmerProfile:
    if n.is_even or n.residue_mod8 != 1 or any(p % 8 != 1 for p in n.factors):
        return SelmerProfile(n=n)
    e = _log2(even_partition_count(graph_G(n.factors)))
    e_neg = _log2(even_partition_count(graph_G_neg(n.factors)))
    return _profile(n, Coverage.FJ_CASE_2, e + 1, e_neg, notes=(PHIHAT_OFFSET_NOTE,))


def selmer_profile(n: FactoredInteger) -> SelmerProfile:
    if n.is_even:
        check = selmer_trivial_2mod8(n)
        if check.trivial:
            return _profile(n, Coverage.THM_2_6, 0, 2)
        return SelmerProfile(n=n, coverage=Coverage.THM_2_6)
    sizes = selmer_sizes_5mod8(n)
    if sizes.coverage == Coverage.NOT_COVERED:
        sizes = selmer_sizes_1mod8(n)
    if sizes.coverage != Coverage.NOT_COVERED:
        return sizes
    check = selmer_trivial_3mod8(n)
    if not check.applicable:
        return SelmerProfile(n=n)
    if check.trivial:
        return _profile(n, Coverage.THM_2_4, 0, 2)
    return SelmerProfile(n=n, coverage=Coverage.THM_2_4)


def _tag(family: Family) -> FamilyTag:
    return FamilyTag(family=family, verdict=FAMILY_VERDICT[family])


def _ordered_all_negative(primes: tuple[int, ...]) -> bool:
    # primes = 3 mod 4 form a tournament under the symbol; order it by wins
    wins = {p: sum(jacobi(p, q) == -1 for q in primes if q != p) for p in primes}
    order = sorted(primes, key=lambda p: -wins[p])
    return all(
        jacobi(order[j], order[k]) == -1 for j in range(len(order)) for k in range(j + 1, len(order))
    )


def classify_family(n: FactoredInteger) -> FamilyTag:
    odd = n.odd_factors
    if n.is_even:
        if len(odd) == 1 and odd[0] % 8 == 3:
            return _tag(Family.HEEGNER)
        if len(odd) == 2:
            a, b = odd
            for p, q in ((a, b), (b, a)):
                if p % 8 == 1 and q % 8 in (3, 7) and jacobi(p, q) == -1:
                    return _tag(Family.MONSKY)
        return _tag(Family.NONE)
    if len(odd) == 3:
        for r in odd:
            if r % 8 != 3:
                continue
            p, q = (x for x in odd if x != r)
            for first, second in ((p, q), (q, p)):
                if first % 8 == 1 and second % 8 == 1 and jacobi(first, second) == -1 and jacobi(first, r) == -1:
                    return _tag(Family.LAGRANGE)
    if odd and all(p % 8 == 3 for p in odd) and _ordered_all_negative(odd):
        return _tag(Family.ISKRA)
    return _tag(Family.NONE)


def bsd_status(n: FactoredInteger) -> BsdStatus:
    odd = n.odd_factors
    if n.is_even:
        # n = 2 has no odd prime and sits outside B2
        if n.value % 8 == 2 and odd and all(p % 4 == 1 for p in odd):
            check = selmer_trivial_2mod8(n)
            return BsdStatus(set=BsdSet.B2, verified=bool(check.trivial), graph_odd=check.graph_odd)
        return BsdStatus()
    residues = [p % 8 for p in odd]
    if residues.count(3) == 1 and residues.count(1) == len(residues) - 1:
        check = selmer_trivial_3mod8(n)
        return BsdStatus(set=BsdSet.B3, verified=bool(check.trivial), graph_odd=check.graph_odd)
    if residues and all(r == 1 for r in residues):
        odd_graph = is_odd_graph(graph_G(odd))
        delta = delta_n(n)
        # sufficient direction only: odd graph and delta = 1
        return BsdStatus(set=BsdSet.D1, verified=odd_graph and delta == 1, graph_odd=odd_graph, delta=delta)
    return BsdStatus()


def report_graphs(n: FactoredInteger) -> tuple[dict, ...]:
    if n.is_even:
        return (graph_G_prime(n.odd_factors).to_document(),)
    return (graph_G(n.factors).to_document(), graph_G_neg(n.factors).to_document())


def analyze(n: int, cache: SieveCache) -> AnalysisReport:
    factored = factor(n, cache)
    if isinstance(factored, NotSquarefree):
        return AnalysisReport(n=n, squarefree=False, repeated_prime=factored.repeated_prime, residue_mod8=n % 8)
    return AnalysisReport(
        n=n,
        squarefree=True,
        factors=factored.factors,
        residue_mod8=factored.residue_mod8,
        profile=selmer_profile(factored),
        family=classify_family(factored),
        bsd=bsd_status(factored),
        graphs=report_graphs(factored),
    )
