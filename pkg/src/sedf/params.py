'''
SEDF parameter sets (n, m, k, lambda): admissibility, enumeration and the
number-theoretic nonexistence filters.

'''
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Tuple

from sympy import factorint, isprime, primefactors

from src.sedf.errors import ParameterError

GROUP_CLASSES = ("any", "abelian", "cyclic")

# filter id -> (scope, description)
FILTERS: Dict[str, Tuple[str, str]] = {
    "lambda-below-k": ("all", "k = 1 and lambda = 1, or k > 1 and lambda < k"),
    "gcd-k-n-1": ("all", "gcd(k, n-1) = 1 rules out non-trivial families"),
    "square-free": ("all", "n-1 square-free rules out non-trivial families"),
    "abelian-m-3-4": ("abelian", "m in {3,4}"),
    "abelian-n-prime": ("abelian", "m > 2 and n prime"),
    "abelian-n-pq": ("abelian", "m > 2 and n = pq for distinct primes p, q"),
    "abelian-lambda-2": ("abelian", "m > 2 and lambda = 2"),
    "abelian-ratio": ("abelian", "m > 2, lambda > 1 and lambda(k-1)(m-2) / ((lambda-1)k(m-1)) > 1"),
    "abelian-prime-divisor": ("abelian", "m > 2 and some prime p | n has gcd(km, p) = 1 and m != 2 mod p"),
    "cyclic-prime-power": ("cyclic", "m > 2 and n a prime power, cyclic group"),
    "abelian-three-primes": ("abelian", "m > 2 and n a product of at most three primes"),
    "abelian-lambda-1": ("abelian", "lambda = 1 requires m = 2 and n = k^2 + 1"),
}

# the three-primes result leaves (Z_p)^3 open for p above this bound
_THREE_PRIMES_EXCEPTION = 3 * 10 ** 12


@dataclass(frozen=True, order=True)
class ParamSet:
    '''
    Parameters (n, m, k, lambda) of a candidate SEDF, with the filters that rule
    it out for some group class
    '''
    n: int
    m: int
    k: int
    lam: int
    filters_hit: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def admissible(self) -> bool:
        return is_admissible(self.n, self.m, self.k, self.lam)

    @property
    def trivial(self) -> bool:
        return self.k == 1

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.n, self.m, self.k, self.lam)

    def with_filters(self, group_class: str) -> 'ParamSet':
        return replace(self, filters_hit=tuple(nonexistence_filters(self, group_class)))

    def to_json_obj(self) -> Dict:
        obj = {"n": self.n, "m": self.m, "k": self.k, "lambda": self.lam}
        if self.filters_hit:
            obj["filters"] = list(self.filters_hit)
        return obj

    def __str__(self):
        return f"({self.n},{self.m},{self.k},{self.lam})"


def is_admissible(n: int, m: int, k: int, lam: int) -> bool:
    '''
    m >= 2, n >= mk and lambda (n-1) = k^2 (m-1)
    '''
    return m >= 2 and n >= m * k and lam * (n - 1) == k * k * (m - 1)


def require_admissible(n: int, m: int, k: int, lam: int):
    if min(n, m, k, lam) < 1 or not is_admissible(n, m, k, lam):
        raise ParameterError(f"({n},{m},{k},{lam}) is not an admissible SEDF parameter set")


def enumerate_admissible(max_n: int, include_trivial: bool = False,
                         group_class: Optional[str] = None) -> List[ParamSet]:
    '''
    Every admissible (n, m, k, lambda) with 2 <= n <= max_n, sorted by (n, m, k).
    Trivial sets (k = 1) only on request. With a group class, each set carries
    the filters that rule it out in that class.
    '''
    if max_n < 2:
        raise ParameterError(f"max order must be at least 2, got {max_n}")
    results = []
    for n in range(2, max_n + 1):
        for m in range(2, n + 1):
            for k in range(1 if include_trivial else 2, n // m + 1):
                numerator = k * k * (m - 1)
                if numerator % (n - 1):
                    continue
                params = ParamSet(n, m, k, numerator // (n - 1))
                if group_class is not None:
                    params = params.with_filters(group_class)
                results.append(params)
    return results


def square_free_rule(n: int) -> bool:
    '''
    True iff n-1 is square-free, in which case only trivial SEDFs exist
    '''
    if n < 2:
        raise ParameterError(f"order must be at least 2, got {n}")
    return all(e == 1 for e in factorint(n - 1).values())


def squareful_witness(n: int) -> Optional[ParamSet]:
    '''
    For n-1 = a^2 b with a^2 the largest square divisor and a > 1, the
    admissible set (n, b+1, a, 1); None when n-1 is square-free
    '''
    if n <= 2:
        raise ParameterError(f"order must exceed 2, got {n}")
    a = 1
    for prime, exponent in factorint(n - 1).items():
        a *= prime ** (exponent // 2)
    if a == 1:
        return None
    witness = ParamSet(n, (n - 1) // (a * a) + 1, a, 1)
    assert witness.admissible
    return witness


def _applies(scope: str, group_class: str) -> bool:
    if scope == "all":
        return True
    if scope == "abelian":
        return group_class in ("abelian", "cyclic")
    return group_class == "cyclic"


def nonexistence_filters(params: ParamSet, group_class: str = "any") -> List[str]:
    '''
    Ids of the filters (see FILTERS) that rule the parameter set out for the
    given group class: "any" applies only filters valid in every group,
    "abelian" adds the abelian-only results, "cyclic" adds the cyclic-only one.
    '''
    if group_class not in GROUP_CLASSES:
        raise ParameterError(f"group class must be one of {GROUP_CLASSES}, got {group_class!r}")
    n, m, k, lam = params.as_tuple()
    hits = []

    def hit(filter_id: str, condition: bool):
        if condition and _applies(FILTERS[filter_id][0], group_class):
            hits.append(filter_id)

    hit("lambda-below-k", not ((k == 1 and lam == 1) or (k > 1 and lam < k)))
    if k == 1:
        return hits
    hit("gcd-k-n-1", gcd(k, n - 1) == 1)
    hit("square-free", n > 1 and all(e == 1 for e in factorint(n - 1).values()))

    factors = factorint(n)
    primes = primefactors(n)
    omega = sum(factors.values())
    big = m > 2
    hit("abelian-m-3-4", m in (3, 4))
    hit("abelian-n-prime", big and isprime(n))
    hit("abelian-n-pq", big and len(primes) == 2 and omega == 2)
    hit("abelian-lambda-2", big and lam == 2)
    hit("abelian-ratio", big and lam > 1
        and Fraction(lam * (k - 1) * (m - 2), (lam - 1) * k * (m - 1)) > 1)
    hit("abelian-prime-divisor", big and any(gcd(k * m, p) == 1 and (m - 2) % p != 0 for p in primes))
    hit("cyclic-prime-power", big and len(primes) == 1)
    open_case = (group_class == "abelian" and len(primes) == 1 and omega == 3
                 and primes[0] > _THREE_PRIMES_EXCEPTION)
    hit("abelian-three-primes", big and omega <= 3 and not open_case)
    hit("abelian-lambda-1", lam == 1 and not (m == 2 and n == k * k + 1))
    return hits


def ruled_out(params: ParamSet, group_class: str) -> bool:
    return bool(nonexistence_filters(params, group_class))
