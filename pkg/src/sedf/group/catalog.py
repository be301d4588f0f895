'''
Group spec strings ("Z<n>", "Z<a>xZ<b>", "D<n>", "SD(<p>,<q>,<action>)",
"file:<path>") and the built-in catalogue of small groups.

'''
from functools import lru_cache, reduce
from typing import Dict, List, Optional
import re

from sympy import factorint, isprime, primefactors
from sympy.utilities.iterables import partitions

from src.sedf.errors import GroupSpecError, SedfError
from src.sedf.group.automorphism import find_isomorphism
from src.sedf.group.finite_group import (FiniteGroup, construct_cyclic, construct_dihedral,
                                         construct_direct_product, construct_semidirect,
                                         read_group_file)

_CYCLIC = re.compile(r"^Z(\d+)$")
_DIHEDRAL = re.compile(r"^D(\d+)$")
_SEMIDIRECT = re.compile(r"^SD\((\d+),(\d+),(\d+)\)$")


@lru_cache(maxsize=256)
def _parse_cached(spec: str) -> FiniteGroup:
    if spec.startswith("file:"):
        return read_group_file(spec[len("file:"):])
    factors = spec.split("x")
    if len(factors) > 1:
        groups = [_parse_cached(f) for f in factors]
        if any(not _CYCLIC.match(f) for f in factors):
            raise GroupSpecError(f"direct products are built from cyclic factors: {spec!r}")
        return reduce(construct_direct_product, groups)
    match = _CYCLIC.match(spec)
    if match:
        return construct_cyclic(int(match.group(1)))
    match = _DIHEDRAL.match(spec)
    if match:
        return construct_dihedral(int(match.group(1)))
    match = _SEMIDIRECT.match(spec)
    if match:
        p, q, action = (int(x) for x in match.groups())
        return construct_semidirect(p, q, action)
    raise GroupSpecError(f"unknown group spec {spec!r}")


def parse_group_spec(spec: str) -> FiniteGroup:
    '''
    Builds the group named by a spec string
    '''
    spec = spec.strip().replace(" ", "") if not spec.startswith("file:") else spec.strip()
    try:
        return _parse_cached(spec)
    except GroupSpecError:
        raise
    except SedfError as err:
        raise GroupSpecError(f"cannot build {spec!r}: {err}") from err


def abelian_invariant_factors(n: int) -> List[List[int]]:
    '''
    Every abelian group of order n as its invariant factors d_1 | d_2 | ...,
    one list per isomorphism class, from the partitions of each prime exponent.
    '''
    if n < 1:
        raise GroupSpecError(f"order must be positive, got {n}")
    per_prime = []
    for prime, exponent in sorted(factorint(n).items()):
        options = []
        for part in partitions(exponent):
            parts = sorted((size for size, count in part.items() for _ in range(count)), reverse=True)
            options.append(parts)
        options.sort(reverse=True)
        per_prime.append((prime, options))
    results: List[List[int]] = [[]]
    for prime, options in per_prime:
        extended = []
        for factors in results:
            for parts in options:
                # factors are kept largest first while combining
                width = max(len(factors), len(parts))
                fa = factors + [1] * (width - len(factors))
                pa = parts + [0] * (width - len(parts))
                extended.append([f * prime ** e for f, e in zip(fa, pa)])
        results = extended
    return [sorted(f) for f in results] if n > 1 else [[1]]


def abelian_spec(factors: List[int]) -> str:
    return "x".join(f"Z{d}" for d in factors)


def abelian_groups(n: int) -> List[FiniteGroup]:
    '''
    One representative per isomorphism class of abelian groups of order n,
    cyclic group first
    '''
    return [parse_group_spec(abelian_spec(f)) for f in abelian_invariant_factors(n)]


def nonabelian_specs(n: int) -> List[str]:
    '''
    Nonabelian groups of order n covered by the constructor families:
    dihedral groups and Z_p x| Z_q for primes q | p-1
    '''
    specs = []
    if n >= 6 and n % 2 == 0:
        specs.append(f"D{n}")
    primes = primefactors(n)
    if len(primes) == 2 and factorint(n) == {primes[0]: 1, primes[1]: 1}:
        q, p = primes
        if (p - 1) % q == 0 and q != 2:
            action = next(a for a in range(2, p) if pow(a, q, p) == 1)
            specs.append(f"SD({p},{q},{action})")
    return specs


def nonabelian_groups(n: int) -> List[FiniteGroup]:
    return [parse_group_spec(spec) for spec in nonabelian_specs(n)]


def catalog(max_order: int, abelian: bool = True, nonabelian: bool = True) -> List[FiniteGroup]:
    '''
    Catalogue of groups up to max_order in a fixed order: by order, then
    abelian groups before nonabelian ones.
    '''
    groups = []
    for n in range(1, max_order + 1):
        if abelian:
            groups.extend(abelian_groups(n))
        if nonabelian:
            groups.extend(nonabelian_groups(n))
    return groups


def isomorphism_class_witness(group: FiniteGroup) -> Optional[FiniteGroup]:
    '''
    First catalogue group of the same order isomorphic to the given one
    '''
    for candidate in abelian_groups(group.order) + nonabelian_groups(group.order):
        if find_isomorphism(group, candidate) is not None:
            return candidate
    return None


def is_prime_order(group: FiniteGroup) -> bool:
    return isprime(group.order)


def describe(group: FiniteGroup) -> Dict:
    return {"spec": group.name, "order": group.order, "abelian": group.is_abelian}
