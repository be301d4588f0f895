'''
Explicit and recursive SEDF / GSEDF constructions.

Every construction verifies its output before returning it and raises
ConstructionError when the verifier disagrees.
'''
from dataclasses import dataclass
from math import isqrt
from typing import Callable, List, Optional, Tuple
import logging

from sympy import factorint, isprime

from src.sedf.errors import ConstructionError, ParameterError, PreconditionError
from src.sedf.family import (BlockFamily, GsedfProfile, map_family, translate_family,
                             verify_gsedf, verify_sedf)
from src.sedf.group.automorphism import automorphisms
from src.sedf.group.catalog import parse_group_spec
from src.sedf.group.field import FiniteField, additive_group, cyclotomic_classes, squares_nonsquares
from src.sedf.group.finite_group import FiniteGroup, GroupMap, construct_dihedral, dihedral_index
from src.sedf.optim.classify import equivalent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecursionSpec:
    '''
    Multipliers a, b and base block sizes s, t of the cyclic recursion
    '''
    a: int
    b: int
    s: int
    t: int

    def __post_init__(self):
        if min(self.a, self.b, self.s, self.t) < 1:
            raise ParameterError(f"recursion parameters must be positive, got {self}")

    @property
    def order(self) -> int:
        return self.a * self.b * self.s * self.t + 1


def _verified(fam: BlockFamily, check: Callable[[BlockFamily], bool], what: str) -> BlockFamily:
    if not check(fam):
        raise ConstructionError(f"{what} produced {fam}, which fails verification")
    logger.debug("[Construction] %s -> %s", what, fam)
    return fam


def _sedf_check(lam: int) -> Callable[[BlockFamily], bool]:
    return lambda fam: verify_sedf(fam, lam)


def _cyclic(n: int) -> FiniteGroup:
    return parse_group_spec(f"Z{n}")


def _is_natural_cyclic(g: FiniteGroup) -> bool:
    return g == _cyclic(g.order)


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    factors = factorint(q)
    if len(factors) != 1:
        return None
    return next(iter(factors.items()))


def construct_trivial(g: FiniteGroup) -> BlockFamily:
    '''
    The (n,n,1,1)-SEDF of all singletons
    '''
    if g.order < 2:
        raise PreconditionError("a difference family needs at least two blocks, so n >= 2")
    return _verified(BlockFamily(g, [[x] for x in range(g.order)]), _sedf_check(1), f"trivial({g.name})")


def construct_pa_st(k: int) -> BlockFamily:
    '''
    ({0,1,...,k-1}, {k,2k,...,k^2}) in Z_{k^2+1}
    '''
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    g = _cyclic(k * k + 1)
    fam = BlockFamily(g, [range(k), [k * i for i in range(1, k + 1)]])
    return _verified(fam, _sedf_check(1), f"pa-st(k={k})")


def construct_paley(q: int) -> BlockFamily:
    '''
    Non-zero squares and non-squares of GF(q), q = 1 mod 4, in the additive group
    '''
    pe = prime_power(q)
    if pe is None or q % 4 != 1:
        raise ParameterError(f"q must be a prime power congruent to 1 mod 4, got {q}")
    field = FiniteField(*pe)
    squares, nonsquares = squares_nonsquares(field)
    fam = BlockFamily(additive_group(field), [squares, nonsquares])
    return _verified(fam, _sedf_check((q - 1) // 4), f"paley(q={q})")


def cyclotomic_form_holds(q: int, e: int) -> bool:
    if e == 4:
        t2, rem = divmod(q - 1, 16)
        return rem == 0 and t2 > 0 and isqrt(t2) ** 2 == t2 and prime_power(q) is not None
    if e == 6:
        t2, rem = divmod(q - 1, 108)
        return rem == 0 and t2 > 0 and isqrt(t2) ** 2 == t2 and isprime(q)
    raise ParameterError(f"cyclotomic constructions use e = 4 or e = 6, got {e}")


def construct_cyclotomic(q: int, e: int) -> List[BlockFamily]:
    '''
    Every pair of distinct index-e cyclotomic classes of GF(q) forming a
    (q, 2, (q-1)/e, (q-1)/e^2)-SEDF. Needs q = 16t^2+1 (prime power) for
    e = 4 and q = 108t^2+1 (prime) for e = 6.
    '''
    if not cyclotomic_form_holds(q, e):
        form = "16t^2+1 prime power" if e == 4 else "108t^2+1 prime"
        raise ParameterError(f"q={q} is not of the form {form}")
    field = FiniteField(*prime_power(q))
    group = additive_group(field)
    classes = cyclotomic_classes(field, e)
    lam = (q - 1) // (e * e)
    found = []
    for i in range(e):
        for j in range(i + 1, e):
            fam = BlockFamily(group, [classes[i], classes[j]])
            if verify_sedf(fam, lam):
                found.append(fam)
    if not found:
        raise ConstructionError(f"no pair of index-{e} cyclotomic classes of GF({q}) is an SEDF")
    logger.debug("[Construction] cyclotomic(q=%d, e=%d): %d verified pairs", q, e, len(found))
    return found


def construct_even_k(a: int) -> BlockFamily:
    '''
    k = 2a in Z_{4a^2+1}:
    B1 = {0..a-1} u {2a..3a-1}, B2 = u_{i=1..a} {(4i-1)a, 4ia}
    '''
    if a < 1:
        raise ParameterError(f"a must be positive, got {a}")
    g = _cyclic(4 * a * a + 1)
    b1 = list(range(a)) + list(range(2 * a, 3 * a))
    b2 = [x for i in range(1, a + 1) for x in ((4 * i - 1) * a, 4 * i * a)]
    return _verified(BlockFamily(g, [b1, b2]), _sedf_check(1), f"even-k(a={a})")


def _check_below(base: BlockFamily):
    if max(base.blocks[0]) >= min(base.blocks[1]):
        raise PreconditionError("every element of the first block must be below every element of the second")


def recursive_lambda1(base: BlockFamily, a: int) -> BlockFamily:
    '''
    From a (k^2+1,2,k,1)-SEDF (A1, A2) in Z_{k^2+1} with A1 below A2, the
    ((ak)^2+1,2,ak,1)-SEDF with B1 = u {a x + alpha}, B2 = u {a (y + k^2 beta)},
    0 <= alpha, beta < a.
    '''
    if a < 1:
        raise ParameterError(f"a must be positive, got {a}")
    k = base.k
    g = base.group
    if base.m != 2 or k is None or g.order != k * k + 1 or not _is_natural_cyclic(g):
        raise PreconditionError(f"base must be a (k^2+1,2,k,1) family in Z_(k^2+1), got {base}")
    if not verify_sedf(base, 1):
        raise PreconditionError(f"base {base} is not an SEDF with lambda = 1")
    _check_below(base)
    n = (a * k) ** 2 + 1
    b1 = [a * x + alpha for x in base.blocks[0] for alpha in range(a)]
    b2 = [(a * (y + k * k * beta)) % n for y in base.blocks[1] for beta in range(a)]
    return _verified(BlockFamily(_cyclic(n), [b1, b2]), _sedf_check(1), f"recursive(a={a}) of {base}")


def recursive_gsedf(base: BlockFamily, spec: RecursionSpec) -> BlockFamily:
    '''
    From an (st+1,2;s,t;1,1)-GSEDF (A1, A2) in Z_{st+1} with A1 below A2, the
    (abst+1,2;as,bt;1,1)-GSEDF with B1 = u {a x + alpha}, B2 = u {a (y + beta st)},
    0 <= alpha < a, 0 <= beta < b.
    '''
    s, t = spec.s, spec.t
    g = base.group
    if base.m != 2 or base.sizes != (s, t) or g.order != s * t + 1 or not _is_natural_cyclic(g):
        raise PreconditionError(f"base must be an ({s * t + 1},2;{s},{t};1,1) family in Z_{s * t + 1}, got {base}")
    if not verify_gsedf(base, GsedfProfile((s, t), (1, 1))):
        raise PreconditionError(f"base {base} is not a GSEDF with lambdas (1,1)")
    _check_below(base)
    a, b = spec.a, spec.b
    n = spec.order
    b1 = [a * x + alpha for x in base.blocks[0] for alpha in range(a)]
    b2 = [(a * (y + beta * s * t)) % n for y in base.blocks[1] for beta in range(b)]
    profile = GsedfProfile((a * s, b * t), (1, 1))
    return _verified(BlockFamily(_cyclic(n), [b1, b2]), lambda fam: verify_gsedf(fam, profile),
                     f"gsedf-recursive({spec}) of {base}")


def gsedf_interval_base(s: int, t: int) -> BlockFamily:
    '''
    ({0,...,s-1}, {s,2s,...,ts}), an (st+1,2;s,t;1,1)-GSEDF in Z_{st+1}
    '''
    if s < 1 or t < 1:
        raise ParameterError(f"s and t must be positive, got s={s}, t={t}")
    fam = BlockFamily(_cyclic(s * t + 1), [range(s), [s * j for j in range(1, t + 1)]])
    profile = GsedfProfile((s, t), (1, 1))
    return _verified(fam, lambda f: verify_gsedf(f, profile), f"gsedf(s={s}, t={t})")


def gsedf_automorphic_variant(s: int, t: int) -> BlockFamily:
    '''
    ({0,t,...,(s-1)t}, {(s-1)t+1,...,st}), the image of gsedf_interval_base
    under x -> tx
    '''
    if s < 1 or t < 1:
        raise ParameterError(f"s and t must be positive, got s={s}, t={t}")
    fam = BlockFamily(_cyclic(s * t + 1), [[t * i for i in range(s)], range((s - 1) * t + 1, s * t + 1)])
    profile = GsedfProfile((s, t), (1, 1))
    return _verified(fam, lambda f: verify_gsedf(f, profile), f"gsedf-variant(s={s}, t={t})")


def sedf_from_multiple_of_six(k: int) -> BlockFamily:
    '''
    (k^2+1,2,k,1)-SEDF for k a multiple of 6, recursing on ({0,3},{4,5,6}) in Z_7
    with a = k/2 and b = k/3
    '''
    if k < 6 or k % 6:
        raise ParameterError(f"k must be a positive multiple of 6, got {k}")
    base = gsedf_automorphic_variant(2, 3)
    fam = recursive_gsedf(base, RecursionSpec(a=k // 2, b=k // 3, s=2, t=3))
    return _verified(fam, _sedf_check(1), f"multiple-of-six(k={k})")


def _multiplication(g: FiniteGroup, c: int) -> GroupMap:
    n = g.order
    return GroupMap(g, g, [(c * x) % n for x in range(n)], validate=False)


def composite_pair(r: int, a: int) -> Tuple[BlockFamily, BlockFamily]:
    '''
    Two (k^2+1,2,k,1)-SEDFs, k = ra, from recursing on S1 = pa-st(r) and on its
    image S2 = r S1
    '''
    if r < 2 or a < 2:
        raise ParameterError(f"r and a must both be at least 2, got r={r}, a={a}")
    s1 = construct_pa_st(r)
    s2 = map_family(s1, _multiplication(s1.group, r))
    first, second = recursive_lambda1(s1, a), recursive_lambda1(s2, a)
    if equivalent(first, second)[0]:
        raise ConstructionError(f"composite-pair(r={r}, a={a}) gave two equivalent families")
    logger.debug("[Construction] composite-pair(r=%d, a=%d): %s and %s are not equivalent", r, a, first, second)
    return first, second


def construct_dihedral_sedf(k: int) -> BlockFamily:
    '''
    (k^2+1,2,k,1)-SEDF in the dihedral group of order k^2+1, k odd:
    A1 = {r^i : 0 <= i <= (k-1)/2} u {sr^j : 0 <= j <= (k-3)/2}
    A2 = {r^(ik) : 1 <= i <= (k-1)/2} u {sr^(jk+(k-1)/2) : 0 <= j <= (k-1)/2}
    '''
    if k < 3 or k % 2 == 0:
        raise ParameterError(f"k must be odd and at least 3, got {k}")
    n = k * k + 1
    h = (k - 1) // 2
    g = construct_dihedral(n)
    a1 = [dihedral_index(n, 0, i) for i in range(h + 1)] + [dihedral_index(n, 1, j) for j in range(h)]
    a2 = [dihedral_index(n, 0, i * k) for i in range(1, h + 1)] + \
         [dihedral_index(n, 1, j * k + h) for j in range(h + 1)]
    return _verified(BlockFamily(g, [a1, a2]), _sedf_check(1), f"dihedral(k={k})")


def normalize_below(fam: BlockFamily) -> Optional[BlockFamily]:
    '''
    An equivalent two-block family in the same cyclic group whose first block
    lies entirely below its second, found among the images h + alpha(A) (either
    block order); None when no such image exists
    '''
    g = fam.group
    if fam.m != 2 or not _is_natural_cyclic(g):
        raise PreconditionError("normalize_below works on two-block families in Z_n")
    for phi in automorphisms(g):
        image = map_family(fam, phi)
        for h in range(g.order):
            moved = translate_family(image, h)
            for first, second in (moved.blocks, reversed(moved.blocks)):
                if max(first) < min(second):
                    return BlockFamily(g, [first, second])
    return None


def nonequivalent_pair(k: int) -> Tuple[BlockFamily, BlockFamily]:
    '''
    Two non-equivalent (k^2+1,2,k,1)-SEDFs, k > 2: the cyclic and dihedral ones for
    odd k, the composite pair with r = 2 for even k
    '''
    if k <= 2:
        raise ParameterError(f"k must exceed 2, got {k}")
    if k % 2:
        return construct_pa_st(k), construct_dihedral_sedf(k)
    return composite_pair(2, k // 2)
