'''
Finite fields GF(p^e) in polynomial basis, cyclotomic classes and the
additive group of a field as a FiniteGroup.

Element i is the polynomial whose coefficient vector (constant term first)
is the base-p expansion of i.
'''
from typing import FrozenSet, List, Sequence, Tuple

import numpy as np
from sympy import Poly, isprime, primefactors, symbols

from src.sedf.errors import FieldError
from src.sedf.group.finite_group import FiniteGroup

MAX_FIELD_ORDER = 2 ** 20

_X = symbols("x")


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    '''
    coeffs: monic polynomial, constant term first
    '''
    return Poly(list(reversed(coeffs)), _X, modulus=p).is_irreducible


class FiniteField(object):
    '''
    GF(p^e) with the smallest monic irreducible modulus, smallest taken
    over the index of the non-leading coefficient vector.
    '''

    def __init__(self, p: int, e: int = 1):
        '''
        Constructor
        '''
        if not isprime(p):
            raise FieldError(f"characteristic must be prime, got {p}")
        if e < 1:
            raise FieldError(f"extension degree must be positive, got {e}")
        if p ** e > MAX_FIELD_ORDER:
            raise FieldError(f"field order {p}^{e} exceeds {MAX_FIELD_ORDER}")
        self._p = p
        self._e = e
        self._q = p ** e
        self._modulus = self._find_modulus()
        self._generator = self._find_generator()
        self._exp, self._log = self._power_tables()

    def _find_modulus(self) -> Tuple[int, ...]:
        p, e = self._p, self._e
        if e == 1:
            return (0, 1)
        for tail in range(p ** e):
            coeffs = self._digits(tail) + [1]
            if coeffs[0] == 0:
                continue
            if _is_irreducible(coeffs, p):
                return tuple(coeffs)
        raise FieldError(f"no irreducible polynomial of degree {e} over Z_{p}")

    def _digits(self, i: int) -> List[int]:
        digits = []
        for _ in range(self._e):
            i, r = divmod(i, self._p)
            digits.append(r)
        return digits

    def _undigits(self, digits: Sequence[int]) -> int:
        i = 0
        for c in reversed(digits):
            i = i * self._p + c
        return i

    def _mul_raw(self, i: int, j: int) -> int:
        p, e = self._p, self._e
        a, b = self._digits(i), self._digits(j)
        prod = [0] * (2 * e - 1)
        for u, x in enumerate(a):
            if x:
                for v, y in enumerate(b):
                    prod[u + v] = (prod[u + v] + x * y) % p
        mod = self._modulus
        for deg in range(2 * e - 2, e - 1, -1):
            c = prod[deg]
            if c:
                for t in range(e + 1):
                    prod[deg - e + t] = (prod[deg - e + t] - c * mod[t]) % p
        return self._undigits(prod[:e])

    def _pow_raw(self, i: int, k: int) -> int:
        result, base = 1, i
        while k:
            if k & 1:
                result = self._mul_raw(result, base)
            base = self._mul_raw(base, base)
            k >>= 1
        return result

    def _find_generator(self) -> int:
        q = self._q
        if q == 2:
            return 1
        factors = primefactors(q - 1)
        for g in range(2, q):
            if all(self._pow_raw(g, (q - 1) // r) != 1 for r in factors):
                return g
        raise FieldError("multiplicative group has no generator")

    def _power_tables(self):
        q = self._q
        exp = [0] * (q - 1)
        log = [-1] * q
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._mul_raw(x, self._generator)
        if x != 1 or min(log[1:]) < 0:
            raise FieldError("generator does not have order q-1")
        return exp, log

    @property
    def p(self) -> int:
        return self._p

    @property
    def e(self) -> int:
        return self._e

    @property
    def q(self) -> int:
        return self._q

    @property
    def modulus(self) -> Tuple[int, ...]:
        '''
        Monic modulus coefficients, constant term first
        '''
        return self._modulus

    @property
    def generator(self) -> int:
        '''
        Smallest primitive element
        '''
        return self._generator

    def __str__(self):
        return f"GF({self._q})"

    def __repr__(self):
        return f"FiniteField(p={self._p}, e={self._e}, modulus={list(self._modulus)})"

    def to_vector(self, i: int) -> Tuple[int, ...]:
        return tuple(self._digits(i))

    def from_vector(self, vector: Sequence[int]) -> int:
        return self._undigits([c % self._p for c in vector])

    def label(self, i: int) -> str:
        '''
        "i" for prime fields, "(c_{e-1},...,c_0)" otherwise
        '''
        if self._e == 1:
            return str(i)
        return "(" + ",".join(str(c) for c in reversed(self._digits(i))) + ")"

    def add(self, i: int, j: int) -> int:
        return self._undigits([(x + y) % self._p for x, y in zip(self._digits(i), self._digits(j))])

    def neg(self, i: int) -> int:
        return self._undigits([(-x) % self._p for x in self._digits(i)])

    def mul(self, i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        return self._exp[(self._log[i] + self._log[j]) % (self._q - 1)]

    def power(self, i: int, k: int) -> int:
        if i == 0:
            return 0 if k else 1
        return self._exp[(self._log[i] * k) % (self._q - 1)]

    def log(self, i: int) -> int:
        if i == 0:
            raise FieldError("zero has no discrete logarithm")
        return self._log[i]

    def frobenius(self, i: int) -> int:
        return self.power(i, self._p)


class CyclotomicClasses(object):
    '''
    Cosets C_i = { g^(e j + i) } of the index-e subgroup of the multiplicative group
    '''

    def __init__(self, field: FiniteField, index: int):
        if index < 1 or (field.q - 1) % index:
            raise FieldError(f"index {index} does not divide q-1={field.q - 1}")
        self._field = field
        self._index = index
        buckets: List[List[int]] = [[] for _ in range(index)]
        for x in range(1, field.q):
            buckets[field.log(x) % index].append(x)
        self._classes: Tuple[FrozenSet[int], ...] = tuple(frozenset(b) for b in buckets)

    @property
    def field(self) -> FiniteField:
        return self._field

    @property
    def index(self) -> int:
        return self._index

    @property
    def generator(self) -> int:
        return self._field.generator

    @property
    def classes(self) -> Tuple[FrozenSet[int], ...]:
        return self._classes

    def class_of(self, x: int) -> int:
        return self._field.log(x) % self._index

    def __len__(self):
        return self._index

    def __getitem__(self, i):
        return self._classes[i]


def construct_field(p: int, e: int = 1) -> FiniteField:
    return FiniteField(p, e)


def additive_group(field: FiniteField) -> FiniteGroup:
    '''
    (GF(q), +) as a FiniteGroup; element i is field element i
    '''
    q, p = field.q, field.p
    digits = np.array([field.to_vector(i) for i in range(q)], dtype=np.int64)
    weights = p ** np.arange(field.e, dtype=np.int64)
    sums = (digits[:, None, :] + digits[None, :, :]) % p
    table = (sums * weights).sum(axis=2)
    if field.e == 1:
        name = f"Z{p}"
    else:
        name = "x".join([f"Z{p}"] * field.e)
    return FiniteGroup(table.tolist(), [field.label(i) for i in range(q)], name)


def squares_nonsquares(field: FiniteField) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    '''
    Non-zero squares and non-squares of a field of odd order
    '''
    if field.p == 2:
        raise FieldError("every element of a field of even order is a square")
    classes = CyclotomicClasses(field, 2)
    return classes[0], classes[1]


def cyclotomic_classes(field: FiniteField, e: int) -> CyclotomicClasses:
    return CyclotomicClasses(field, e)
