'''
Finite groups stored as multiplication (Cayley) tables.

Elements are the indices 0..n-1 and index 0 is always the identity.
Every constructor fixes its element ordering, which is the total order
the search walks through.

'''
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple
import os

import numpy as np
from sympy import isprime

from src.sedf.errors import (AssociativityError, CayleyTableError, GroupMismatchError,
                             IdentityPlacementError, InvalidOrderError,
                             InvalidPresentationError, LatinSquareError)

DEFAULT_ASSOCIATIVITY_BOUND = 64


class FiniteGroup(object):
    '''
    Immutable group given by its Cayley table: table[i][j] is the index of
    the product of element i with element j.
    '''

    def __init__(self, table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
                 name: str = "group", associativity_bound: int = DEFAULT_ASSOCIATIVITY_BOUND):
        '''
        Constructor. Validates the table.
        @param associativity_bound: full O(n^3) associativity check is done
          when the order is at most this bound
        '''
        self._table: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(x) for x in row) for row in table)
        self._order = len(self._table)
        if self._order == 0:
            raise InvalidOrderError("a group has at least one element")
        self._name = name
        self._labels: Tuple[str, ...] = tuple(labels) if labels is not None \
            else tuple(str(i) for i in range(self._order))
        if len(self._labels) != self._order:
            raise CayleyTableError(f"expected {self._order} labels, got {len(self._labels)}")
        self._validate(associativity_bound)
        self._inverse: Tuple[int, ...] = tuple(row.index(0) for row in self._table)
        self._hash = hash(self._table)

    def _validate(self, associativity_bound: int):
        n = self._order
        for row in self._table:
            if len(row) != n:
                raise CayleyTableError(f"table is not square: row of length {len(row)} for order {n}")
        arr = np.asarray(self._table, dtype=np.int64)
        if arr.min() < 0 or arr.max() >= n:
            raise CayleyTableError("table entries must lie in 0..n-1")
        expected = np.arange(n)
        if not (np.array_equal(arr[0], expected) and np.array_equal(arr[:, 0], expected)):
            raise IdentityPlacementError("element 0 must be the identity (row 0 and column 0 unchanged)")
        if not (np.all(np.sort(arr, axis=1) == expected) and np.all(np.sort(arr, axis=0) == expected[:, None])):
            raise LatinSquareError("table is not a Latin square")
        if n <= associativity_bound:
            # left[i,j,k] = (ij)k, right[i,j,k] = i(jk)
            left = arr[arr]
            right = arr[expected[:, None, None], arr[None, :, :]]
            bad = np.argwhere(left != right)
            if len(bad):
                i, j, k = (int(x) for x in bad[0])
                raise AssociativityError(f"({i}*{j})*{k} != {i}*({j}*{k})")

    @classmethod
    def from_text(cls, text, name: str = "group",
                  associativity_bound: int = DEFAULT_ASSOCIATIVITY_BOUND) -> 'FiniteGroup':
        '''
        Reads the Cayley-table text format: the order on the first line,
        then n rows of n whitespace-separated indices, then optionally a line
        of n labels.
        '''
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines:
            raise CayleyTableError("empty Cayley table")
        try:
            n = int(lines[0])
        except ValueError:
            raise CayleyTableError(f"first line must be the order, got {lines[0]!r}")
        if n < 1:
            raise CayleyTableError(f"order must be positive, got {n}")
        if len(lines) not in (n + 1, n + 2):
            raise CayleyTableError(f"expected {n} table rows and optionally one label line")
        table: List[List[int]] = []
        for line in lines[1:n + 1]:
            try:
                row = [int(tok) for tok in line.split()]
            except ValueError:
                raise CayleyTableError(f"non-integer entry in row {line!r}")
            if len(row) != n:
                raise CayleyTableError(f"row {line!r} does not have {n} entries")
            table.append(row)
        labels = None
        if len(lines) == n + 2:
            labels = lines[n + 1].split()
            if len(labels) != n:
                raise CayleyTableError(f"label line does not have {n} labels")
        return cls(table, labels, name, associativity_bound)

    @classmethod
    def from_file(cls, filepath, associativity_bound: int = DEFAULT_ASSOCIATIVITY_BOUND) -> 'FiniteGroup':
        '''
        Reads a group from a Cayley-table file.
        '''
        with open(filepath, 'rb') as table_file:
            return cls.from_text(table_file.read(), "file:" + str(filepath), associativity_bound)

    def to_text(self, with_labels: bool = True) -> str:
        '''
        Serializes the group to the Cayley-table text format
        '''
        lines = [str(self._order)]
        lines += [" ".join(str(x) for x in row) for row in self._table]
        if with_labels:
            lines.append(" ".join(self._labels))
        return "\n".join(lines) + "\n"

    def to_file(self, filepath):
        with open(filepath, 'w') as table_file:
            table_file.write(self.to_text())

    @property
    def order(self) -> int:
        return self._order

    @property
    def table(self) -> Tuple[Tuple[int, ...], ...]:
        return self._table

    @property
    def identity(self) -> int:
        return 0

    @property
    def inverse(self) -> Tuple[int, ...]:
        return self._inverse

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def name(self) -> str:
        return self._name

    def __len__(self):
        return self._order

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self._hash == other._hash and self._table == other._table

    def __hash__(self):
        return self._hash

    def __str__(self):
        return f"{self._name}_n{self._order}"

    def __repr__(self):
        return f"FiniteGroup({self._name!r}, order={self._order})"

    def __getstate__(self):
        state = dict(self.__dict__)
        # cached properties are rebuilt on demand after unpickling
        for key in ("quotients", "co_quotients", "element_orders", "is_abelian", "_label_index"):
            state.pop(key, None)
        return state

    def mul(self, i: int, j: int) -> int:
        return self._table[i][j]

    def inv(self, i: int) -> int:
        return self._inverse[i]

    def label(self, i: int) -> str:
        return self._labels[i]

    @cached_property
    def _label_index(self):
        return {label: i for i, label in enumerate(self._labels)}

    def index_of(self, label: str) -> int:
        '''
        Returns the index of the element with the given label
        '''
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element label of {self._name}")

    @cached_property
    def quotients(self) -> List[List[int]]:
        '''
        quotients[x][y] = x * y^-1, the external difference of x over y
        '''
        t, inv = self._table, self._inverse
        return [[t[x][inv[y]] for y in range(self._order)] for x in range(self._order)]

    @cached_property
    def co_quotients(self) -> List[List[int]]:
        '''
        co_quotients[x][y] = y^-1 * x
        '''
        t, inv = self._table, self._inverse
        return [[t[inv[y]][x] for y in range(self._order)] for x in range(self._order)]

    @cached_property
    def element_orders(self) -> Tuple[int, ...]:
        orders = []
        for i in range(self._order):
            x, k = i, 1
            while x != 0:
                x = self._table[x][i]
                k += 1
            orders.append(k)
        return tuple(orders)

    def element_order(self, i: int) -> int:
        return self.element_orders[i]

    @cached_property
    def is_abelian(self) -> bool:
        arr = self.as_array()
        return bool(np.array_equal(arr, arr.T))

    def as_array(self) -> np.ndarray:
        '''
        Read-only numpy view of the table
        '''
        arr = np.asarray(self._table, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def power(self, i: int, e: int) -> int:
        e %= self.element_orders[i]
        x = 0
        for _ in range(e):
            x = self._table[x][i]
        return x

    def subgroup_closure(self, generators: Iterable[int]) -> frozenset:
        '''
        Returns the subgroup generated by the given elements
        '''
        gens = list(generators)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self._table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)


class GroupMap(object):
    '''
    Multiplication-preserving bijection between two groups
    (an automorphism when source and target coincide).
    '''

    def __init__(self, source: FiniteGroup, target: FiniteGroup, image: Sequence[int], validate: bool = True):
        self._source = source
        self._target = target
        self._image: Tuple[int, ...] = tuple(int(x) for x in image)
        if validate:
            self._validate()

    def _validate(self):
        n = self._source.order
        if self._target.order != n or len(self._image) != n:
            raise GroupMismatchError("a group map needs groups of the same order")
        if sorted(self._image) != list(range(n)):
            raise GroupMismatchError("image is not a bijection")
        if self._image[0] != 0:
            raise GroupMismatchError("identity must map to identity")
        if not self.preserves_multiplication():
            raise GroupMismatchError("map does not preserve multiplication")

    def preserves_multiplication(self) -> bool:
        src = self._source.as_array()
        img = np.asarray(self._image)
        tgt = self._target.as_array()
        return bool(np.array_equal(img[src], tgt[img[:, None], img[None, :]]))

    @property
    def source(self) -> FiniteGroup:
        return self._source

    @property
    def target(self) -> FiniteGroup:
        return self._target

    @property
    def image(self) -> Tuple[int, ...]:
        return self._image

    def __call__(self, i: int) -> int:
        return self._image[i]

    def __eq__(self, other):
        if not isinstance(other, GroupMap):
            return NotImplemented
        return self._image == other._image and self._source == other._source and self._target == other._target

    def __hash__(self):
        return hash(self._image)

    def __repr__(self):
        return f"GroupMap({self._source.name} -> {self._target.name}, {list(self._image)})"

    def compose(self, first: 'GroupMap') -> 'GroupMap':
        '''
        Returns self o first (apply first, then self)
        '''
        if first.target != self._source:
            raise GroupMismatchError("cannot compose maps with mismatched groups")
        return GroupMap(first.source, self._target, [self._image[x] for x in first.image], validate=False)

    def inverse(self) -> 'GroupMap':
        inv = [0] * len(self._image)
        for x, y in enumerate(self._image):
            inv[y] = x
        return GroupMap(self._target, self._source, inv, validate=False)

    @classmethod
    def identity(cls, group: FiniteGroup) -> 'GroupMap':
        return cls(group, group, range(group.order), validate=False)

    @classmethod
    def conjugation(cls, group: FiniteGroup, g: int) -> 'GroupMap':
        '''
        Inner automorphism x -> g^-1 x g
        '''
        t, gi = group.table, group.inv(g)
        return cls(group, group, [t[t[gi][x]][g] for x in range(group.order)], validate=False)


def construct_cyclic(n: int) -> FiniteGroup:
    '''
    Z_n written additively, element i labeled "i"
    '''
    if n < 1:
        raise InvalidOrderError(f"cyclic group order must be positive, got {n}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, [str(i) for i in range(n)], f"Z{n}")


def _strip_parens(label: str) -> str:
    if label.startswith("(") and label.endswith(")"):
        return label[1:-1]
    return label


def construct_direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    '''
    a x b on pairs, ordered lexicographically by (index in a, index in b)
    '''
    na, nb = a.order, b.order
    ta, tb = a.table, b.table
    table = [[ta[i // nb][j // nb] * nb + tb[i % nb][j % nb] for j in range(na * nb)]
             for i in range(na * nb)]
    labels = [f"({_strip_parens(la)},{_strip_parens(lb)})" for la in a.labels for lb in b.labels]
    return FiniteGroup(table, labels, f"{a.name}x{b.name}")


def dihedral_index(n: int, reflection: int, rotation: int) -> int:
    '''
    Index of s^reflection r^rotation in construct_dihedral(n)
    '''
    half = n // 2
    return (reflection % 2) * half + rotation % half


def construct_dihedral(n: int) -> FiniteGroup:
    '''
    Dihedral group of order n, elements s^i r^j ordered
    e, r, ..., r^(n/2-1), s, sr, ..., sr^(n/2-1), with r.s = s.r^-1
    '''
    if n < 2 or n % 2:
        raise InvalidOrderError(f"dihedral group order must be even and at least 2, got {n}")
    half = n // 2

    def word(x):
        return divmod(x, half)

    table = []
    for x in range(n):
        a, b = word(x)
        row = []
        for y in range(n):
            c, d = word(y)
            # s^a r^b s^c r^d = s^(a+c) r^((-1)^c b + d)
            rot = (-b if c else b) + d
            row.append(dihedral_index(n, a + c, rot))
        table.append(row)
    labels = []
    for x in range(n):
        a, b = word(x)
        rot = "" if b == 0 else ("r" if b == 1 else f"r^{b}")
        labels.append(("s" + rot) if a else (rot or "e"))
    return FiniteGroup(table, labels, f"D{n}")


def construct_semidirect(p: int, q: int, action: int) -> FiniteGroup:
    '''
    Z_p x| Z_q on pairs (x, y) with (x1,y1)(x2,y2) = (x1 + action^y1 x2, y1 + y2),
    ordered lexicographically in (y, x).
    A trivial action (action = 1) gives the direct product.
    '''
    if not (isprime(p) and isprime(q)):
        raise InvalidPresentationError(f"p and q must be prime, got p={p}, q={q}")
    if (p - 1) % q:
        raise InvalidPresentationError(f"q={q} does not divide p-1={p - 1}")
    action %= p
    if action == 0 or pow(action, q, p) != 1:
        raise InvalidPresentationError(f"action {action} does not have order dividing {q} modulo {p}")
    powers = [pow(action, y, p) for y in range(q)]
    n = p * q
    table = []
    for i in range(n):
        y1, x1 = divmod(i, p)
        row = []
        for j in range(n):
            y2, x2 = divmod(j, p)
            row.append(((y1 + y2) % q) * p + (x1 + powers[y1] * x2) % p)
        table.append(row)
    labels = [f"({i % p},{i // p})" for i in range(n)]
    return FiniteGroup(table, labels, f"SD({p},{q},{action})")


def parse_cayley_table(text, name: str = "group") -> FiniteGroup:
    '''
    Parses and validates a Cayley table in the text format
    '''
    return FiniteGroup.from_text(text, name)


def read_group_file(path) -> FiniteGroup:
    if not os.path.exists(path):
        raise CayleyTableError(f"no such Cayley table file: {path}")
    return FiniteGroup.from_file(path)
