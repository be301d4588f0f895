'''
Block families over a finite group, their external differences and the
EDF / SEDF / GSEDF / coEDF / coSEDF / PDS verifiers.

'''
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging

import numpy as np
from matplotlib import pyplot as plt
from matplotlib import colormaps

from src.sedf.errors import (DisjointnessError, FamilyFormatError, GroupMismatchError,
                             PreconditionError, ShapeError)
from src.sedf.group.catalog import parse_group_spec
from src.sedf.group.finite_group import FiniteGroup, GroupMap

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


class BlockFamily(object):
    '''
    Ordered list of pairwise disjoint, nonempty blocks of group elements.
    Each block is kept as a sorted tuple of element indices.
    '''

    def __init__(self, group: FiniteGroup, blocks: Iterable[Iterable[int]]):
        '''
        Constructor
        '''
        self._group = group
        self._blocks: Tuple[Block, ...] = tuple(tuple(sorted(int(x) for x in block)) for block in blocks)
        seen = set()
        for block in self._blocks:
            if not block:
                raise ShapeError("blocks must be nonempty")
            if len(set(block)) != len(block):
                raise DisjointnessError(f"block {self._render(block)} repeats an element")
            for x in block:
                if not 0 <= x < group.order:
                    raise ShapeError(f"{x} is not an element index of {group.name}")
                if x in seen:
                    raise DisjointnessError(f"element {group.label(x)} appears in two blocks")
                seen.add(x)

    @classmethod
    def from_labels(cls, group: FiniteGroup, blocks: Iterable[Iterable[str]]) -> 'BlockFamily':
        '''
        Builds a family from element labels
        '''
        try:
            return cls(group, [[group.index_of(str(label)) for label in block] for block in blocks])
        except KeyError as err:
            raise FamilyFormatError(err.args[0])

    @property
    def group(self) -> FiniteGroup:
        return self._group

    @property
    def blocks(self) -> Tuple[Block, ...]:
        return self._blocks

    @property
    def m(self) -> int:
        '''
        Number of blocks
        '''
        return len(self._blocks)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(block) for block in self._blocks)

    @property
    def k(self) -> Optional[int]:
        '''
        Common block size, None when the sizes differ
        '''
        sizes = set(self.sizes)
        return sizes.pop() if len(sizes) == 1 else None

    @property
    def union(self) -> frozenset:
        return frozenset(x for block in self._blocks for x in block)

    def sorted_blocks(self) -> Tuple[Block, ...]:
        '''
        Blocks in lexicographic order, the block-order-free view of the family
        '''
        return tuple(sorted(self._blocks))

    def __len__(self):
        return len(self._blocks)

    def __iter__(self):
        return iter(self._blocks)

    def __getitem__(self, i) -> Block:
        return self._blocks[i]

    def __eq__(self, other):
        if not isinstance(other, BlockFamily):
            return NotImplemented
        return self._blocks == other._blocks and self._group == other._group

    def __hash__(self):
        return hash((self._group, self._blocks))

    def __lt__(self, other: 'BlockFamily'):
        return self._blocks < other._blocks

    def _render(self, block: Sequence[int]) -> str:
        return "{" + ",".join(self._group.label(x) for x in block) + "}"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"BlockFamily({self.to_text()!r})"

    def to_text(self) -> str:
        '''
        Terse form "Z17: {0,1,4,5},{6,8,14,16}"
        '''
        return f"{self._group.name}: " + ",".join(self._render(block) for block in self._blocks)

    @classmethod
    def from_text(cls, text: str, group: Optional[FiniteGroup] = None) -> 'BlockFamily':
        '''
        Reads the terse form. The group is parsed from the spec string in front
        of the colon unless one is given.
        '''
        text = text.strip()
        brace = text.find("{")
        colon = text.rfind(":", 0, brace if brace >= 0 else len(text))
        if brace < 0 or colon < 0:
            raise FamilyFormatError(f"expected '<group>: {{...}},{{...}}', got {text!r}")
        if group is None:
            group = parse_group_spec(text[:colon].strip())
        return cls.from_labels(group, _split_blocks(text[colon + 1:]))

    def to_json_obj(self) -> Dict:
        return {"group": self._group.name,
                "blocks": [[self._group.label(x) for x in block] for block in self._blocks]}

    @classmethod
    def from_json_obj(cls, obj: Dict, group: Optional[FiniteGroup] = None) -> 'BlockFamily':
        if not isinstance(obj, dict) or "blocks" not in obj:
            raise FamilyFormatError("a family object needs a 'blocks' entry")
        if group is None:
            if "group" not in obj:
                raise FamilyFormatError("a family object needs a 'group' entry")
            group = parse_group_spec(str(obj["group"]))
        blocks = obj["blocks"]
        if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
            raise FamilyFormatError("'blocks' must be a list of lists of labels")
        if not all(blocks):
            raise FamilyFormatError("empty block in 'blocks'")
        return cls.from_labels(group, blocks)


def _split_blocks(body: str) -> List[List[str]]:
    '''
    Splits "{a,b},{(1,0),c}" into label lists; commas inside parentheses
    belong to the label.
    '''
    blocks: List[List[str]] = []
    current: Optional[List[str]] = None
    token = ""
    depth = 0
    for ch in body:
        if ch.isspace():
            continue
        if current is None:
            if ch == "{":
                current, token = [], ""
            elif ch != ",":
                raise FamilyFormatError(f"unexpected {ch!r} between blocks")
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in ",}":
            if token:
                current.append(token)
            elif ch == "," or current:
                raise FamilyFormatError("empty element label")
            token = ""
            if ch == "}":
                if not current:
                    raise FamilyFormatError("empty block {}")
                blocks.append(current)
                current = None
            continue
        token += ch
    if current is not None or depth:
        raise FamilyFormatError("unbalanced braces or parentheses")
    if not blocks:
        raise FamilyFormatError("no blocks")
    return blocks


@dataclass(frozen=True)
class GsedfProfile:
    '''
    Block sizes k_1..k_m and multiplicities lambda_1..lambda_m
    '''
    sizes: Tuple[int, ...]
    lambdas: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "lambdas", tuple(self.lambdas))
        if len(self.sizes) != len(self.lambdas):
            raise ShapeError("a profile needs one multiplicity per block size")
        if any(k < 1 for k in self.sizes) or any(lam < 1 for lam in self.lambdas):
            raise ShapeError("profile sizes and multiplicities must be positive")

    @classmethod
    def uniform(cls, m: int, k: int, lam: int) -> 'GsedfProfile':
        return cls((k,) * m, (lam,) * m)

    @property
    def m(self) -> int:
        return len(self.sizes)

    def __str__(self):
        return ",".join(map(str, self.sizes)) + ";" + ",".join(map(str, self.lambdas))


class DifferenceCounter(object):
    '''
    counts[d] = number of times d occurs as an external difference.
    Increments are journaled so a caller can checkpoint and roll back.
    '''

    def __init__(self, n: int):
        self._counts = [0] * n
        self._journal: List[int] = []

    @property
    def counts(self) -> List[int]:
        return self._counts

    @property
    def journal(self) -> List[int]:
        return self._journal

    def __getitem__(self, d: int) -> int:
        return self._counts[d]

    def __len__(self):
        return len(self._counts)

    def add(self, d: int) -> int:
        '''
        Counts one more occurrence of d and returns the new count
        '''
        self._counts[d] += 1
        self._journal.append(d)
        return self._counts[d]

    def checkpoint(self) -> int:
        return len(self._journal)

    def rollback(self, mark: int):
        '''
        Undoes every increment made since the checkpoint
        '''
        counts, journal = self._counts, self._journal
        while len(journal) > mark:
            counts[journal.pop()] -= 1

    def commit(self):
        self._journal.clear()

    @property
    def total(self) -> int:
        return sum(self._counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self._counts, dtype=np.int64)

    def covers(self, lam: int) -> bool:
        '''
        True iff the identity never occurs and every other element occurs lam times
        '''
        return self._counts[0] == 0 and all(c == lam for c in self._counts[1:])

    def histogram(self) -> Dict[int, int]:
        '''
        Maps each occurring count value to the number of non-identity elements having it
        '''
        hist: Dict[int, int] = {}
        for c in self._counts[1:]:
            hist[c] = hist.get(c, 0) + 1
        return dict(sorted(hist.items()))

    @classmethod
    def from_array(cls, counts: Iterable[int]) -> 'DifferenceCounter':
        counter = cls(0)
        counter._counts = [int(c) for c in counts]
        return counter


def _check_disjoint(a: Sequence[int], b: Sequence[int]):
    if not a or not b:
        raise ShapeError("difference operands must be nonempty")
    if set(a) & set(b):
        raise DisjointnessError("difference operands overlap")


def difference_multiset(a: Sequence[int], b: Sequence[int], g: FiniteGroup) -> DifferenceCounter:
    '''
    counts[d] = #{(x, y) in a x b : x y^-1 = d}
    '''
    _check_disjoint(a, b)
    quotients = np.asarray(g.quotients, dtype=np.int64)
    values = quotients[np.ix_(list(a), list(b))].ravel()
    counter = DifferenceCounter.from_array(np.bincount(values, minlength=g.order))
    return counter


def difference_table(a: Sequence[int], b: Sequence[int], g: FiniteGroup) -> List[List[int]]:
    '''
    Grid of x y^-1 with one row per x in a and one column per y in b
    '''
    q = g.quotients
    return [[q[x][y] for y in b] for x in a]


def external_difference_counts(fam: BlockFamily, mirrored: bool = False) -> np.ndarray:
    '''
    Row i counts the external differences from block i to the union of the
    others: x y^-1 (or y^-1 x when mirrored) with x in A_i, y outside A_i.
    '''
    g = fam.group
    table = np.asarray(g.co_quotients if mirrored else g.quotients, dtype=np.int64)
    rows = []
    for i, block in enumerate(fam.blocks):
        others = [y for j, other in enumerate(fam.blocks) if j != i for y in other]
        if not others:
            rows.append(np.zeros(g.order, dtype=np.int64))
            continue
        values = table[np.ix_(list(block), others)].ravel()
        rows.append(np.bincount(values, minlength=g.order))
    return np.vstack(rows)


def _require_uniform(fam: BlockFamily):
    if fam.m < 2:
        raise ShapeError(f"a difference family has at least 2 blocks, got {fam.m}")
    if fam.k is None:
        raise ShapeError(f"blocks have unequal sizes {fam.sizes}")


def _hits_exactly(counts: np.ndarray, lam) -> bool:
    return bool(counts[..., 0].max() == 0 and np.all(counts[..., 1:] == lam))


def verify_edf(fam: BlockFamily, lam: int) -> bool:
    '''
    (n,m,k,lam)-EDF: all external differences together hit every
    non-identity element lam times
    '''
    _require_uniform(fam)
    return _hits_exactly(external_difference_counts(fam).sum(axis=0), lam)


def verify_sedf(fam: BlockFamily, lam: int) -> bool:
    '''
    (n,m,k,lam)-SEDF: the external differences of each single block hit every
    non-identity element lam times
    '''
    _require_uniform(fam)
    return _hits_exactly(external_difference_counts(fam), lam)


def verify_coedf(fam: BlockFamily, lam: int) -> bool:
    _require_uniform(fam)
    return _hits_exactly(external_difference_counts(fam, mirrored=True).sum(axis=0), lam)


def verify_cosedf(fam: BlockFamily, lam: int) -> bool:
    '''
    SEDF condition on the mirrored differences y^-1 x
    '''
    _require_uniform(fam)
    return _hits_exactly(external_difference_counts(fam, mirrored=True), lam)


def verify_gsedf(fam: BlockFamily, profile: GsedfProfile) -> bool:
    if fam.m < 2:
        raise ShapeError(f"a difference family has at least 2 blocks, got {fam.m}")
    if fam.sizes != profile.sizes:
        raise ShapeError(f"block sizes {fam.sizes} do not match the profile {profile.sizes}")
    counts = external_difference_counts(fam)
    lambdas = np.asarray(profile.lambdas, dtype=np.int64)[:, None]
    return _hits_exactly(counts, lambdas)


def counting_identity_holds(n: int, profile: GsedfProfile) -> bool:
    '''
    Double counting for a GSEDF: lambda_i (n-1) = k_i * sum_{j != i} k_j
    '''
    total = sum(profile.sizes)
    return all(lam * (n - 1) == k * (total - k) for k, lam in zip(profile.sizes, profile.lambdas))


def verify_pds(d: Iterable[int], g: FiniteGroup, k: int, lam: int, mu: int) -> bool:
    '''
    Partial difference set check in an abelian group: |d| = k, internal
    differences hit each element of d lam times and each other non-identity
    element mu times.
    '''
    d = sorted(set(d))
    if not d:
        raise PreconditionError("a partial difference set is nonempty")
    if 0 in d:
        raise PreconditionError("a partial difference set does not contain the identity")
    if not g.is_abelian:
        raise PreconditionError("partial difference sets are only checked in abelian groups")
    if len(d) != k:
        return False
    q = np.asarray(g.quotients, dtype=np.int64)[np.ix_(d, d)]
    off_diagonal = q[~np.eye(len(d), dtype=bool)]
    counts = np.bincount(off_diagonal, minlength=g.order)
    inside = np.zeros(g.order, dtype=bool)
    inside[d] = True
    outside = ~inside
    outside[0] = False
    return bool(np.all(counts[inside] == lam) and np.all(counts[outside] == mu))


def near_complete_check(fam: BlockFamily) -> bool:
    '''
    For two blocks partitioning the non-identity elements of an abelian group:
    SEDF iff n = 1 mod 4, k = (n-1)/2 and the first block is a regular
    (n, (n-1)/2, (n-5)/4, (n-1)/4) partial difference set.
    '''
    g = fam.group
    n = g.order
    if fam.m != 2 or not g.is_abelian:
        raise PreconditionError("near-complete check needs two blocks in an abelian group")
    if fam.union != frozenset(range(1, n)):
        raise PreconditionError("blocks do not partition the non-identity elements")
    if n % 4 != 1 or fam.sizes != ((n - 1) // 2,) * 2:
        return False
    return verify_pds(fam.blocks[0], g, (n - 1) // 2, (n - 5) // 4, (n - 1) // 4)


def invert_family(fam: BlockFamily) -> BlockFamily:
    inv = fam.group.inverse
    return BlockFamily(fam.group, [[inv[x] for x in block] for block in fam.blocks])


def translate_family(fam: BlockFamily, g: int, side: str = "left") -> BlockFamily:
    '''
    Multiplies every block by g, on the left (gA) or on the right (Ag)
    '''
    t = fam.group.table
    if side == "left":
        blocks = [[t[g][x] for x in block] for block in fam.blocks]
    elif side == "right":
        blocks = [[t[x][g] for x in block] for block in fam.blocks]
    else:
        raise PreconditionError(f"side must be 'left' or 'right', got {side!r}")
    return BlockFamily(fam.group, blocks)


def map_family(fam: BlockFamily, phi: GroupMap) -> BlockFamily:
    if phi.source != fam.group:
        raise GroupMismatchError(f"map from {phi.source.name} applied to a family in {fam.group.name}")
    # an automorphism keeps the family on its own group object and name
    target = fam.group if phi.target == fam.group else phi.target
    return BlockFamily(target, [[phi(x) for x in block] for block in fam.blocks])


def verify(fam: BlockFamily, kind: str, lam: Optional[int] = None,
           profile: Optional[GsedfProfile] = None,
           pds: Optional[Tuple[int, int, int]] = None) -> bool:
    '''
    Dispatches to the verifier named by kind (edf, sedf, coedf, cosedf, gsedf, pds).
    For pds the first block is checked against pds = (k, lambda, mu).
    '''
    if kind == "gsedf":
        if profile is None:
            raise PreconditionError("gsedf verification needs a profile")
        return verify_gsedf(fam, profile)
    if kind == "pds":
        if pds is None:
            raise PreconditionError("pds verification needs k, lambda and mu")
        return verify_pds(fam.blocks[0], fam.group, *pds)
    verifiers = {"edf": verify_edf, "sedf": verify_sedf, "coedf": verify_coedf, "cosedf": verify_cosedf}
    if kind not in verifiers:
        raise PreconditionError(f"unknown verification kind {kind!r}")
    if lam is None:
        raise PreconditionError(f"{kind} verification needs lambda")
    verdict = verifiers[kind](fam, lam)
    logger.debug("%s verification of %s with lambda=%d: %s", kind, fam, lam, verdict)
    return verdict


def plot_differences(fam: BlockFamily, colormapname: str = "tab10", mirrored: bool = False):
    '''
    One bar chart per block of the external-difference counts of every
    non-identity element. Returns pyplot.
    '''
    counts = external_difference_counts(fam, mirrored)
    g = fam.group
    colormap = colormaps[colormapname]
    fig, axes = plt.subplots(fam.m, 1, sharex=True, squeeze=False,
                             figsize=(max(6.0, 0.3 * g.order), 1.8 * fam.m))
    xs = np.arange(1, g.order)
    for i, ax in enumerate(axes[:, 0]):
        ax.bar(xs, counts[i, 1:], color=colormap(i % colormap.N), edgecolor='black')
        ax.set_ylabel(f"A{i + 1}")
        ax.set_ylim(0, max(1, int(counts.max())) + 0.5)
    axes[-1, 0].set_xticks(xs)
    axes[-1, 0].set_xticklabels([g.label(x) for x in xs], rotation=90, fontsize=7)
    kind = "y^-1 x" if mirrored else "x y^-1"
    axes[0, 0].set_title(f"External differences {kind} in {g.name}")
    fig.tight_layout()
    return plt


def ensure_family(obj, group: Optional[FiniteGroup] = None) -> BlockFamily:
    '''
    Accepts a BlockFamily, a JSON object or the terse text form
    '''
    if isinstance(obj, BlockFamily):
        return obj
    if isinstance(obj, dict):
        return BlockFamily.from_json_obj(obj, group)
    if isinstance(obj, str):
        return BlockFamily.from_text(obj, group)
    raise FamilyFormatError(f"cannot read a family from {type(obj).__name__}")

