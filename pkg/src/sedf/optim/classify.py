'''
Equivalence of block families under automorphisms, left and right
translations and (by default) reordering of the blocks, and the partition of
a list of families into equivalence classes through canonical forms.

A transform A -> h.alpha(A).g equals A -> (hg).beta(A) with beta = alpha
followed by conjugation by g, so canonical forms only range over
automorphisms and left translations.
'''
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import time

from src.sedf.errors import GroupMismatchError, ShapeError
from src.sedf.family import BlockFamily, map_family
from src.sedf.group.automorphism import automorphisms, find_isomorphism
from src.sedf.group.catalog import isomorphism_class_witness
from src.sedf.group.finite_group import FiniteGroup, GroupMap
from src.sedf.optim.engine import Engine

logger = logging.getLogger(__name__)

Key = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True, order=True)
class CanonicalForm:
    '''
    Least serialization of a family over all its transforms, with the group
    it lives in. Within one group, equal forms mean equivalent families.
    '''
    group_name: str
    key: Key
    block_permutation: bool = field(default=True, compare=False)

    def family(self, group: FiniteGroup) -> BlockFamily:
        if group.name != self.group_name:
            raise GroupMismatchError(f"form computed in {self.group_name}, not in {group.name}")
        return BlockFamily(group, self.key)

    def to_json_obj(self) -> Dict:
        return {"group": self.group_name, "key": [list(block) for block in self.key]}

    def __str__(self):
        return self.group_name + ": " + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.key)


@dataclass(frozen=True)
class EquivalenceWitness:
    '''
    y_{permutation[i]} = left . automorphism(x_i) . right
    The automorphism is an isomorphism when x and y live in different groups.
    '''
    automorphism: GroupMap
    left: int
    right: int
    permutation: Tuple[int, ...]

    def apply(self, fam: BlockFamily) -> BlockFamily:
        phi = self.automorphism
        t = phi.target.table
        images = [[t[t[self.left][phi(x)]][self.right] for x in block] for block in fam.blocks]
        blocks: List[Optional[List[int]]] = [None] * len(images)
        for i, image in enumerate(images):
            blocks[self.permutation[i]] = image
        return BlockFamily(phi.target, blocks)

    def to_json_obj(self) -> Dict:
        g = self.automorphism.target
        return {"automorphism": [g.label(x) for x in self.automorphism.image],
                "left": g.label(self.left), "right": g.label(self.right),
                "permutation": list(self.permutation)}


def _key(blocks: Sequence[Sequence[int]], allow_block_permutation: bool) -> Key:
    key = [tuple(sorted(block)) for block in blocks]
    if allow_block_permutation:
        key.sort()
    return tuple(key)


def _canonical_transform(fam: BlockFamily, allow_block_permutation: bool) -> Tuple[Key, GroupMap, int]:
    '''
    Least key over every automorphism and left translation, with the first
    (automorphism, translation) reaching it
    '''
    g = fam.group
    table = g.table
    blocks = fam.blocks
    best = None
    for alpha in automorphisms(g):
        moved = [[alpha(x) for x in block] for block in blocks]
        for h in range(g.order):
            row = table[h]
            key = _key([[row[x] for x in block] for block in moved], allow_block_permutation)
            if best is None or key < best[0]:
                best = (key, alpha, h)
    return best


def canonical_form(fam: BlockFamily, allow_block_permutation: bool = True) -> CanonicalForm:
    '''
    Canonical form of a family in its own group. With
    allow_block_permutation=False the block order is part of the form.
    '''
    key, _, _ = _canonical_transform(fam, allow_block_permutation)
    return CanonicalForm(fam.group.name, key, allow_block_permutation)


def cross_group_key(fam: BlockFamily, allow_block_permutation: bool = True) -> Tuple[str, CanonicalForm]:
    '''
    (isomorphism class witness, canonical form computed in that witness):
    equal keys mean equivalent families even across isomorphic groups
    '''
    witness = isomorphism_class_witness(fam.group) or fam.group
    if witness != fam.group:
        fam = map_family(fam, find_isomorphism(fam.group, witness))
    return witness.name, canonical_form(fam, allow_block_permutation)


def _block_shape(fam: BlockFamily) -> Tuple[int, ...]:
    return tuple(sorted(fam.sizes))


def _match_blocks(image: BlockFamily, target: BlockFamily) -> Optional[Tuple[int, ...]]:
    position = {block: j for j, block in enumerate(target.blocks)}
    permutation = tuple(position.get(block, -1) for block in image.blocks)
    if -1 in permutation:
        return None
    return permutation


def equivalent(x: BlockFamily, y: BlockFamily,
               allow_block_permutation: bool = True) -> Tuple[bool, Optional[EquivalenceWitness]]:
    '''
    Whether some isomorphism alpha, elements g, h and block reindexing map x
    onto y, and a witness (alpha, h, g, permutation) when they do.
    Families of different shapes raise ShapeError; families over
    non-isomorphic groups are never equivalent.
    '''
    if x.m != y.m or _block_shape(x) != _block_shape(y):
        raise ShapeError(f"cannot compare families of block sizes {x.sizes} and {y.sizes}")
    if not allow_block_permutation and x.sizes != y.sizes:
        return False, None
    iso = GroupMap.identity(y.group)
    if x.group != y.group:
        if x.group.order != y.group.order:
            return False, None
        iso = find_isomorphism(x.group, y.group)
        if iso is None:
            return False, None
    moved = map_family(x, iso)

    key_x, alpha_x, t_x = _canonical_transform(moved, allow_block_permutation)
    key_y, alpha_y, t_y = _canonical_transform(y, allow_block_permutation)
    if key_x != key_y:
        return False, None

    # y = alpha_y^-1(t_y^-1 t_x) . (alpha_y^-1 alpha_x)(x)
    g = y.group
    back = alpha_y.inverse()
    alpha = back.compose(alpha_x).compose(iso)
    left = back(g.mul(g.inv(t_y), t_x))
    image = EquivalenceWitness(alpha, left, 0, tuple(range(x.m))).apply(x)
    permutation = _match_blocks(image, y)
    assert permutation is not None, f"witness does not map {x} onto {y}"
    return True, EquivalenceWitness(alpha, left, 0, permutation)


@dataclass
class EquivalenceClass:
    form: CanonicalForm
    representative: BlockFamily
    members: List[BlockFamily] = field(default_factory=list)

    def to_json_obj(self) -> Dict:
        return {"representative": self.representative.to_json_obj(),
                "size": len(self.members),
                "members": [fam.to_json_obj() for fam in self.members]}


class Classifier(Engine):
    '''
    Partitions families of one group by canonical form.

    Parameters:
      allow_block_permutation: treat families as unordered sets of blocks (default True)
    '''

    def run(self, families: Sequence[BlockFamily], params: Dict = None) -> List[EquivalenceClass]:
        current_params = self.merged_params(params)
        allow = current_params.get("allow_block_permutation", True)
        if not families:
            return []
        group = families[0].group
        for fam in families:
            if fam.group != group:
                raise GroupMismatchError(f"cannot classify families of {group.name} and {fam.group.name} together")
        start = time.perf_counter()
        classes: Dict[Key, EquivalenceClass] = {}
        for fam in families:
            form = canonical_form(fam, allow)
            if form.key not in classes:
                classes[form.key] = EquivalenceClass(form, form.family(group))
            classes[form.key].members.append(fam)
        result = sorted(classes.values(), key=lambda c: c.form.key)
        logger.info("[Classifier] %d families of %s in %d classes (%s block order) in %.3fs",
                    len(families), group.name, len(result), "free" if allow else "fixed",
                    time.perf_counter() - start)
        return result


def classify_families(families: Sequence[BlockFamily], allow_block_permutation: bool = True) -> List[EquivalenceClass]:
    return Classifier().run(families, {"allow_block_permutation": allow_block_permutation})
