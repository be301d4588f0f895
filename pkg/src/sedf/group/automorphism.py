'''
Automorphism groups and isomorphism tests by backtracking over the
images of a small generating set.

'''
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

from src.sedf.group.finite_group import FiniteGroup, GroupMap


def greedy_generators(group: FiniteGroup) -> List[int]:
    '''
    Generating set picked smallest-index-first: an element is added when it
    is not already in the subgroup generated so far.
    '''
    gens: List[int] = []
    span = frozenset([0])
    for x in range(1, group.order):
        if len(span) == group.order:
            break
        if x not in span:
            gens.append(x)
            span = group.subgroup_closure(gens)
    return gens


def _word_tree(group: FiniteGroup, gens: Sequence[int]) -> List[Tuple[int, int, int]]:
    '''
    Breadth-first spanning tree of the Cayley graph: (element, parent, generator
    position) with element = parent * gens[position], identity excluded.
    '''
    tree = []
    seen = {0}
    frontier = [0]
    table = group.table
    while frontier:
        nxt = []
        for x in frontier:
            for pos, g in enumerate(gens):
                y = table[x][g]
                if y not in seen:
                    seen.add(y)
                    tree.append((y, x, pos))
                    nxt.append(y)
        frontier = nxt
    return tree


def _extend(source: FiniteGroup, target: FiniteGroup, gens: Sequence[int],
            tree: Sequence[Tuple[int, int, int]], images: Sequence[int]) -> Optional[List[int]]:
    '''
    Extends generator images to the whole group and keeps the result only if it
    is a bijection respecting right multiplication by every generator.
    '''
    n = source.order
    image = [-1] * n
    image[0] = 0
    tt = target.table
    for y, x, pos in tree:
        image[y] = tt[image[x]][images[pos]]
    if len(set(image)) != n:
        return None
    st = source.table
    for x in range(n):
        ix = image[x]
        for pos, g in enumerate(gens):
            if image[st[x][g]] != tt[ix][images[pos]]:
                return None
    return image


def _candidate_maps(source: FiniteGroup, target: FiniteGroup) -> Iterator[List[int]]:
    if source.order != target.order:
        return
    if sorted(source.element_orders) != sorted(target.element_orders):
        return
    if source.is_abelian != target.is_abelian:
        return
    gens = greedy_generators(source)
    tree = _word_tree(source, gens)
    by_order = {}
    for y in range(target.order):
        by_order.setdefault(target.element_order(y), []).append(y)
    candidates = [by_order.get(source.element_order(g), []) for g in gens]
    images: List[int] = []

    def backtrack(depth):
        if depth == len(gens):
            image = _extend(source, target, gens, tree, images)
            if image is not None:
                yield image
            return
        for y in candidates[depth]:
            if y in images:
                continue
            images.append(y)
            yield from backtrack(depth + 1)
            images.pop()

    if not gens:
        yield [0]
        return
    yield from backtrack(0)


@lru_cache(maxsize=64)
def _automorphism_images(group: FiniteGroup) -> Tuple[Tuple[int, ...], ...]:
    images = []
    for image in _candidate_maps(group, group):
        phi = GroupMap(group, group, image, validate=False)
        assert phi.preserves_multiplication()
        images.append(phi.image)
    return tuple(sorted(images))


def automorphisms(group: FiniteGroup) -> Tuple[GroupMap, ...]:
    '''
    The whole automorphism group, sorted by image array.
    Each candidate is checked as a full homomorphic bijection. The image arrays
    are cached per table; the maps are always bound to group itself.
    '''
    return tuple(GroupMap(group, group, image, validate=False) for image in _automorphism_images(group))


def find_isomorphism(a: FiniteGroup, b: FiniteGroup) -> Optional[GroupMap]:
    '''
    Some isomorphism from a to b, None when the groups are not isomorphic
    '''
    if a == b:
        return GroupMap(a, b, range(a.order), validate=False)
    for image in _candidate_maps(a, b):
        phi = GroupMap(a, b, image, validate=False)
        if phi.preserves_multiplication():
            return phi
    return None


def are_isomorphic(a: FiniteGroup, b: FiniteGroup) -> bool:
    return find_isomorphism(a, b) is not None
