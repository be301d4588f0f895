'''
Reproduction of the parameter tables and the exhaustive existence tables:
admissible parameters up to a given order, and the number of non-equivalent
SEDFs in every catalogued abelian or nonabelian group of order up to 24.

'''
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import logging
import time

from src.sedf.errors import ParameterError
from src.sedf.family import BlockFamily
from src.sedf.group.catalog import abelian_groups, nonabelian_groups
from src.sedf.group.finite_group import FiniteGroup
from src.sedf.optim.classify import classify_families, equivalent
from src.sedf.optim.constructions import (construct_cyclotomic, construct_dihedral_sedf, construct_even_k,
                                          construct_pa_st, construct_paley, cyclotomic_form_holds,
                                          prime_power)
from src.sedf.optim.search import BacktrackSearch
from src.sedf.params import ParamSet, enumerate_admissible, nonexistence_filters

logger = logging.getLogger(__name__)

ADMISSIBLE_MAX_ORDER = 64
SEARCH_MAX_ORDER = 24

# construction name -> case label shown in the existence tables
CASE_LABELS = {"pa-st": "(a)", "paley": "(b)", "cyclotomic": "(c)", "even-k": "(d)", "dihedral": "dihedral"}


@dataclass
class TableCell:
    '''
    One (parameters, group) entry of an existence table. count is None when
    a nonexistence filter settles the cell without searching.
    '''
    params: ParamSet
    group_name: str
    count: Optional[int] = None
    filters: Tuple[str, ...] = ()
    representatives: List[BlockFamily] = field(default_factory=list)
    cases: List[Tuple[str, ...]] = field(default_factory=list)
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def searched(self) -> bool:
        return self.count is not None

    def to_json_obj(self) -> Dict:
        return {"parameters": self.params.to_json_obj(), "group": self.group_name,
                "count": self.count, "filters": list(self.filters),
                "representatives": [fam.to_json_obj() for fam in self.representatives],
                "cases": [list(c) for c in self.cases], "nodes": self.nodes}


def admissible_table(max_n: int = ADMISSIBLE_MAX_ORDER) -> List[ParamSet]:
    '''
    Non-trivial admissible parameter sets, tagged with the filters ruling
    them out in abelian groups
    '''
    return enumerate_admissible(max_n, group_class="abelian")


def search_parameter_table(max_n: int = SEARCH_MAX_ORDER) -> List[ParamSet]:
    return enumerate_admissible(max_n, group_class="abelian")


def known_constructions(params: ParamSet) -> List[Tuple[str, BlockFamily]]:
    '''
    (case label, family) for every explicit construction with these parameters:
    (a) the k^2+1 interval family, (b) squares and non-squares, (c) cyclotomic
    class pairs, (d) the even-k family, and the dihedral one
    '''
    n, m, k, lam = params.as_tuple()
    if m != 2:
        return []
    found = []
    if lam == 1 and n == k * k + 1:
        found.append((CASE_LABELS["pa-st"], construct_pa_st(k)))
    if k == (n - 1) // 2 and n % 4 == 1 and prime_power(n) is not None:
        found.append((CASE_LABELS["paley"], construct_paley(n)))
    for e in (4, 6):
        if (n - 1) == e * k and cyclotomic_form_holds(n, e):
            found.extend((CASE_LABELS["cyclotomic"], fam) for fam in construct_cyclotomic(n, e))
    if lam == 1 and n == k * k + 1 and k % 2 == 0:
        found.append((CASE_LABELS["even-k"], construct_even_k(k // 2)))
    if lam == 1 and n == k * k + 1 and k % 2 == 1 and k >= 3:
        found.append((CASE_LABELS["dihedral"], construct_dihedral_sedf(k)))
    return found


def _case_labels(representative: BlockFamily, constructions: List[Tuple[str, BlockFamily]]) -> Tuple[str, ...]:
    labels = []
    for label, fam in constructions:
        if label not in labels and equivalent(representative, fam)[0]:
            labels.append(label)
    return tuple(labels)


def _evaluate_cell(task) -> TableCell:
    params, group, group_class, skip_filtered, search_params = task
    cell = TableCell(params, group.name, filters=tuple(nonexistence_filters(params, group_class)))
    if skip_filtered and cell.filters:
        logger.debug("%s in %s ruled out by %s", params, group.name, ", ".join(cell.filters))
        return cell
    start = time.perf_counter()
    engine = BacktrackSearch(search_params)
    families = engine.run(group, params.m, params.k, params.lam)
    classes = classify_families(families)
    constructions = known_constructions(params)
    cell.count = len(classes)
    cell.representatives = [c.representative for c in classes]
    cell.cases = [_case_labels(c.representative, constructions) for c in classes]
    cell.nodes = engine.stats.nodes
    cell.elapsed = time.perf_counter() - start
    logger.info("%s in %s: %d classes from %d families, %d nodes, %.3fs",
                params, group.name, cell.count, len(families), cell.nodes, cell.elapsed)
    return cell


def existence_table(abelian: bool, max_n: int = SEARCH_MAX_ORDER, skip_filtered: bool = True,
                    jobs: int = 1, search_params: Dict = None) -> List[TableCell]:
    '''
    One cell per (admissible parameters, catalogued group of that order), in
    parameter then catalogue order. With skip_filtered, cells ruled out by a
    nonexistence filter of the group's class are reported without searching.
    '''
    if max_n > SEARCH_MAX_ORDER:
        raise ParameterError(f"existence tables are computed up to order {SEARCH_MAX_ORDER}, got {max_n}")
    tasks = []
    for params in enumerate_admissible(max_n):
        if abelian:
            groups: List[FiniteGroup] = abelian_groups(params.n)
        else:
            groups = nonabelian_groups(params.n)
        for i, group in enumerate(groups):
            # the abelian catalogue lists the cyclic group first
            group_class = "any" if not abelian else ("cyclic" if i == 0 else "abelian")
            tasks.append((params, group, group_class, skip_filtered, dict(search_params or {})))
    logger.info("%s existence table: %d cells, jobs=%d", "abelian" if abelian else "nonabelian", len(tasks), jobs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_evaluate_cell, tasks))
    return [_evaluate_cell(task) for task in tasks]


def abelian_existence_table(skip_filtered: bool = True, jobs: int = 1) -> List[TableCell]:
    return existence_table(True, skip_filtered=skip_filtered, jobs=jobs)


def nonabelian_existence_table(skip_filtered: bool = True, jobs: int = 1) -> List[TableCell]:
    return existence_table(False, skip_filtered=skip_filtered, jobs=jobs)


def find_cell(cells: List[TableCell], params: Tuple[int, int, int, int], group_name: str) -> TableCell:
    for cell in cells:
        if cell.params.as_tuple() == tuple(params) and cell.group_name == group_name:
            return cell
    raise KeyError(f"no cell {params} in {group_name}")


def format_parameter_rows(rows: List[ParamSet]) -> str:
    lines = [f"{'n':>4} {'m':>4} {'k':>4} {'lambda':>7}  filters"]
    for row in rows:
        lines.append(f"{row.n:>4} {row.m:>4} {row.k:>4} {row.lam:>7}  {', '.join(row.filters_hit) or '-'}")
    return "\n".join(lines)


def format_cells(cells: List[TableCell], show_filtered: bool = False) -> str:
    '''
    Parameters, Group, Count, Example, Case
    '''
    header = f"{'Parameters':<14} {'Group':<12} {'Count':>5}  {'Example':<40} Case"
    lines = [header, "-" * len(header)]
    for cell in cells:
        if not cell.searched:
            if show_filtered:
                lines.append(f"{str(cell.params):<14} {cell.group_name:<12} {'-':>5}  ruled out: {', '.join(cell.filters)}")
            continue
        if not cell.representatives:
            lines.append(f"{str(cell.params):<14} {cell.group_name:<12} {cell.count:>5}")
            continue
        for i, (fam, cases) in enumerate(zip(cell.representatives, cell.cases)):
            example = ",".join("{" + ",".join(fam.group.label(x) for x in b) + "}" for b in fam.blocks)
            lead = (f"{str(cell.params):<14} {cell.group_name:<12} {cell.count:>5}" if i == 0
                    else " " * 33)
            lines.append(f"{lead}  {example:<40} {','.join(cases) or '-'}")
    return "\n".join(lines)
