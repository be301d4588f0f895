'''
Tests for group spec strings and the built-in catalogue.

'''
import unittest
import os

from src.sedf.errors import GroupSpecError
from src.sedf.group.catalog import (abelian_groups, abelian_invariant_factors, catalog, describe,
                                    isomorphism_class_witness, nonabelian_specs, parse_group_spec)
from src.sedf.tests.test_utils import TEST_FOLDER_DATA


class TestCatalog(unittest.TestCase):

    def test_parse_specs(self):
        self.assertEqual(parse_group_spec("Z17").order, 17)
        self.assertEqual(parse_group_spec(" Z3 x Z3 ").name, "Z3xZ3")
        self.assertEqual(parse_group_spec("D10").name, "D10")
        self.assertEqual(parse_group_spec("SD(7,3,2)").order, 21)
        file_group = parse_group_spec("file:" + TEST_FOLDER_DATA + os.path.sep + "z5.table")
        self.assertEqual(file_group, parse_group_spec("Z5"))

    def test_parse_is_cached(self):
        self.assertIs(parse_group_spec("Z13"), parse_group_spec("Z13"))

    def test_bad_specs(self):
        for spec in ("Q8", "D7", "Z3xD6", "SD(7,3,3)", "Z", "file:" + TEST_FOLDER_DATA + os.path.sep + "loop5.table"):
            with self.assertRaises(GroupSpecError, msg=spec):
                parse_group_spec(spec)

    def test_invariant_factors(self):
        self.assertEqual(abelian_invariant_factors(8), [[8], [2, 4], [2, 2, 2]])
        self.assertEqual(abelian_invariant_factors(12), [[12], [2, 6]])
        self.assertEqual(abelian_invariant_factors(9), [[9], [3, 3]])
        self.assertEqual(abelian_invariant_factors(17), [[17]])
        self.assertEqual(abelian_invariant_factors(1), [[1]])
        self.assertEqual(len(abelian_invariant_factors(16)), 5, 'five abelian groups of order 16')
        self.assertEqual(len(abelian_invariant_factors(24)), 3)

    def test_abelian_groups_cyclic_first(self):
        groups = abelian_groups(16)
        self.assertEqual(groups[0].name, "Z16")
        self.assertTrue(all(g.is_abelian and g.order == 16 for g in groups))

    def test_nonabelian_specs(self):
        self.assertEqual(nonabelian_specs(10), ["D10"])
        self.assertEqual(nonabelian_specs(21), ["SD(7,3,2)"])
        self.assertEqual(nonabelian_specs(6), ["D6"])
        for n in (5, 9, 13, 17, 19):
            self.assertEqual(nonabelian_specs(n), [], f'no nonabelian group of order {n}')

    def test_catalog_order(self):
        names = [g.name for g in catalog(6)]
        self.assertEqual(names, ["Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "D6"])
        self.assertEqual([g.name for g in catalog(6, abelian=False)], ["D6"])

    def test_isomorphism_class_witness(self):
        self.assertEqual(isomorphism_class_witness(parse_group_spec("Z2xZ3")).name, "Z6")
        self.assertEqual(isomorphism_class_witness(parse_group_spec("Z2xZ2")).name, "Z2xZ2")

    def test_describe(self):
        self.assertEqual(describe(parse_group_spec("D10")), {"spec": "D10", "order": 10, "abelian": False})


if __name__ == "__main__":
    unittest.main()
