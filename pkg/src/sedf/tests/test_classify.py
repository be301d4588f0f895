'''
Tests for canonical forms, pairwise equivalence and classification.

'''
import os
import random
import unittest

from src.sedf.errors import GroupMismatchError, ShapeError
from src.sedf.family import BlockFamily, map_family, translate_family
from src.sedf.group.automorphism import automorphisms, find_isomorphism
from src.sedf.group.catalog import parse_group_spec
from src.sedf.group.finite_group import FiniteGroup
from src.sedf.optim.classify import (CanonicalForm, Classifier, canonical_form, classify_families,
                                     cross_group_key, equivalent)
from src.sedf.optim.constructions import (composite_pair, construct_cyclotomic, construct_dihedral_sedf,
                                          construct_even_k, construct_pa_st, construct_paley,
                                          construct_trivial, gsedf_automorphic_variant)
from src.sedf.optim.search import search_all
from src.sedf.tests.test_utils import TEST_FOLDER_DATA


def family(spec, *blocks):
    return BlockFamily(parse_group_spec(spec), blocks)


def random_transform(fam, rng):
    '''
    A random automorphism, left and right translation and block reordering of fam
    '''
    g = fam.group
    image = map_family(fam, rng.choice(automorphisms(g)))
    image = translate_family(image, rng.randrange(g.order), "left")
    image = translate_family(image, rng.randrange(g.order), "right")
    blocks = list(image.blocks)
    rng.shuffle(blocks)
    return BlockFamily(g, blocks)


class TestEquivalence(unittest.TestCase):

    def test_translation_in_z5(self):
        x = construct_pa_st(2)
        y = family("Z5", [2, 3], [1, 4])
        same, witness = equivalent(x, y)
        self.assertTrue(same)
        self.assertEqual(witness.apply(x), y)
        self.assertEqual(translate_family(x, 2), family("Z5", [2, 3], [4, 1]))

    def test_multiplication_in_z5(self):
        x = construct_pa_st(2)
        y = family("Z5", [0, 2], [3, 4])
        same, witness = equivalent(x, y)
        self.assertTrue(same)
        self.assertEqual(witness.apply(x), y)
        self.assertTrue(equivalent(x, construct_paley(5))[0], 'the two constructions agree for n = 5')

    def test_z17_families(self):
        even = construct_even_k(2)
        cyclotomic = family("Z17", [1, 4, 13, 16], [2, 8, 9, 15])
        same, witness = equivalent(even, cyclotomic)
        self.assertTrue(same)
        self.assertEqual(witness.apply(even), cyclotomic)
        self.assertFalse(equivalent(construct_pa_st(4), even)[0])
        self.assertEqual(equivalent(construct_pa_st(4), even), (False, None))
        self.assertTrue(equivalent(construct_cyclotomic(17, 4)[1], cyclotomic)[0])

    def test_composite_pair_is_not_equivalent(self):
        first, second = composite_pair(2, 2)
        self.assertFalse(equivalent(first, second)[0])
        first, second = composite_pair(3, 2)
        self.assertFalse(equivalent(first, second)[0])

    def test_witness_lands_on_the_target_group(self):
        file_z5 = FiniteGroup.from_file(TEST_FOLDER_DATA + os.path.sep + "z5.table")
        automorphisms(construct_pa_st(2).group)
        x = construct_pa_st(2)
        y = BlockFamily(file_z5, [[2, 3], [1, 4]])
        same, witness = equivalent(x, y)
        self.assertTrue(same)
        self.assertIs(witness.automorphism.target, file_z5)
        image = witness.apply(x)
        self.assertEqual(image, y)
        self.assertIs(image.group, file_z5)
        self.assertEqual(image.to_text(), y.to_text())

    def test_cyclic_and_dihedral_are_not_equivalent(self):
        self.assertEqual(equivalent(construct_pa_st(3), construct_dihedral_sedf(3)), (False, None))

    def test_across_isomorphic_groups(self):
        x = construct_pa_st(3)
        z2z5 = parse_group_spec("Z2xZ5")
        y = translate_family(map_family(x, find_isomorphism(x.group, z2z5)), 3)
        same, witness = equivalent(x, y)
        self.assertTrue(same)
        self.assertEqual(witness.apply(x), y)
        self.assertEqual(witness.automorphism.target, z2z5)
        self.assertEqual(cross_group_key(y), cross_group_key(x))
        self.assertEqual(cross_group_key(y)[0], "Z10")
        self.assertTrue(equivalent(construct_trivial(parse_group_spec("Z6")),
                                   construct_trivial(parse_group_spec("Z2xZ3")))[0])

    def test_nonabelian_witness(self):
        x = construct_dihedral_sedf(3)
        rng = random.Random(7)
        for _ in range(10):
            y = random_transform(x, rng)
            same, witness = equivalent(x, y)
            self.assertTrue(same)
            self.assertEqual(witness.apply(x), y)
            self.assertEqual(sorted(witness.to_json_obj()), ["automorphism", "left", "permutation", "right"])

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            equivalent(construct_pa_st(2), construct_pa_st(3))
        with self.assertRaises(ShapeError):
            equivalent(construct_trivial(parse_group_spec("Z5")), construct_pa_st(2))

    def test_strict_block_order(self):
        x = gsedf_automorphic_variant(2, 3)
        swapped = BlockFamily(x.group, [x.blocks[1], x.blocks[0]])
        same, witness = equivalent(x, swapped)
        self.assertTrue(same)
        self.assertEqual(witness.permutation, (1, 0))
        self.assertEqual(witness.apply(x), swapped)
        self.assertEqual(equivalent(x, swapped, allow_block_permutation=False), (False, None))
        self.assertTrue(equivalent(x, translate_family(x, 5), allow_block_permutation=False)[0])


class TestCanonicalForm(unittest.TestCase):

    def test_invariance(self):
        rng = random.Random(2024)
        for fam in (construct_pa_st(4), construct_even_k(2), construct_paley(9),
                    construct_dihedral_sedf(3), gsedf_automorphic_variant(2, 3)):
            form = canonical_form(fam)
            for _ in range(8):
                self.assertEqual(canonical_form(random_transform(fam, rng)), form, str(fam))

    def test_form_is_a_member_of_the_class(self):
        fam = construct_even_k(2)
        form = canonical_form(fam)
        self.assertTrue(equivalent(form.family(fam.group), fam)[0])
        self.assertEqual(form.key[0][0], 0, 'some translate contains the identity')
        self.assertEqual(str(form).split(":")[0], "Z17")
        self.assertEqual(form.to_json_obj()["group"], "Z17")
        with self.assertRaises(GroupMismatchError):
            form.family(parse_group_spec("Z5"))

    def test_forms_order_by_key(self):
        a = CanonicalForm("Z5", ((0, 1), (2, 4)))
        b = CanonicalForm("Z5", ((0, 2), (1, 3)))
        self.assertLess(a, b)
        self.assertEqual(a, CanonicalForm("Z5", ((0, 1), (2, 4)), block_permutation=False))


class TestClassifier(unittest.TestCase):

    def test_z5(self):
        classes = classify_families(search_all(parse_group_spec("Z5"), 2, 2, 1))
        self.assertEqual(len(classes), 1)
        self.assertEqual(len(classes[0].members), 4)
        self.assertTrue(equivalent(classes[0].representative, construct_paley(5))[0])

    def test_z13(self):
        classes = classify_families(search_all(parse_group_spec("Z13"), 2, 6, 3))
        self.assertEqual(len(classes), 1)
        self.assertTrue(equivalent(classes[0].representative, construct_paley(13))[0])

    def test_z17(self):
        classes = classify_families(search_all(parse_group_spec("Z17"), 2, 4, 1))
        self.assertEqual(len(classes), 2)
        matched = sorted(equivalent(c.representative, construct_pa_st(4))[0] for c in classes)
        self.assertEqual(matched, [False, True])

    def test_composite_pair_gives_both_classes(self):
        classes = classify_families(search_all(parse_group_spec("Z17"), 2, 4, 1))
        forms = {c.form for c in classes}
        self.assertEqual({canonical_form(fam) for fam in composite_pair(2, 2)}, forms)

    def test_z9_and_z3xz3(self):
        self.assertEqual(classify_families(search_all(parse_group_spec("Z9"), 2, 4, 2)), [])
        classes = classify_families(search_all(parse_group_spec("Z3xZ3"), 2, 4, 2))
        self.assertEqual(len(classes), 1)
        self.assertTrue(equivalent(classes[0].representative, construct_paley(9))[0])

    def test_d10(self):
        classes = classify_families(search_all(parse_group_spec("D10"), 2, 3, 1))
        self.assertEqual(len(classes), 1)
        self.assertTrue(equivalent(classes[0].representative, construct_dihedral_sedf(3))[0])

    def test_strict_classification(self):
        x = gsedf_automorphic_variant(2, 3)
        swapped = BlockFamily(x.group, [x.blocks[1], x.blocks[0]])
        self.assertEqual(len(classify_families([x, swapped])), 1)
        self.assertEqual(len(classify_families([x, swapped], allow_block_permutation=False)), 2)
        self.assertEqual(len(Classifier({"allow_block_permutation": False}).run([x, swapped])), 2)

    def test_classes_are_sorted_and_cover_the_input(self):
        families = search_all(parse_group_spec("Z17"), 2, 4, 1)
        classes = classify_families(families)
        self.assertEqual(sum(len(c.members) for c in classes), len(families))
        self.assertEqual([c.form for c in classes], sorted(c.form for c in classes))
        self.assertEqual(classes[0].to_json_obj()["size"], len(classes[0].members))

    def test_mixed_groups(self):
        with self.assertRaises(GroupMismatchError):
            classify_families([construct_pa_st(2), construct_pa_st(3)])
        self.assertEqual(classify_families([]), [])


if __name__ == "__main__":
    unittest.main()
