from io import StringIO
import itertools
import json

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from sympy import Poly

from affine.services import affine_weyl_group
from cells.services import (
    cell_dimension,
    decompose,
    deformation_dimension,
    deformation_sections,
    modification_type_sum,
    q,
)
from core.exceptions import InvalidCocharacter, NonDominant, ZeroCocharacter
from rootsys.services import build_root_system, in_coroot_lattice, pairing, parameter_count


class CellDimensionTests(SimpleTestCase):

    def test_examples(self):
        a1 = build_root_system('A', 1)
        self.assertEqual(cell_dimension(a1, a1.coweight([2])), 2)
        self.assertEqual(cell_dimension(a1, a1.zero_coweight()), 0)

    def test_fundamental_coweights_give_parameter_counts(self):
        for type_label, rank in [('A', 4), ('B', 3), ('C', 4), ('D', 5), ('G2', 2)]:
            rs = build_root_system(type_label, rank)
            for i in range(1, rank + 1):
                with self.subTest(system=rs.label, i=i):
                    self.assertEqual(cell_dimension(rs, rs.fundamental_coweight(i)) + 1, parameter_count(rs, i))

    def test_three_routes_on_coroot_lattice(self):
        systems = [('A', 1), ('A', 2), ('A', 3), ('A', 4), ('B', 2), ('B', 3), ('B', 4),
                   ('C', 2), ('C', 3), ('C', 4), ('D', 3), ('D', 4), ('G2', 2)]
        for type_label, rank in systems:
            rs = build_root_system(type_label, rank)
            group = affine_weyl_group(rs)
            weights = [parameter_count(rs, i) - 1 for i in range(1, rank + 1)]
            checked = 0
            for coeffs in itertools.product(*(range(20 // w + 1) for w in weights)):
                if sum(c * w for c, w in zip(coeffs, weights)) > 20:
                    continue
                lam = rs.coweight(coeffs)
                if not in_coroot_lattice(rs, lam):
                    continue
                checked += 1
                doubled = int(2 * pairing(rs, lam, rs.rho))
                t = group.translation(lam)
                descent = group.length_via_word(t, 100)
                with self.subTest(system=rs.label, coweight=coeffs):
                    self.assertEqual(cell_dimension(rs, lam), doubled)
                    self.assertEqual(group.length(t), doubled)
                    self.assertEqual(descent.length, doubled)
                    self.assertEqual(group.length(descent.residual), 0)
            self.assertGreater(checked, 1)

    def test_large_a2_coweights(self):
        rs = build_root_system('A', 2)
        group = affine_weyl_group(rs)
        for coeffs, expected in [((6, 0), 12), ((5, 2), 14), ((0, 9), 18)]:
            lam = rs.coweight(coeffs)
            self.assertTrue(in_coroot_lattice(rs, lam))
            self.assertEqual(group.length_via_word(group.translation(lam), 100).length, expected)
            self.assertEqual(cell_dimension(rs, lam), expected)

    def test_additivity(self):
        rs = build_root_system('C', 3)
        lam, mu = rs.coweight([1, 0, 2]), rs.coweight([0, 3, 1])
        self.assertEqual(cell_dimension(rs, lam + mu), cell_dimension(rs, lam) + cell_dimension(rs, mu))

    def test_non_dominant(self):
        rs = build_root_system('A', 2)
        with self.assertRaises(NonDominant):
            cell_dimension(rs, rs.coweight([1, -1]))


class DecompositionTests(SimpleTestCase):

    def test_a1_coroot(self):
        rs = build_root_system('A', 1)
        result = decompose(rs, rs.coweight([2]))
        self.assertEqual(sorted((c.dimension for c in result.cells), reverse=True), [2, 1])
        self.assertEqual(result.poincare_polynomial(), Poly(q ** 2 + q, q))
        self.assertTrue(result.in_coroot_lattice)

    def test_zero_coweight(self):
        rs = build_root_system('B', 2)
        result = decompose(rs, rs.zero_coweight())
        self.assertEqual(len(result.cells), 1)
        self.assertEqual(result.top_dimension, 0)

    def test_a2_highest_coroot(self):
        rs = build_root_system('A', 2)
        result = decompose(rs, rs.coroot(rs.highest_roots[0]))
        self.assertEqual(result.top_dimension, 4)
        self.assertEqual(len(result.cells), 6)
        tops = [c for c in result.cells if c.dimension == 4]
        self.assertEqual(len(tops), 1)
        self.assertTrue(tops[0].representative.is_identity)
        self.assertEqual(result.poincare_polynomial().eval(1), 6)
        self.assertEqual(result.jet_bound, 2)

    def test_outside_coroot_lattice(self):
        rs = build_root_system('C', 3)
        result = decompose(rs, rs.fundamental_coweight(3))
        self.assertFalse(result.in_coroot_lattice)
        self.assertFalse(result.component_class.is_identity)
        self.assertEqual(result.top_dimension, cell_dimension(rs, rs.fundamental_coweight(3)))
        self.assertEqual(sum(result.poincare), len(result.cells))


class TopologicalTypeTests(SimpleTestCase):

    def test_a3_preset_type_is_trivial(self):
        rs = build_root_system('A', 3)
        for k in (1, 2, 3):
            self.assertTrue(modification_type_sum(rs, [(rs.fundamental_coweight(2), 6 * k)]).is_identity)

    def test_empty_list(self):
        self.assertTrue(modification_type_sum(build_root_system('D', 4), []).is_identity)

    def test_single_c3_modification(self):
        rs = build_root_system('C', 3)
        element = modification_type_sum(rs, [(rs.fundamental_coweight(1), 1)])
        self.assertEqual(element.group_structure, (2,))
        self.assertEqual(element.order, 2)


class DeformationTests(SimpleTestCase):

    def test_simple_modifications(self):
        for type_label, rank in [('A', 3), ('B', 4), ('D', 4)]:
            rs = build_root_system(type_label, rank)
            for i in range(1, rank + 1):
                r = [int(k == i) for k in range(1, rank + 1)]
                with self.subTest(system=rs.label, i=i):
                    self.assertEqual(deformation_dimension(rs, r), parameter_count(rs, i))

    def test_reference_values(self):
        self.assertEqual(deformation_dimension(build_root_system('G2', 2), [0, 1]), 7)
        self.assertEqual(deformation_dimension(build_root_system('C', 3), [1, 0, 0]), 7)

    def test_sections_are_listed(self):
        rs = build_root_system('A', 1)
        self.assertEqual(deformation_sections(rs, [1]), ['z^0 dA(y_[1])', 'z^0 dA(e_1)'])

    def test_invalid_cocharacters(self):
        rs = build_root_system('A', 2)
        with self.assertRaises(ZeroCocharacter):
            deformation_dimension(rs, [0, 0])
        with self.assertRaises(InvalidCocharacter):
            deformation_dimension(rs, [1, -1])


class CellsCommandTests(SimpleTestCase):

    def call(self, *args):
        out = StringIO()
        call_command('cells', *args, stdout=out)
        return out.getvalue()

    def test_dim(self):
        self.assertEqual(self.call('dim', '--type', 'A', '--rank', '1', '--coweight', '1').strip(), '1')
        self.assertEqual(self.call('dim', '--type', 'A', '--rank', '1', '--coweight', '2').strip(), '2')

    def test_decompose_json(self):
        data = json.loads(self.call('decompose', '--type', 'A', '--rank', '1', '--coweight', '2', '--json'))
        self.assertEqual(data['poincare'], [0, 1, 1])

    def test_deform(self):
        self.assertEqual(self.call('deform', '--type', 'G2', '--rank', '2', '--r', '0,1').strip(), '7')

    def test_non_dominant_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('dim', '--type', 'A', '--rank', '2', '--coweight', '1,-1')
        self.assertEqual(ctx.exception.returncode, 2)
