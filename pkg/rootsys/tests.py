from io import StringIO
import json

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from sympy import Rational

from core.exceptions import IndexOutOfRange, InvalidRank, NonIntegralCoweight, UnsupportedType
from rootsys.services import (
    build_root_system,
    closed_form_parameter_count,
    coroot_coordinates,
    from_coroot_coordinates,
    fundamental_group_class,
    identity_class,
    in_coroot_lattice,
    kernel_coweight,
    pairing,
    parameter_count,
    parameter_table,
)


class RootSystemConstructionTests(SimpleTestCase):

    def test_root_counts(self):
        expected = {
            ('A', 1): 2, ('A', 3): 12, ('A', 5): 30,
            ('B', 2): 8, ('B', 3): 18,
            ('C', 3): 18, ('C', 4): 32,
            ('D', 4): 24, ('D', 5): 40,
            ('G2', 2): 12,
        }
        for (type_label, rank), count in expected.items():
            with self.subTest(system=f'{type_label}{rank}'):
                rs = build_root_system(type_label, rank)
                self.assertEqual(len(rs.roots), count)
                self.assertEqual(len(rs.positive_roots), count // 2)

    def test_dimension_of_g(self):
        self.assertEqual(build_root_system('A', 3).dim_g, 15)
        self.assertEqual(build_root_system('B', 3).dim_g, 21)
        self.assertEqual(build_root_system('C', 3).dim_g, 21)
        self.assertEqual(build_root_system('D', 4).dim_g, 28)
        self.assertEqual(build_root_system('G2', 2).dim_g, 14)

    def test_cartan_matrix_uses_kac_convention(self):
        self.assertEqual(build_root_system('C', 2).cartan, ((2, -2), (-1, 2)))
        self.assertEqual(build_root_system('B', 2).cartan, ((2, -1), (-2, 2)))
        self.assertEqual(build_root_system('A', 2).cartan, ((2, -1), (-1, 2)))

    def test_positive_roots_start_with_simple_roots(self):
        rs = build_root_system('C', 3)
        self.assertEqual(rs.positive_roots[:3], rs.simple_roots)
        self.assertEqual(rs.highest_roots, ((2, 0, 0),))

    def test_unknown_type_and_bad_rank(self):
        with self.assertRaises(UnsupportedType):
            build_root_system('E', 6)
        with self.assertRaises(InvalidRank):
            build_root_system('D', 2)
        with self.assertRaises(InvalidRank):
            build_root_system('G2', 3)
        with self.assertRaises(InvalidRank):
            build_root_system('A', 0)

    def test_systems_are_shared(self):
        self.assertIs(build_root_system('a', 2), build_root_system('A', 2))


class CoweightTests(SimpleTestCase):

    def test_fundamental_coweights_are_dual_to_simple_roots(self):
        for type_label, rank in [('A', 3), ('B', 3), ('C', 4), ('D', 5), ('G2', 2)]:
            rs = build_root_system(type_label, rank)
            for i in range(1, rank + 1):
                for j, root in enumerate(rs.simple_roots, start=1):
                    with self.subTest(system=rs.label, i=i, j=j):
                        self.assertEqual(pairing(rs, rs.fundamental_coweight(i), root), int(i == j))

    def test_coroot_pairs_to_two_with_its_root(self):
        rs = build_root_system('G2', 2)
        for root in rs.roots:
            self.assertEqual(pairing(rs, rs.coroot(root), root), 2)

    def test_rho_pairs_to_one_with_simple_coroots(self):
        for type_label, rank in [('A', 4), ('B', 3), ('C', 3), ('D', 4), ('G2', 2)]:
            rs = build_root_system(type_label, rank)
            for i in range(1, rank + 1):
                with self.subTest(system=rs.label, i=i):
                    self.assertEqual(pairing(rs, rs.simple_coroot(i), rs.rho), 1)

    def test_coroot_coordinates_round_trip(self):
        rs = build_root_system('C', 3)
        lam = rs.coweight([1, Rational(1, 2), 2])
        self.assertEqual(from_coroot_coordinates(rs, coroot_coordinates(rs, lam)), lam)
        self.assertEqual(coroot_coordinates(rs, rs.fundamental_coweight(1)), (1, 1, 1))

    def test_coroot_lattice_membership(self):
        rs = build_root_system('A', 1)
        self.assertTrue(in_coroot_lattice(rs, rs.coweight([2])))
        self.assertFalse(in_coroot_lattice(rs, rs.coweight([1])))

    def test_integer_coeffs_rejects_fractions(self):
        rs = build_root_system('A', 2)
        with self.assertRaises(NonIntegralCoweight):
            rs.coweight([Rational(1, 2), 0]).integer_coeffs()

    def test_index_out_of_range(self):
        rs = build_root_system('A', 2)
        with self.assertRaises(IndexOutOfRange):
            rs.fundamental_coweight(3)


class ParameterCountTests(SimpleTestCase):

    def test_closed_forms_match_derived_counts(self):
        grid = [('A', range(1, 7)), ('B', range(2, 7)), ('C', range(2, 7)), ('D', range(3, 8))]
        for type_label, ranks in grid:
            for rank in ranks:
                rs = build_root_system(type_label, rank)
                for row in parameter_table(rs):
                    with self.subTest(system=rs.label, i=row['index']):
                        self.assertTrue(row['matches'])

    def test_type_a_closed_form(self):
        rs = build_root_system('A', 3)
        self.assertEqual([parameter_count(rs, i) for i in (1, 2, 3)], [4, 5, 4])
        self.assertEqual(closed_form_parameter_count('A', 3, 2), 5)

    def test_g2_counts(self):
        rs = build_root_system('G2', 2)
        self.assertEqual(parameter_count(rs, 1), 11)
        self.assertEqual(parameter_count(rs, 2), 7)
        self.assertIsNone(closed_form_parameter_count('G2', 2, 1))

    def test_simple_modification_of_c_type(self):
        for l in range(2, 7):
            rs = build_root_system('C', l)
            self.assertEqual(parameter_count(rs, 1), 2 * l + 1)


class FundamentalGroupTests(SimpleTestCase):

    def test_group_orders(self):
        expected = {('A', 3): 4, ('B', 3): 2, ('C', 4): 2, ('D', 4): 4, ('D', 5): 4, ('G2', 2): 1}
        for (type_label, rank), order in expected.items():
            with self.subTest(system=f'{type_label}{rank}'):
                self.assertEqual(identity_class(build_root_system(type_label, rank)).group_order, order)

    def test_group_structure(self):
        self.assertEqual(identity_class(build_root_system('D', 4)).group_structure, (2, 2))
        self.assertEqual(identity_class(build_root_system('D', 5)).group_structure, (4,))
        self.assertEqual(identity_class(build_root_system('G2', 2)).group_structure, ())

    def test_class_arithmetic(self):
        rs = build_root_system('A', 3)
        cls = fundamental_group_class(rs, rs.fundamental_coweight(1))
        self.assertEqual(cls.order, 4)
        self.assertTrue(cls.times(4).is_identity)
        two = fundamental_group_class(rs, rs.fundamental_coweight(2))
        self.assertEqual(two.order, 2)
        self.assertEqual(cls + cls, two)

    def test_coroots_are_trivial(self):
        rs = build_root_system('C', 3)
        for root in rs.roots:
            self.assertTrue(fundamental_group_class(rs, rs.coroot(root)).is_identity)


class KernelCoweightTests(SimpleTestCase):

    def test_kac_convention_gives_fundamental_coweight(self):
        rs = build_root_system('C', 3)
        for i in (1, 2, 3):
            self.assertEqual(kernel_coweight(rs, i), rs.fundamental_coweight(i))

    def test_a3_middle_kernel(self):
        rs = build_root_system('A', 3)
        self.assertEqual(coroot_coordinates(rs, kernel_coweight(rs, 2)), (Rational(1, 2), 1, Rational(1, 2)))

    def test_transposed_convention_for_c_type(self):
        rs = build_root_system('C', 4)
        xi = kernel_coweight(rs, 1, convention='transposed')
        self.assertEqual(coroot_coordinates(rs, xi), (1, 1, 1, Rational(1, 2)))

    def test_conventions_agree_for_symmetric_cartan(self):
        rs = build_root_system('D', 4)
        for i in range(1, 5):
            self.assertEqual(kernel_coweight(rs, i), kernel_coweight(rs, i, 'transposed'))


class RootsysCommandTests(SimpleTestCase):

    def call(self, *args):
        out = StringIO()
        call_command('rootsys', *args, stdout=out)
        return out.getvalue()

    def test_show_json(self):
        data = json.loads(self.call('show', '--type', 'C', '--rank', '2', '--json'))
        self.assertEqual(data['type'], 'C')
        self.assertEqual(data['cartan'], [[2, -2], [-1, 2]])
        self.assertEqual(data['simple_roots'], [[[1, 1], [-1, 1]], [[0, 1], [2, 1]]])

    def test_params_table(self):
        output = self.call('params', '--type', 'A', '--rank', '3')
        self.assertIn('closed form', output)
        self.assertNotIn('NO', output)

    def test_kernel_transposed(self):
        data = json.loads(self.call('kernel', '--type', 'C', '--rank', '3', '--index', '1',
                                    '--convention', 'transposed', '--json'))
        self.assertEqual(data['kernels'][0]['coroot_coordinates'], [[1, 1], [1, 1], [1, 2]])

    def test_pi1_class(self):
        data = json.loads(self.call('pi1', '--type', 'C', '--rank', '3', '--coweight', '1,0,0', '--json'))
        self.assertEqual(data['order'], 2)
        self.assertEqual(data['class_order'], 2)

    def test_invalid_type_exits_with_usage_code(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('show', '--type', 'E', '--rank', '6')
        self.assertEqual(ctx.exception.returncode, 2)
