from io import StringIO
import json
import random

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from sympy import Matrix, Rational, multiplicity

from core.exceptions import DegeneratePairing, DimensionMismatch
from rootsys.services import build_root_system
from schemes.services import ModificationEntry, make_scheme, root_degree
from weyl.services import weyl_group
from wonderful.services import (
    LEFT,
    RIGHT,
    boundary_points,
    check_lr_transpose,
    degeneration_rank,
    infinitesimal_action,
    infinitesimal_transpose,
    inversion_on_torus,
    kappa_tilde,
    killing_data,
    lr_sweep,
    monomial_exponents,
    root_constant,
    random_points,
    twisted_action,
)


class TangentMapTests(SimpleTestCase):

    def test_a1_matrices(self):
        rs = build_root_system('A', 1)
        z = Rational(3, 5)
        self.assertEqual(infinitesimal_action(rs, [z], LEFT).matrix, Matrix.diag(-1, z, -2 * z))
        self.assertEqual(infinitesimal_action(rs, [z], RIGHT).matrix, Matrix.diag(-z, 1, -2 * z))

    def test_basis_labels(self):
        tangent = infinitesimal_action(build_root_system('A', 1), [1])
        self.assertEqual(tangent.col_labels, ('x[1, -1]', 'y[1, -1]', 'h1'))
        self.assertEqual(tangent.row_labels, ('dA(x[1, -1])', 'dA(y[1, -1])', 'dA(e1)'))

    def test_transpose_is_matrix_transpose(self):
        rng = random.Random(17)
        for type_label, rank in [('A', 1), ('B', 2), ('G2', 2), ('A', 3), ('C', 4)]:
            rs = build_root_system(type_label, rank)
            for point in random_points(rs, 50, rng.randint(0, 10 ** 6)):
                for side in (LEFT, RIGHT):
                    with self.subTest(system=rs.label, z=point.z, side=side):
                        action = infinitesimal_action(rs, point, side).matrix
                        self.assertEqual(infinitesimal_transpose(rs, point, side).matrix, action.T)

    def test_wrong_point_size(self):
        with self.assertRaises(DimensionMismatch):
            infinitesimal_action(build_root_system('A', 2), [1])


class KillingFormTests(SimpleTestCase):

    def test_a1_constants(self):
        rs = build_root_system('A', 1)
        data = killing_data(rs)
        root = rs.positive_roots[0]
        self.assertEqual(data.toral_gram, Matrix([[8]]))
        self.assertEqual(data.root_constants[root], 4)
        self.assertEqual(data.c(root), Rational(1, 4))

    def test_constants_do_not_depend_on_h(self):
        for type_label in ('A', 'B', 'G2'):
            rs = build_root_system(type_label, 2)
            data = killing_data(rs)
            rho_check = rs.coweight([1, 1])
            generic = rs.coweight([Rational(1, 2), 3])
            for root in rs.positive_roots:
                index = next(i for i, c in enumerate(rs.root_coordinates(root), start=1) if c != 0)
                choices = [rs.coroot(root), rho_check, generic, rs.fundamental_coweight(index)]
                with self.subTest(system=rs.label, root=root):
                    self.assertGreaterEqual(len(set(choices)), 3)
                    for h in choices:
                        self.assertEqual(root_constant(rs, root, h), data.root_constants[root])

    def test_orthogonal_h_is_rejected(self):
        rs = build_root_system('A', 2)
        with self.assertRaises(DegeneratePairing):
            root_constant(rs, rs.simple_roots[0], rs.fundamental_coweight(2))

    def test_constants_positive_and_gram_symmetric(self):
        for type_label, rank in [('B', 3), ('C', 3), ('G2', 2), ('D', 4)]:
            rs = build_root_system(type_label, rank)
            data = killing_data(rs)
            with self.subTest(system=rs.label):
                self.assertEqual(data.toral_gram, data.toral_gram.T)
                self.assertTrue(all(k > 0 for k in data.root_constants.values()))

    def test_kappa_tilde_shape(self):
        rs = build_root_system('A', 2)
        self.assertEqual(kappa_tilde(rs).shape, (8, 8))


class LeftRightIdentityTests(SimpleTestCase):

    def test_boundary_points(self):
        for type_label, rank in [('A', 1), ('A', 2), ('B', 2), ('G2', 2), ('A', 3), ('B', 3), ('C', 3),
                                 ('A', 4), ('C', 4), ('D', 4)]:
            rs = build_root_system(type_label, rank)
            points = boundary_points(rs)
            self.assertEqual(len(points), 2 ** rank)
            for point in points:
                with self.subTest(system=rs.label, z=point.z):
                    self.assertTrue(check_lr_transpose(rs, point).holds)

    def test_random_points(self):
        for type_label, rank in [('A', 1), ('G2', 2), ('B', 3), ('D', 4)]:
            rs = build_root_system(type_label, rank)
            results = lr_sweep(rs, random_points(rs, 100, seed=rank))
            with self.subTest(system=rs.label):
                self.assertTrue(all(r.holds for r in results))

    def test_random_points_are_reproducible(self):
        rs = build_root_system('C', 2)
        self.assertEqual(random_points(rs, 5, 9), random_points(rs, 5, 9))


class TwistAndInversionTests(SimpleTestCase):

    def test_identity_twist_is_plain_action(self):
        rs = build_root_system('C', 3)
        z = [Rational(1, 2), 2, -3]
        identity = weyl_group(rs).identity()
        self.assertEqual(twisted_action(rs, z, identity).matrix, infinitesimal_action(rs, z).matrix)

    def test_twisted_exponents(self):
        rs = build_root_system('C', 2)
        group = weyl_group(rs)
        nu = group.parse('[2,-1]')
        # ν⁻¹(2e_1) = -2e_2 = -α_2
        self.assertEqual(monomial_exponents(rs, (2, 0), nu), (0, -1))
        for root in rs.roots:
            self.assertEqual(monomial_exponents(rs, root, nu),
                             rs.root_coordinates(group.act(nu.inverse(), root)))

    def test_twisted_exponents_match_scheme_degrees(self):
        rs = build_root_system('A', 2)
        group = weyl_group(rs)
        nu = group.simple_reflection(1)
        tangent = twisted_action(rs, (2, 3), nu)
        p = len(rs.positive_roots)
        for k, beta in enumerate(rs.positive_roots):
            alpha = group.act(nu, beta)
            value = Rational(tangent.matrix[p + k, p + k])
            exponents = (multiplicity(2, value), multiplicity(3, value))
            self.assertEqual(value, Rational(2) ** exponents[0] * Rational(3) ** exponents[1])
            for i in (1, 2):
                scheme = make_scheme(rs, 1, [ModificationEntry(nu, i, 1)])
                with self.subTest(root=alpha, i=i):
                    self.assertEqual(root_degree(scheme, alpha), max(0, exponents[i - 1]))

    def test_inversion_is_involution(self):
        rs = build_root_system('A', 3)
        z = (Rational(1), Rational(2), Rational(3))
        self.assertEqual(inversion_on_torus(rs, z).z, (3, 2, 1))
        for point in random_points(rs, 20, 4):
            self.assertEqual(inversion_on_torus(rs, inversion_on_torus(rs, point)), point)

    def test_inversion_fixes_points_when_omega_trivial(self):
        rs = build_root_system('C', 3)
        z = (Rational(1, 3), Rational(5), Rational(-2))
        self.assertEqual(inversion_on_torus(rs, z).z, z)

    def test_degeneration_rank(self):
        for type_label, rank in [('A', 2), ('B', 3), ('G2', 2)]:
            rs = build_root_system(type_label, rank)
            for point in boundary_points(rs) + random_points(rs, 5, 1):
                computed, expected = degeneration_rank(rs, point)
                with self.subTest(system=rs.label, z=point.z):
                    self.assertEqual(computed, expected)


class WonderfulCommandTests(SimpleTestCase):

    def call(self, *args):
        out = StringIO()
        call_command('wonderful', *args, stdout=out)
        return out.getvalue()

    def test_action_json(self):
        data = json.loads(self.call('action', '--type', 'A', '--rank', '1', '--point', '1/2', '--json'))
        self.assertEqual(data['matrix'][1][1], [1, 2])
        self.assertEqual(data['matrix'][2][2], [-1, 1])

    def test_killing(self):
        data = json.loads(self.call('killing', '--type', 'A', '--rank', '1', '--json'))
        self.assertEqual(data['toral_gram'], [[[8, 1]]])
        self.assertEqual(data['constants'][0]['c'], [1, 4])

    @override_settings(HECKE_SETTINGS={'WORKERS': 1, 'RANDOM_POINTS': 10, 'DEFAULT_SEED': 0})
    def test_check_default_sweep(self):
        output = self.call('check', '--type', 'B', '--rank', '2')
        self.assertIn('identity holds at 14/14 points', output)

    def test_check_json_is_stable(self):
        args = ('check', '--type', 'A', '--rank', '2', '--random', '5', '--seed', '3', '--json')
        self.assertEqual(self.call(*args), self.call(*args))

    def test_invert(self):
        data = json.loads(self.call('invert', '--type', 'A', '--rank', '3', '--point', '1,2,3', '--json'))
        self.assertEqual(data['image'], [[3, 1], [2, 1], [1, 1]])
        self.assertTrue(data['involution'])

    def test_bad_point_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('action', '--type', 'A', '--rank', '2', '--point', '1,x')
        self.assertEqual(ctx.exception.returncode, 2)
