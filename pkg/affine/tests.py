from io import StringIO
import json
import random

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from sympy import Rational

from affine.services import AffineRoot, affine_act, affine_weyl_group, inversion_set, length, length_via_word
from affine.serializers import dump_affine_element, load_affine_element
from core.exceptions import ElementFormatError, IndexOutOfRange, NonIntegralCoweight
from rootsys.services import build_root_system, from_coroot_coordinates, pairing
from weyl.services import weyl_group


def random_element(group, rng, spread=2):
    rs = group.rs
    coords = [rng.randint(-spread, spread) for _ in range(rs.rank)]
    finite = rng.choice(group.weyl.elements())
    return group.element(from_coroot_coordinates(rs, coords), finite)


class AffineActionTests(SimpleTestCase):

    def test_translation_shifts_level(self):
        rs = build_root_system('A', 1)
        group = affine_weyl_group(rs)
        alpha = rs.simple_roots[0]
        image = affine_act(rs, group.translation(rs.coweight([2])), AffineRoot(alpha, 0))
        self.assertEqual(image, AffineRoot(alpha, 2))

    def test_affine_generator_on_its_root(self):
        rs = build_root_system('A', 2)
        group = affine_weyl_group(rs)
        theta = rs.highest_roots[0]
        image = group.act(group.generator(0), group.simple_affine_root(0))
        self.assertEqual(image, AffineRoot(theta, -1))
        self.assertFalse(group.is_positive(image))

    def test_inverse_translation_on_simple_roots(self):
        rs = build_root_system('C', 2)
        group = affine_weyl_group(rs)
        lam = rs.coweight([1, 2])
        inverse = group.inverse(group.translation(lam))
        for i, simple in enumerate(rs.simple_roots, start=1):
            self.assertEqual(group.act(inverse, AffineRoot(simple, 0)), AffineRoot(simple, -int(lam.coeffs[i - 1])))

    def test_action_respects_composition(self):
        rng = random.Random(7)
        rs = build_root_system('B', 2)
        group = affine_weyl_group(rs)
        for _ in range(50):
            s, u = random_element(group, rng), random_element(group, rng)
            beta = AffineRoot(rng.choice(rs.roots), rng.randint(-3, 3))
            self.assertEqual(group.act(group.compose(s, u), beta), group.act(s, group.act(u, beta)))

    def test_non_integral_translation_rejected(self):
        rs = build_root_system('A', 1)
        with self.assertRaises(NonIntegralCoweight):
            affine_weyl_group(rs).translation(rs.coweight([Rational(1, 2)]))

    def test_generator_labels(self):
        group = affine_weyl_group(build_root_system('D', 4))
        self.assertEqual(group.generator_labels(), [0, 1, 2, 3, 4])
        with self.assertRaises(IndexOutOfRange):
            group.generator(-1)

    def test_extended_flag(self):
        rs = build_root_system('A', 1)
        group = affine_weyl_group(rs)
        self.assertTrue(group.translation(rs.coweight([1])).extended)
        self.assertFalse(group.translation(rs.coweight([2])).extended)


class InversionSetTests(SimpleTestCase):

    def test_simple_reflection(self):
        rs = build_root_system('A', 3)
        group = affine_weyl_group(rs)
        for i in range(1, 4):
            self.assertEqual(inversion_set(rs, group.generator(i)), [AffineRoot(rs.simple_root(i), 0)])

    def test_identity(self):
        rs = build_root_system('G2', 2)
        self.assertEqual(inversion_set(rs, affine_weyl_group(rs).identity()), [])

    def test_dominant_translation(self):
        rs = build_root_system('B', 3)
        lam = rs.coweight([1, 0, 2])
        expected = {
            AffineRoot(root, n)
            for root in rs.positive_roots
            for n in range(int(pairing(rs, lam, root)))
        }
        found = inversion_set(rs, affine_weyl_group(rs).translation(lam))
        self.assertEqual(set(found), expected)

    def test_membership_matches_definition(self):
        rng = random.Random(11)
        rs = build_root_system('A', 2)
        group = affine_weyl_group(rs)
        for _ in range(30):
            s = random_element(group, rng)
            found = set(inversion_set(rs, s))
            for root in rs.roots:
                for n in range(-6, 7):
                    beta = AffineRoot(root, n)
                    self.assertEqual(beta in found, group.in_inversion_set(s, beta))


class LengthTests(SimpleTestCase):

    def test_examples(self):
        rs = build_root_system('A', 2)
        group = affine_weyl_group(rs)
        theta_coroot = rs.coroot(rs.highest_roots[0])
        self.assertEqual(length(rs, group.translation(theta_coroot)), 4)
        self.assertEqual(length(rs, group.identity()), 0)

    def test_a1_words(self):
        rs = build_root_system('A', 1)
        group = affine_weyl_group(rs)
        descent = length_via_word(rs, group.generator(0), 10)
        self.assertEqual((descent.length, descent.word), (1, (0,)))
        descent = length_via_word(rs, group.translation(rs.coweight([2])), 10)
        self.assertEqual(descent.length, 2)
        self.assertEqual(group.from_word(descent.word), group.translation(rs.coweight([2])))

    def test_dominant_translation_length(self):
        for type_label, rank in [('A', 3), ('C', 3), ('G2', 2)]:
            rs = build_root_system(type_label, rank)
            group = affine_weyl_group(rs)
            for i in range(1, rank + 1):
                lam = rs.fundamental_coweight(i)
                with self.subTest(system=rs.label, i=i):
                    self.assertEqual(length(rs, group.translation(lam)), int(2 * pairing(rs, lam, rs.rho)))

    def test_routes_agree_on_random_elements(self):
        rng = random.Random(3)
        for type_label, rank in [('A', 2), ('C', 2), ('G2', 2), ('A', 3)]:
            rs = build_root_system(type_label, rank)
            group = affine_weyl_group(rs)
            for _ in range(25):
                s = random_element(group, rng, spread=1)
                expected = length(rs, s)
                descent = length_via_word(rs, s, expected)
                with self.subTest(system=rs.label, element=str(s)):
                    self.assertEqual(descent.length, expected)
                    self.assertEqual(length(rs, descent.residual), 0)
                    self.assertEqual(group.compose(group.from_word(descent.word), descent.residual), s)

    def test_exactly_one_membership(self):
        rng = random.Random(2024)
        systems = [build_root_system(t, r) for t, r in [('A', 1), ('A', 2), ('B', 2), ('C', 3), ('G2', 2), ('A', 3)]]
        checked = 0
        while checked < 1000:
            rs = systems[checked % len(systems)]
            group = affine_weyl_group(rs)
            s = random_element(group, rng)
            label = rng.choice(group.generator_labels())
            beta = group.simple_affine_root(label)
            moved = group.compose(group.generator(label), s)
            in_s = group.in_inversion_set(s, beta)
            with self.subTest(system=rs.label, element=str(s), label=label):
                self.assertNotEqual(in_s, group.in_inversion_set(moved, beta))
                self.assertEqual(in_s, length(rs, moved) < length(rs, s))
            checked += 1

    def test_max_over_cosets(self):
        for type_label, rank in [('A', 2), ('B', 2), ('C', 3), ('A', 3)]:
            rs = build_root_system(type_label, rank)
            group = affine_weyl_group(rs)
            for i in range(1, rank + 1):
                lam = rs.fundamental_coweight(i).scale(2)
                top = length(rs, group.translation(lam))
                for w in weyl_group(rs).minimal_coset_reps(lam):
                    d = length(rs, group.compose(group.finite(w), group.translation(lam)))
                    with self.subTest(system=rs.label, i=i, w=str(w)):
                        self.assertLessEqual(d, top)
                        self.assertEqual(d == top, w.is_identity)

    def test_stabilizer_of_translation(self):
        rs = build_root_system('B', 3)
        group = affine_weyl_group(rs)
        lam = rs.fundamental_coweight(2)
        t = group.translation(lam)
        for w in weyl_group(rs).elements():
            commutes = group.compose(group.finite(w), t) == group.compose(t, group.finite(w))
            self.assertEqual(commutes, weyl_group(rs).act_on_coweight(w, lam) == lam)


class HyperplaneModelTests(SimpleTestCase):

    def test_half_spaces_move_with_roots(self):
        rng = random.Random(5)
        for type_label, rank in [('A', 2), ('C', 2), ('G2', 2)]:
            rs = build_root_system(type_label, rank)
            group = affine_weyl_group(rs)
            for _ in range(40):
                s = random_element(group, rng)
                beta = AffineRoot(rng.choice(rs.roots), rng.randint(-3, 3))
                x = rs.coweight([Rational(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(rank)])
                moved_point = group.affine_transform(s, x)
                moved_root = group.act(s, beta)
                self.assertEqual(group.half_space_contains(beta, x), group.half_space_contains(moved_root, moved_point))


class ElementDocumentTests(SimpleTestCase):

    def test_scalar_and_pair_coefficients(self):
        rs = build_root_system('C', 2)
        group = affine_weyl_group(rs)
        expected = group.element(rs.coweight([1, -2]), group.weyl.parse('[2,-1]'))
        for translation in ([1, -2], ['1', '-2'], [[1, 1], [-4, 2]]):
            with self.subTest(translation=translation):
                element = load_affine_element(rs, {'translation': translation, 'finite': '[2,-1]'})
                self.assertEqual(element, expected)

    def test_dumped_element_loads_back(self):
        rs = build_root_system('B', 3)
        group = affine_weyl_group(rs)
        rng = random.Random(11)
        for _ in range(10):
            s = random_element(group, rng)
            self.assertEqual(load_affine_element(rs, dump_affine_element(s)), s)

    def test_finite_defaults_to_identity(self):
        rs = build_root_system('A', 2)
        element = load_affine_element(rs, {'translation': [1, 1]})
        self.assertTrue(element.finite.is_identity)

    def test_rejects_bad_documents(self):
        rs = build_root_system('A', 2)
        bad_documents = [
            [1, 1],
            {},
            {'translation': []},
            {'translation': [1]},
            {'translation': ['x', 1]},
            {'translation': [[1, 0], 1]},
            {'translation': [True, 1]},
            {'translation': ['1/2', 0]},
            {'translation': [1, 1], 'finite': '[1,-2,3]'},
        ]
        for document in bad_documents:
            with self.subTest(document=document):
                with self.assertRaises(ElementFormatError):
                    load_affine_element(rs, document)


class AffineCommandTests(SimpleTestCase):

    def call(self, *args):
        out = StringIO()
        call_command('affine', *args, stdout=out)
        return out.getvalue()

    def test_act(self):
        data = json.loads(self.call('act', '--type', 'A', '--rank', '1', '--translation', '2',
                                    '--root', '1,-1', '--json'))
        self.assertEqual(data['image'], {'root': [1, -1], 'level': 2})

    def test_length(self):
        data = json.loads(self.call('length', '--type', 'A', '--rank', '2', '--translation', '1,1', '--json'))
        self.assertEqual(data['length'], 4)

    def test_inversions_from_word(self):
        data = json.loads(self.call('inversions', '--type', 'A', '--rank', '1', '--word', '0,1', '--json'))
        self.assertEqual(data['size'], 2)

    def test_element_option_matches_flags(self):
        from_flags = json.loads(self.call('length', '--type', 'A', '--rank', '2', '--translation', '1,1',
                                          '--finite', '[2,1,3]', '--json'))
        from_document = json.loads(self.call('length', '--type', 'A', '--rank', '2', '--json',
                                             '--element', json.dumps(from_flags['element'])))
        self.assertEqual(from_document, from_flags)

    def test_element_option_errors_exit_2(self):
        for text in ('{not json', '{"translation": [1]}'):
            with self.subTest(text=text):
                with self.assertRaises(CommandError) as ctx:
                    self.call('inversions', '--type', 'A', '--rank', '2', '--element', text)
                self.assertEqual(ctx.exception.returncode, 2)
