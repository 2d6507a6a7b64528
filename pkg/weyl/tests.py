from io import StringIO
import itertools
import json

from django.core.management import call_command
from django.test import SimpleTestCase

from core.exceptions import NonDominant, NotInWeylGroup
from rootsys.services import build_root_system
from weyl.services import group_order, longest_element_involution, minimal_coset_reps, reduced_word, weyl_group

SMALL_SYSTEMS = [('A', 1), ('A', 2), ('A', 3), ('B', 2), ('B', 3), ('C', 2), ('C', 3), ('D', 3), ('G2', 2)]
RANK_FOUR_SYSTEMS = SMALL_SYSTEMS + [('A', 4), ('B', 4), ('C', 4), ('D', 4)]


class WeylElementTests(SimpleTestCase):

    def test_one_line_parsing(self):
        group = weyl_group(build_root_system('C', 3))
        w = group.parse('[2, -1, 3]')
        self.assertEqual(w.perm, (2, -1, 3))
        self.assertEqual(w.one_line(), '[2,-1,3]')

    def test_cycle_notation(self):
        group = weyl_group(build_root_system('A', 3))
        self.assertEqual(group.parse('(1 4)(2 3)').perm, (4, 3, 2, 1))
        self.assertEqual(group.parse('(1 2 3)').perm, (2, 3, 1, 4))
        # rightmost cycle acts first
        self.assertEqual(group.parse('(1 2)(2 3)'), group.parse('(1 2 3)'))
        self.assertTrue(group.parse('e').is_identity)

    def test_rejects_non_elements(self):
        a3 = weyl_group(build_root_system('A', 3))
        d4 = weyl_group(build_root_system('D', 4))
        with self.assertRaises(NotInWeylGroup):
            a3.parse('[-1,2,3,4]')
        with self.assertRaises(NotInWeylGroup):
            d4.parse('[-1,2,3,4]')
        with self.assertRaises(NotInWeylGroup):
            a3.parse('[1,1,2,3]')
        with self.assertRaises(NotInWeylGroup):
            a3.parse('(1 x)')
        self.assertEqual(d4.parse('[-1,-2,3,4]').perm, (-1, -2, 3, 4))

    def test_sign_and_permutation_convention(self):
        group = weyl_group(build_root_system('C', 2))
        nu = group.from_signs_and_permutation([1, 0], [2, 1])
        self.assertEqual(group.act(nu, (0, 2)), (-2, 0))

    def test_composition_and_inverse(self):
        group = weyl_group(build_root_system('B', 3))
        for w in group.elements()[:20]:
            self.assertTrue((w * w.inverse()).is_identity)
            for root in group.rs.roots:
                self.assertEqual(group.act(w.inverse(), group.act(w, root)), root)

    def test_reflection_negates_its_root(self):
        group = weyl_group(build_root_system('G2', 2))
        for root in group.rs.roots:
            s = group.reflection(root)
            self.assertEqual(group.act(s, root), tuple(-x for x in root))
            self.assertTrue((s * s).is_identity)


class WeylGroupTests(SimpleTestCase):

    def test_group_orders_match_enumeration(self):
        for type_label, rank in [('A', 3), ('B', 3), ('C', 3), ('D', 4), ('G2', 2)]:
            rs = build_root_system(type_label, rank)
            with self.subTest(system=rs.label):
                self.assertEqual(len(weyl_group(rs).elements()), group_order(rs))

    def test_generation_is_closed(self):
        for type_label, rank in RANK_FOUR_SYSTEMS:
            rs = build_root_system(type_label, rank)
            group = weyl_group(rs)
            elements = group.elements()
            perms = {w.perm for w in elements}
            with self.subTest(system=rs.label):
                self.assertEqual(len(perms), group_order(rs))
                self.assertEqual(len(perms), len(elements))
                for w in elements:
                    self.assertIn(w.inverse().perm, perms)
                    for u in elements:
                        if (w * u).perm not in perms:
                            self.fail(f'{w} * {u} left W({rs.label})')

    def test_reduced_words(self):
        rs = build_root_system('C', 3)
        group = weyl_group(rs)
        for w in group.elements():
            word = reduced_word(rs, w)
            self.assertEqual(len(word), group.length(w))
            self.assertEqual(group.from_word(word), w)

    def test_longest_element_and_omega(self):
        expected = {
            ('A', 3): (3, 2, 1),
            ('C', 3): (1, 2, 3),
            ('D', 4): (1, 2, 3, 4),
            ('D', 5): (1, 2, 3, 5, 4),
            ('G2', 2): (1, 2),
        }
        for (type_label, rank), omega in expected.items():
            rs = build_root_system(type_label, rank)
            w0, found = longest_element_involution(rs)
            with self.subTest(system=rs.label):
                self.assertEqual(found, omega)
                self.assertEqual(len(w0.word), len(rs.positive_roots))

    def test_coset_representatives(self):
        rs = build_root_system('A', 3)
        group = weyl_group(rs)
        lam = rs.fundamental_coweight(2)
        reps = minimal_coset_reps(rs, lam)
        self.assertEqual(len(reps), 6)
        self.assertTrue(reps[0].is_identity)
        images = {group.act_on_coweight(w, lam) for w in reps}
        self.assertEqual(len(images), 6)
        stabilizer = group.stabilizer(lam)
        self.assertEqual(len(stabilizer) * len(reps), group_order(rs))
        for w in reps:
            for u in stabilizer:
                self.assertLessEqual(group.length(w), group.length(w * u))

    def test_coset_representatives_partition_w(self):
        for type_label, rank in SMALL_SYSTEMS:
            rs = build_root_system(type_label, rank)
            group = weyl_group(rs)
            elements = group.elements()
            for coeffs in itertools.product(range(3), repeat=rank):
                lam = rs.coweight(coeffs)
                reps = minimal_coset_reps(rs, lam)
                by_image = {group.act_on_coweight(w, lam): w for w in reps}
                stabilizer = group.stabilizer(lam)
                with self.subTest(system=rs.label, coweight=coeffs):
                    self.assertEqual(len(by_image), len(reps))
                    self.assertEqual(len(reps) * len(stabilizer), group_order(rs))
                    for x in elements:
                        rep = by_image[group.act_on_coweight(x, lam)]
                        self.assertIn(rep.inverse() * x, stabilizer)
                        if x != rep:
                            self.assertLess(group.length(rep), group.length(x))
                    for w in reps:
                        self.assertEqual(len(w.word), group.length(w))

    def test_coset_representatives_need_dominance(self):
        rs = build_root_system('A', 2)
        with self.assertRaises(NonDominant):
            minimal_coset_reps(rs, rs.coweight([1, -1]))

    def test_orbit_traversal_matches_enumeration(self):
        rs = build_root_system('B', 3)
        group = weyl_group(rs)
        lam = rs.fundamental_coweight(1)
        traversal = group.orbit_traversal(lam)
        self.assertEqual(set(traversal), set(group.orbit(group.elements(), lam)))
        for point, w in traversal.items():
            self.assertEqual(group.act_on_coweight(w, lam), point)

    def test_coverage_of_a3_twists(self):
        rs = build_root_system('A', 3)
        group = weyl_group(rs)
        twists = [group.parse(t) for t in ('e', '(1 3)', '(2 3)', '(1 4)', '(2 4)', '(1 4)(2 3)')]
        counts = group.coverage(twists, 2)
        self.assertEqual(len(counts), 12)
        self.assertEqual(set(counts.values()), {2})


class WeylCommandTests(SimpleTestCase):

    def call(self, *args):
        out = StringIO()
        call_command('weyl', *args, stdout=out)
        return out.getvalue()

    def test_reduced_word(self):
        data = json.loads(self.call('reduced-word', '--type', 'A', '--rank', '2', '--element', '[3,2,1]', '--json'))
        self.assertEqual(data['length'], 3)

    def test_longest(self):
        data = json.loads(self.call('longest', '--type', 'A', '--rank', '3', '--json'))
        self.assertEqual(data['omega'], [3, 2, 1])
        self.assertEqual(data['w0'], '[4,3,2,1]')

    def test_cosets(self):
        data = json.loads(self.call('cosets', '--type', 'C', '--rank', '2', '--coweight', '1,0', '--json'))
        self.assertEqual(len(data['representatives']), 4)

    def test_orbit_cover(self):
        data = json.loads(self.call('orbit', '--type', 'C', '--rank', '2', '--roots',
                                    '--twists', 'e;[2,-1];[-1,-2];[-2,1]', '--cover', '1', '--json'))
        self.assertTrue(data['uniform'])
        self.assertEqual({m['count'] for m in data['multiplicities']}, {2})
