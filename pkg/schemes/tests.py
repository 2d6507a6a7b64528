from io import StringIO
import json
import os
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from sympy import Rational

from core.exceptions import InvalidRank, OddGenus, RootNotInSystem, SchemeFormatError, SearchBudgetExceeded
from rootsys.services import build_root_system
from schemes.serializers import dump_scheme, load_scheme
from schemes.services import (
    EXACT,
    ModificationEntry,
    SearchOptions,
    a3_sign_relations,
    c_rotation,
    canonical_direction,
    determinant_witness,
    length_aggregates,
    make_scheme,
    obstruction_analysis,
    power,
    preset,
    representable,
    root_contributions,
    root_degree,
    search,
    toral_lines,
    verify,
)
from weyl.services import weyl_group


class PresetTests(SimpleTestCase):

    def test_parameter_totals(self):
        self.assertEqual(preset('A3', 3, 4).parameter_count, 60)
        self.assertEqual(preset('Cl', 3, 2).parameter_count, 42)
        self.assertEqual(preset('Dl', 4, 2).parameter_count, 56)

    def test_entry_counts(self):
        self.assertEqual(len(preset('A3', 3, 4).entries), 6)
        self.assertEqual(preset('A3', 3, 4).total_modifications, 12)
        self.assertEqual(len(preset('Cl', 3, 2).entries), 6)
        self.assertEqual(len(preset('Dl', 5, 2).entries), 10)

    def test_a3_notes_identity_inference(self):
        self.assertIn('identity twist inferred as the sixth twist class', preset('A3', 3, 2).notes)

    def test_rejects_odd_genus_and_wrong_rank(self):
        with self.assertRaises(OddGenus):
            preset('A3', 3, 3)
        with self.assertRaises(InvalidRank):
            preset('A3', 4, 2)
        with self.assertRaises(InvalidRank):
            preset('Dl', 2, 2)
        with self.assertRaises(InvalidRank):
            preset('Cl', 1, 2)

    def test_reproduction_grid_passes(self):
        grid = [('A3', [3]), ('Cl', range(2, 7)), ('Dl', range(4, 8))]
        for family, ranks in grid:
            for rank in ranks:
                for genus in (2, 4):
                    scheme = preset(family, rank, genus)
                    with self.subTest(family=family, rank=rank, genus=genus):
                        report = verify(scheme)
                        self.assertEqual(report.verdict, 'PASS', report.failures)
                        self.assertTrue(report.top_type.is_identity)
                        self.assertTrue(report.bookkeeping_ok)
                        strict = verify(scheme, EXACT)
                        self.assertEqual(strict.verdict, 'PASS', strict.failures)
                        self.assertTrue(all(d.degree == genus for d in strict.root_degrees))

    def test_odd_d_type_twists(self):
        scheme = preset('Dl', 5, 2)
        self.assertEqual(verify(scheme, EXACT).verdict, 'PASS')


class RootDegreeTests(SimpleTestCase):

    def test_empty_scheme(self):
        rs = build_root_system('B', 2)
        scheme = make_scheme(rs, 2, [])
        for root in rs.roots:
            self.assertEqual(root_degree(scheme, root), 0)

    def test_a3_every_root_gets_genus(self):
        scheme = preset('A3', 3, 4)
        for root in scheme.root_system.roots:
            self.assertEqual(root_degree(scheme, root), 4)

    def test_c_type_short_and_long_pattern(self):
        for l in (2, 3, 4):
            scheme = preset('Cl', l, 2)
            rs = scheme.root_system
            classes = rs.length_classes()
            for root in classes['short']:
                contributions = root_contributions(scheme, root)
                self.assertEqual(sorted(v for _, v in contributions), [1, 1])
            for root in classes['long']:
                contributions = root_contributions(scheme, root)
                self.assertEqual([v for _, v in contributions], [2])

    def test_unknown_root(self):
        with self.assertRaises(RootNotInSystem):
            root_degree(preset('A3', 3, 2), (1, 1, 0, 0))

    def test_twist_invariance_of_aggregates(self):
        for type_label, rank in [('B', 2), ('C', 3), ('G2', 2), ('B', 3)]:
            rs = build_root_system(type_label, rank)
            group = weyl_group(rs)
            short = set(rs.length_classes()['short'])
            for i in range(1, rank + 1):
                s, t = length_aggregates(rs, i)
                for w in group.elements():
                    scheme = make_scheme(rs, 1, [ModificationEntry(w, i, 1)])
                    short_total = sum(root_degree(scheme, r) for r in rs.roots if r in short)
                    long_total = sum(root_degree(scheme, r) for r in rs.roots if r not in short)
                    with self.subTest(system=rs.label, i=i, twist=str(w)):
                        self.assertEqual((short_total, long_total), (s, t))


class VerifyTests(SimpleTestCase):

    def test_deleted_entry_fails(self):
        full = preset('A3', 3, 2)
        scheme = make_scheme(full.root_system, 2, full.entries[1:])
        report = verify(scheme)
        self.assertEqual(report.verdict, 'FAIL')
        self.assertFalse(report.param_ok)
        self.assertFalse(report.degrees_ok)
        self.assertTrue(report.bookkeeping_ok)

    def test_d4_toral_lines(self):
        report = verify(preset('Dl', 4, 2))
        self.assertEqual(report.verdict, 'PASS')
        self.assertEqual(len(report.toral_lines), 4)
        self.assertTrue(all(line.count == 2 for line in report.toral_lines))
        self.assertTrue(all(len(line.entries) == 2 for line in report.toral_lines))

    def test_a3_lines_follow_sign_relations(self):
        lines = toral_lines(preset('A3', 3, 2))
        self.assertEqual(len(lines), 3)
        self.assertTrue(all(line.count == 2 for line in lines))
        self.assertTrue(all(a3_sign_relations().values()))

    def test_disclaimer_is_reported(self):
        self.assertIn('generic', verify(preset('Cl', 2, 2)).disclaimer)

    def test_strict_mode_rejects_surplus(self):
        base = preset('Cl', 2, 2)
        doubled = make_scheme(base.root_system, 2, [
            ModificationEntry(e.twist, e.coweight_index, 2 * e.points) for e in base.entries])
        self.assertTrue(verify(doubled).degrees_ok)
        self.assertFalse(verify(doubled, EXACT).degrees_ok)
        self.assertFalse(verify(doubled).param_ok)

    def test_canonical_direction(self):
        self.assertEqual(canonical_direction([Rational(-1, 2), 1, Rational(-1, 2)]), (1, -2, 1))
        self.assertEqual(canonical_direction([0, 0]), (0, 0))
        self.assertEqual(canonical_direction([0, Rational(3, 4), Rational(3, 2)]), (0, 1, 2))


class WitnessTests(SimpleTestCase):

    def test_c_type_determinant(self):
        for l in range(2, 9):
            witness = determinant_witness(l)
            with self.subTest(l=l):
                self.assertEqual(witness.stated, Rational((-1) ** (l - 1)) - Rational(1, 2 ** l))
                self.assertEqual(witness.determinant, 1 + Rational((-1) ** l, 2 ** l))
                self.assertTrue(witness.matches_up_to_sign)
                self.assertEqual(witness.matches_exactly, l % 2 == 1)
                self.assertEqual(witness.orientation_sign, (-1) ** (l - 1))

    def test_c2_determinant_value(self):
        self.assertEqual(determinant_witness(2).determinant, Rational(5, 4))

    def test_rotation_power_is_minus_one(self):
        for l in range(2, 9):
            rs = build_root_system('C', l)
            group = weyl_group(rs)
            nu = c_rotation(rs)
            self.assertEqual(group.act(nu, (0,) * (l - 1) + (2,)), (-2,) + (0,) * (l - 1))
            self.assertEqual(power(nu, l, group.identity()).perm, tuple(-(i + 1) for i in range(l)))


class ObstructionTests(SimpleTestCase):

    def test_g2_aggregates(self):
        report = obstruction_analysis(build_root_system('G2', 2), 2)
        self.assertEqual(report.aggregates, ((1, 4, 6, 11), (2, 2, 4, 7)))

    def test_g2_infeasible_for_small_genus(self):
        rs = build_root_system('G2', 2)
        for g in range(1, 7):
            report = obstruction_analysis(rs, g)
            with self.subTest(g=g):
                self.assertEqual(report.status, 'INFEASIBLE')
                self.assertIsNone(report.witness)

    def test_g2_brute_force_agrees(self):
        for g in range(1, 7):
            solutions = [
                (k1, k2)
                for k1 in range(14 * g // 11 + 1)
                for k2 in range(14 * g // 7 + 1)
                if 11 * k1 + 7 * k2 == 14 * g
            ]
            for k1, k2 in solutions:
                with self.subTest(g=g, k=(k1, k2)):
                    self.assertLess(4 * k1 + 2 * k2, 6 * g)

    def test_simply_laced_reduces_to_count(self):
        report = obstruction_analysis(build_root_system('A', 3), 2)
        self.assertEqual(report.status, 'FEASIBLE')
        self.assertTrue(all(s == 0 for _, s, _, _ in report.aggregates))

    def test_c2_feasible(self):
        report = obstruction_analysis(build_root_system('C', 2), 2)
        self.assertEqual(report.status, 'FEASIBLE')

    def test_budget_gives_undecided(self):
        report = obstruction_analysis(build_root_system('G2', 2), 6, budget=1)
        self.assertEqual(report.status, 'UNDECIDED')

    def test_budget_counts_every_node(self):
        rs = build_root_system('G2', 2)
        # root plus k_1 = 0..7; only k_1 = 0 and 7 reach a divisible leaf
        self.assertEqual(obstruction_analysis(rs, 6).enumerated, 9)
        self.assertEqual(obstruction_analysis(rs, 6, budget=9).status, 'INFEASIBLE')
        self.assertEqual(obstruction_analysis(rs, 6, budget=8).status, 'UNDECIDED')
        self.assertEqual(obstruction_analysis(rs, 6, budget=2).status, 'UNDECIDED')


class SearchTests(SimpleTestCase):

    def test_c2_rotation_pool(self):
        rs = build_root_system('C', 2)
        group = weyl_group(rs)
        nu = c_rotation(rs)
        pool = tuple(power(nu, k, group.identity()) for k in range(4))
        result = search(rs, 2, SearchOptions(twist_pool=pool))
        self.assertTrue(result.found)
        self.assertEqual(verify(result.scheme).verdict, 'PASS')
        self.assertEqual(result.scheme.parameter_count, 20)

    def test_search_is_deterministic(self):
        rs = build_root_system('C', 2)
        first = search(rs, 2)
        second = search(rs, 2)
        self.assertTrue(first.found)
        self.assertEqual(dump_scheme(first.scheme), dump_scheme(second.scheme))

    def test_coin_certificate(self):
        self.assertFalse(representable(3, [2]))
        result = search(build_root_system('A', 1), 1)
        self.assertFalse(result.found)
        self.assertEqual(result.infeasible.kind, 'coin')

    def test_g2_is_infeasible(self):
        rs = build_root_system('G2', 2)
        for g in (1, 2, 3):
            result = search(rs, g)
            with self.subTest(g=g):
                self.assertFalse(result.found)
                self.assertEqual(result.infeasible.kind, 'aggregate')

    def test_budget(self):
        with self.assertRaises(SearchBudgetExceeded):
            search(build_root_system('C', 2), 2, SearchOptions(budget=1))


class SchemeFileTests(SimpleTestCase):

    def test_round_trip(self):
        scheme = preset('Dl', 5, 2)
        loaded = load_scheme(json.loads(json.dumps(dump_scheme(scheme))))
        self.assertEqual(loaded.entries, scheme.entries)
        self.assertEqual(loaded.genus, 2)
        self.assertIs(loaded.root_system, scheme.root_system)

    def test_rejects_bad_documents(self):
        good = dump_scheme(preset('Cl', 2, 2))
        bad_documents = [
            [],
            {k: v for k, v in good.items() if k != 'genus'},
            dict(good, entries=[{'twist': '[3,1]', 'coweight': 1, 'points': 1}]),
            dict(good, entries=[{'twist': 'e', 'coweight': 3, 'points': 1}]),
            dict(good, entries=[{'twist': 'e', 'coweight': 1, 'points': 0}]),
            dict(good, type='E'),
        ]
        for document in bad_documents:
            with self.subTest(document=document):
                with self.assertRaises(SchemeFormatError):
                    load_scheme(document)


class SchemeCommandTests(SimpleTestCase):

    def call(self, *args, **kwargs):
        out = StringIO()
        call_command('scheme', *args, stdout=out, **kwargs)
        return out.getvalue()

    def test_preset_pipes_into_verify(self):
        document = self.call('preset', '--family', 'Cl', '--rank', '3', '--genus', '4')
        output = self.call('verify', '-', stdin=StringIO(document))
        self.assertIn('PASS', output)

    def test_verify_json_is_byte_stable(self):
        document = self.call('preset', '--family', 'A3', '--rank', '3', '--genus', '2')
        first = self.call('verify', '--json', stdin=StringIO(document))
        second = self.call('verify', '--json', stdin=StringIO(document))
        self.assertEqual(first, second)
        self.assertEqual(json.loads(first)['verdict'], 'PASS')

    def test_verify_file_and_failure_exit(self):
        scheme = preset('A3', 3, 2)
        document = dump_scheme(scheme)
        document['entries'] = document['entries'][1:]
        with tempfile.NamedTemporaryFile('w', suffix='.json', delete=False) as handle:
            json.dump(document, handle)
        try:
            with self.assertRaises(CommandError) as ctx:
                self.call('verify', handle.name)
            self.assertEqual(ctx.exception.returncode, 1)
        finally:
            os.unlink(handle.name)

    def test_missing_file_and_bad_json_exit_2(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('verify', '/nonexistent/scheme.json')
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            self.call('verify', stdin=StringIO('{not json'))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_obstruct_g2(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('obstruct', '--family', 'G2', '--genus', '2')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_obstruct_undecided_is_not_success(self):
        out = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command('scheme', 'obstruct', '--family', 'G2', '--genus', '6', '--budget', '2', stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('UNDECIDED', out.getvalue())

    def test_obstruct_feasible_exits_0(self):
        data = json.loads(self.call('obstruct', '--family', 'C2', '--genus', '2', '--json'))
        self.assertEqual(data['status'], 'FEASIBLE')

    def test_search_output_is_a_scheme_file(self):
        found = self.call('search', '--family', 'C2', '--genus', '2', '--cyclic', '[2,-1]', '--json')
        output = self.call('verify', stdin=StringIO(found))
        self.assertIn('PASS', output)

    @override_settings(HECKE_SETTINGS={'SEARCH_BUDGET': 2})
    def test_search_budget_from_settings(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('search', '--family', 'C2', '--genus', '2')
        self.assertEqual(ctx.exception.returncode, 2)
