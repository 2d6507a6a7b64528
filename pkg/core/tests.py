from io import StringIO
import json

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from sympy import Rational

from core.conf import DEFAULTS, hecke_setting
from core.exceptions import HeckeError
from core.output import (
    dump_json,
    parse_int_vector,
    parse_rational,
    parse_vector,
    rational_pair,
    rational_text,
    render_table,
)


class OutputTests(SimpleTestCase):

    def test_parse_rational(self):
        self.assertEqual(parse_rational('3/4'), Rational(3, 4))
        self.assertEqual(parse_rational(' -2 '), Rational(-2))
        with self.assertRaises(HeckeError):
            parse_rational('x')

    def test_parse_vectors(self):
        self.assertEqual(parse_vector('1, -1/2'), (Rational(1), Rational(-1, 2)))
        self.assertEqual(parse_int_vector('[1,2,3]'), (1, 2, 3))
        with self.assertRaises(HeckeError):
            parse_int_vector('1,1/2')

    def test_rational_forms(self):
        self.assertEqual(rational_pair(Rational(-5, 4)), [-5, 4])
        self.assertEqual(rational_pair(3), [3, 1])
        self.assertEqual(rational_text(Rational(7, 8)), '7/8')
        self.assertEqual(rational_text(Rational(2)), '2')

    def test_json_is_sorted_and_stable(self):
        text = dump_json({'b': 1, 'a': [1, 2]})
        self.assertEqual(text, dump_json({'a': [1, 2], 'b': 1}))
        self.assertLess(text.index('"a"'), text.index('"b"'))

    def test_render_table(self):
        table = render_table(['x', 'value'], [(1, 'long entry'), (22, 'y')])
        lines = table.splitlines()
        self.assertIn('value', lines[0])
        self.assertTrue(lines[1].startswith('--'))
        self.assertIn('long entry', table)


class ConfTests(SimpleTestCase):

    def test_defaults(self):
        with self.settings(HECKE_SETTINGS={}):
            self.assertEqual(hecke_setting('SEARCH_BUDGET'), DEFAULTS['SEARCH_BUDGET'])

    def test_override(self):
        with self.settings(HECKE_SETTINGS={'WORKERS': 3}):
            self.assertEqual(hecke_setting('WORKERS'), 3)
            self.assertEqual(hecke_setting('RANDOM_POINTS'), 100)


class ReproduceCommandTests(SimpleTestCase):

    def test_grid_passes(self):
        out = StringIO()
        call_command('reproduce', '--json', stdout=out)
        document = json.loads(out.getvalue())
        self.assertTrue(document['passed'])
        sections = {check['section'] for check in document['checks']}
        self.assertEqual(sections, {'parameters', 'preset', 'orbit', 'determinant', 'obstruction'})

    def test_table_output(self):
        out = StringIO()
        call_command('reproduce', stdout=out)
        self.assertIn('G2 g=6', out.getvalue())
        self.assertNotIn('FAIL', out.getvalue())


class ExitCodeTests(SimpleTestCase):

    def test_usage_errors_exit_2(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('rootsys', 'show', '--type', 'E', '--rank', '6', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            call_command('rootsys', 'show', '--type', 'B', '--rank', '1', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
