import json
import re
import sys

from core.commands import HeckeCommand
from core.conf import hecke_setting
from core.exceptions import HeckeError, SchemeFormatError
from core.output import dump_json, parse_int_vector, render_table
from rootsys.services import build_root_system
from schemes.serializers import dump_report, dump_scheme, load_scheme
from schemes.services import (
    AT_LEAST,
    EXACT,
    SearchOptions,
    obstruction_analysis,
    preset,
    search,
    verify,
)
from weyl.services import weyl_group

FAMILY_LABEL = re.compile(r'^\s*(G2|[A-Da-d])\s*(\d+)?\s*$', re.IGNORECASE)


def _system_from(options):
    """--family B3 / G2, or --type with --rank."""
    if options.get('family'):
        match = FAMILY_LABEL.match(options['family'])
        if not match:
            raise HeckeError(f"--family '{options['family']}' is not a label like C3 or G2")
        type_label, rank = match.group(1).upper(), match.group(2)
        if type_label == 'G2':
            rank = 2
        elif rank is None:
            rank = options.get('rank')
        return build_root_system(type_label, rank)
    if not options.get('type_label') or not options.get('rank'):
        raise HeckeError('give --family LABEL or both --type and --rank')
    return build_root_system(options['type_label'], options['rank'])


class Command(HeckeCommand):
    help = 'Parametrization schemes: presets, verification, search and obstruction screening'

    stealth_options = ('stdin',)

    actions = {
        'preset': 'Write one of the A3, Cl, Dl schemes as a scheme file',
        'verify': 'Check a scheme file (path or - for stdin)',
        'search': 'Search for entry counts that pass verify',
        'obstruct': 'Twist-invariant aggregate screen for a system and genus',
    }

    def add_preset_arguments(self, parser):
        parser.add_argument('--family', required=True, help='A3, Cl or Dl')
        parser.add_argument('--rank', type=int, required=True)
        parser.add_argument('--genus', type=int, required=True, help='Even genus g = 2k')

    def add_verify_arguments(self, parser):
        parser.add_argument('path', nargs='?', default='-', help='Scheme file, or - for stdin')
        parser.add_argument('--strict', action='store_true', help='Require deg D_α = g exactly')

    def add_search_arguments(self, parser):
        parser.add_argument('--family', help='System label such as C2 or G2')
        self.add_system_arguments(parser, required=False)
        parser.add_argument('--genus', type=int, required=True)
        parser.add_argument('--indices', help='Allowed coweight indices, e.g. 1,2')
        pool = parser.add_mutually_exclusive_group()
        pool.add_argument('--twists', help="Semicolon separated twist pool, e.g. 'e;[2,-1]'")
        pool.add_argument('--cyclic', metavar='ELEMENT', help='Twist pool generated by one element')
        parser.add_argument('--strict', action='store_true', help='Require deg D_α = g exactly')
        parser.add_argument('--budget', type=int, help='Node budget (default HECKE_SEARCH_BUDGET)')

    def add_obstruct_arguments(self, parser):
        parser.add_argument('--family', help='System label such as B3 or G2')
        self.add_system_arguments(parser, required=False)
        parser.add_argument('--genus', type=int, required=True)
        parser.add_argument('--budget', type=int, help='Enumeration budget (default HECKE_SEARCH_BUDGET)')

    def handle_preset(self, options):
        scheme = preset(options['family'], options['rank'], options['genus'])
        self.stdout.write(dump_json(dump_scheme(scheme)))

    def _read_document(self, options):
        path = options['path']
        if path == '-':
            stream = options.get('stdin') or sys.stdin
            text = stream.read()
            source = 'stdin'
        else:
            with open(path, encoding='utf-8') as handle:
                text = handle.read()
            source = path
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemeFormatError(f'{source}: invalid JSON ({e.msg} at line {e.lineno})') from e

    def handle_verify(self, options):
        scheme = load_scheme(self._read_document(options))
        report = verify(scheme, EXACT if options['strict'] else AT_LEAST)
        rs = scheme.root_system

        rows = []
        for length_class in ('short', 'long'):
            for d in report.root_degrees:
                if d.length_class == length_class:
                    detail = ', '.join(f'#{p}:{v}' for p, v in d.contributions)
                    rows.append((length_class, list(d.root), d.degree, detail))
        lines = [
            f'{rs.label}, genus {scheme.genus}: {report.verdict}',
            f'parameters N = {report.param_count}, target g·dim G = {report.param_target}'
            f" [{'ok' if report.param_ok else 'FAIL'}]",
            f"root degrees ({report.degree_mode}): min {report.min_degree} [{'ok' if report.degrees_ok else 'FAIL'}]",
            render_table(['class', 'root', 'degree', 'contributions'], rows),
            render_table(['toral line', 'points', 'entries'],
                         [(list(t.direction), t.count, list(t.entries)) for t in report.toral_lines]),
            f"spanning [{'ok' if report.spanning else 'FAIL'}], "
            f"toral basis with ≥ g points [{'ok' if report.basis_ok else 'FAIL'}]",
            f'top type {list(report.top_type.class_vector)} in {report.top_type.describe_group()}'
            f" ({'trivial' if report.top_type.is_identity else 'nontrivial'})",
            f"bookkeeping Σ deg D_α + M = N [{'ok' if report.bookkeeping_ok else 'FAIL'}]",
        ]
        lines.extend(f'note: {n}' for n in report.notes)
        lines.extend(f'failed: {f}' for f in report.failures)
        lines.append(report.disclaimer)
        self.emit(options, dump_report(scheme, report), '\n'.join(lines))
        if report.verdict != 'PASS':
            self.fail(f'{rs.label} scheme fails: ' + '; '.join(report.failures))

    def handle_search(self, options):
        rs = _system_from(options)
        group = weyl_group(rs)
        pool = None
        if options.get('twists'):
            pool = tuple(group.parse(text) for text in options['twists'].split(';'))
        elif options.get('cyclic'):
            generator = group.parse(options['cyclic'])
            pool, current = [group.identity()], generator
            while not current.is_identity:
                pool.append(current)
                current = current * generator
            pool = tuple(pool)
        search_options = SearchOptions(
            coweight_indices=parse_int_vector(options['indices']) if options.get('indices') else None,
            twist_pool=pool,
            degree_mode=EXACT if options['strict'] else AT_LEAST,
            budget=options.get('budget') or hecke_setting('SEARCH_BUDGET'),
        )
        result = search(rs, options['genus'], search_options)
        if result.found:
            scheme = result.scheme
            table = '\n'.join([
                f'{rs.label}, genus {scheme.genus}: found after {result.nodes} nodes',
                render_table(['twist', 'coweight', 'points'],
                             [(e.twist.one_line(), e.coweight_index, e.points) for e in scheme.entries]),
            ])
            self.emit(options, dump_scheme(scheme), table)
            return

        infeasible = result.infeasible
        data = {'system': rs.label, 'genus': options['genus'], 'status': 'INFEASIBLE', 'kind': infeasible.kind,
                'certificate': list(infeasible.certificate), 'scope': infeasible.scope, 'nodes': result.nodes}
        table = '\n'.join([f'{rs.label}, genus {options["genus"]}: INFEASIBLE ({infeasible.kind})',
                           f'scope: {infeasible.scope}'] + list(infeasible.certificate))
        self.emit(options, data, table)
        self.fail(f'no scheme for {rs.label} at genus {options["genus"]}')

    def handle_obstruct(self, options):
        rs = _system_from(options)
        report = obstruction_analysis(rs, options['genus'], budget=options.get('budget'))
        data = {
            'system': rs.label,
            'genus': report.genus,
            'status': report.status,
            'aggregates': [{'index': i, 'short': s, 'long': t, 'parameters': p} for i, s, t, p in report.aggregates],
            'constraints': list(report.constraints),
            'witness': list(report.witness) if report.witness is not None else None,
            'enumerated': report.enumerated,
        }
        table = '\n'.join([
            f'{rs.label}, genus {report.genus}: {report.status}',
            render_table(['i', 's_i', 't_i', 's_i + t_i + 1'], report.aggregates),
            *report.constraints,
            f'witness k = {list(report.witness)}' if report.witness else f'{report.enumerated} nodes visited',
        ])
        self.emit(options, data, table)
        if report.status == 'INFEASIBLE':
            self.fail(f'{rs.label} admits no scheme at genus {report.genus}')
        if report.status == 'UNDECIDED':
            self.fail(f'{rs.label} at genus {report.genus}: undecided after {report.enumerated} nodes, raise --budget')


