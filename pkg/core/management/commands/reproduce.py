import logging
import time

from django.core.management.base import BaseCommand, CommandError

from core.commands import EXIT_VERDICT_FAILED
from core.output import dump_json, rational_text, render_table
from rootsys.services import build_root_system, parameter_table
from schemes.services import (
    AT_LEAST,
    EXACT,
    a3_sign_relations,
    a3_twists,
    c_rotation,
    determinant_witness,
    obstruction_analysis,
    power,
    preset,
    verify,
)
from weyl.services import weyl_group

logger = logging.getLogger(__name__)

PARAMETER_GRID = (('A', range(1, 7)), ('B', range(2, 7)), ('C', range(2, 7)), ('D', range(3, 8)))
PRESET_GRID = (('A3', (3,)), ('Cl', range(2, 7)), ('Dl', range(4, 8)))
GENERA = (2, 4)


class Command(BaseCommand):
    help = 'Run the full reproduction grid and print a pass/fail matrix'

    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--json', action='store_true', dest='as_json')

    def _parameter_rows(self):
        for type_label, ranks in PARAMETER_GRID:
            for rank in ranks:
                rs = build_root_system(type_label, rank)
                rows = parameter_table(rs)
                counts = ' '.join(str(r['derived']) for r in rows)
                yield 'parameters', rs.label, all(r['matches'] for r in rows), counts

    def _preset_rows(self):
        for family, ranks in PRESET_GRID:
            for rank in ranks:
                for genus in GENERA:
                    scheme = preset(family, rank, genus)
                    loose = verify(scheme, AT_LEAST)
                    strict = verify(scheme, EXACT)
                    ok = loose.verdict == 'PASS' and strict.verdict == 'PASS' and loose.top_type.is_identity
                    detail = f'N={loose.param_count} lines={len(loose.toral_lines)}'
                    yield 'preset', f'{scheme.root_system.label} g={genus}', ok, detail

    def _orbit_rows(self):
        for rank in range(2, 9):
            rs = build_root_system('C', rank)
            group = weyl_group(rs)
            nu = c_rotation(rs)
            twists = [power(nu, k, group.identity()) for k in range(2 * rank)]
            counts = group.coverage(twists, 1)
            minus_one = power(nu, rank, group.identity()).perm == tuple(-(i + 1) for i in range(rank))
            ok = set(counts.values()) == {2} and minus_one
            yield 'orbit', rs.label, ok, f'{len(counts)} roots covered twice, ν^l = -1: {minus_one}'
        rs = build_root_system('A', 3)
        counts = weyl_group(rs).coverage(a3_twists(rs), 2)
        relations = a3_sign_relations()
        ok = set(counts.values()) == {2} and all(relations.values())
        yield 'orbit', rs.label, ok, f'{len(counts)} roots covered twice, sign relations {all(relations.values())}'

    def _determinant_rows(self):
        for rank in range(2, 9):
            witness = determinant_witness(rank)
            detail = (f'det={rational_text(witness.determinant)} stated={rational_text(witness.stated)} '
                      f'sign={witness.orientation_sign}')
            yield 'determinant', f'C{rank}', witness.matches_up_to_sign, detail

    def _obstruction_rows(self):
        rs = build_root_system('G2', 2)
        for genus in range(1, 7):
            report = obstruction_analysis(rs, genus)
            aggregates = ' '.join(f'{i}:({s},{t})' for i, s, t, _ in report.aggregates)
            yield 'obstruction', f'G2 g={genus}', report.status == 'INFEASIBLE', aggregates

    def handle(self, *args, **options):
        started = time.monotonic()
        rows = []
        for section in (self._parameter_rows, self._preset_rows, self._orbit_rows,
                        self._determinant_rows, self._obstruction_rows):
            rows.extend(section())
        failed = [row for row in rows if not row[2]]
        logger.info(f'Reproduction grid: {len(rows)} checks, {len(failed)} failed in '
                    f'{time.monotonic() - started:.1f}s')

        if options['as_json']:
            self.stdout.write(dump_json({
                'checks': [{'section': s, 'case': c, 'passed': ok, 'detail': d} for s, c, ok, d in rows],
                'passed': not failed,
            }))
        else:
            self.stdout.write(render_table(
                ['section', 'case', 'result', 'detail'],
                [(s, c, 'PASS' if ok else 'FAIL', d) for s, c, ok, d in rows],
            ))
        if failed:
            raise CommandError(f'{len(failed)} reproduction checks failed', returncode=EXIT_VERDICT_FAILED)
