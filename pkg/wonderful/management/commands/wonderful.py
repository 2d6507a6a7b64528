from core.commands import HeckeCommand
from core.conf import hecke_setting
from core.output import parse_vector, rational_pair, rational_text, render_table, vector_text
from weyl.services import weyl_group
from wonderful.services import (
    LEFT,
    RIGHT,
    TorusPoint,
    boundary_points,
    check_lr_transpose,
    degeneration_rank,
    infinitesimal_action,
    infinitesimal_transpose,
    inversion_on_torus,
    killing_data,
    lr_sweep,
    random_points,
    twisted_action,
)


def _matrix_pairs(matrix):
    return [[rational_pair(matrix[r, c]) for c in range(matrix.cols)] for r in range(matrix.rows)]


def _dump_tangent_map(tangent):
    return {
        'side': tangent.side,
        'twist': tangent.twist.one_line() if tangent.twist is not None else None,
        'rows': list(tangent.row_labels),
        'columns': list(tangent.col_labels),
        'matrix': _matrix_pairs(tangent.matrix),
    }


def _matrix_table(tangent):
    rows = []
    for r, label in enumerate(tangent.row_labels):
        rows.append([label] + [rational_text(tangent.matrix[r, c]) for c in range(tangent.matrix.cols)])
    return render_table([''] + list(tangent.col_labels), rows)


class Command(HeckeCommand):
    help = 'Torus chart of the wonderful compactification: tangent maps and the lr-transpose identity'

    actions = {
        'action': 'Matrix of dL or dR at a torus point',
        'transpose': 'Matrix of the dual map dLᵗ or dRᵗ',
        'killing': 'Toral Gram matrix and constants k_α = κ(x_α, y_α)',
        'check': 'dL κ̃ dLᵗ = dR κ̃ dRᵗ at a point, the boundary points or random points',
        'twist': 'dL in the chart twisted by a Weyl element',
        'invert': 'Group inversion restricted to torus coordinates',
    }

    def _point_arguments(self, parser, required=True):
        self.add_system_arguments(parser)
        parser.add_argument('--point', required=required, help='Torus coordinates z_1..z_l, e.g. 1/2,0,3')

    def add_action_arguments(self, parser):
        self._point_arguments(parser)
        parser.add_argument('--side', choices=(LEFT, RIGHT), default=LEFT)

    def add_transpose_arguments(self, parser):
        self.add_action_arguments(parser)

    def add_killing_arguments(self, parser):
        self.add_system_arguments(parser)

    def add_check_arguments(self, parser):
        self._point_arguments(parser, required=False)
        parser.add_argument('--boundary', action='store_true', help='All 2^l points with coordinates 0 or 1')
        parser.add_argument('--random', type=int, metavar='N', help='N random rational points')
        parser.add_argument('--seed', type=int, help='Seed for --random')
        parser.add_argument('--workers', type=int, help='Worker processes for the sweep')

    def add_twist_arguments(self, parser):
        self._point_arguments(parser)
        parser.add_argument('--twist', required=True, help="Weyl element ν, e.g. '[2,1,3]'")

    def add_invert_arguments(self, parser):
        self._point_arguments(parser)

    def handle_action(self, options):
        rs = self.root_system(options)
        tangent = infinitesimal_action(rs, parse_vector(options['point']), options['side'])
        self.emit(options, _dump_tangent_map(tangent), _matrix_table(tangent))

    def handle_transpose(self, options):
        rs = self.root_system(options)
        tangent = infinitesimal_transpose(rs, parse_vector(options['point']), options['side'])
        self.emit(options, _dump_tangent_map(tangent), _matrix_table(tangent))

    def handle_killing(self, options):
        rs = self.root_system(options)
        data = killing_data(rs)
        payload = {
            'toral_gram': _matrix_pairs(data.toral_gram),
            'constants': [{'root': list(root), 'k': rational_pair(data.root_constants[root]),
                           'c': rational_pair(data.c(root))} for root in rs.positive_roots],
        }
        table = '\n'.join([
            'toral Gram matrix: ' + '; '.join(' '.join(rational_text(x) for x in data.toral_gram.row(i))
                                              for i in range(rs.rank)),
            render_table(['root', 'k_α', 'c_α'],
                         [(list(root), rational_text(data.root_constants[root]), rational_text(data.c(root)))
                          for root in rs.positive_roots]),
        ])
        self.emit(options, payload, table)

    def handle_check(self, options):
        rs = self.root_system(options)
        points = []
        if options.get('point'):
            points.append(parse_vector(options['point']))
        if options.get('boundary'):
            points.extend(p.z for p in boundary_points(rs))
        if options.get('random'):
            seed = options['seed'] if options.get('seed') is not None else hecke_setting('DEFAULT_SEED')
            points.extend(p.z for p in random_points(rs, options['random'], seed))
        if not points:
            points = [p.z for p in boundary_points(rs)]
            points.extend(p.z for p in random_points(rs, hecke_setting('RANDOM_POINTS'),
                                                     hecke_setting('DEFAULT_SEED')))

        if len(points) == 1:
            results = [check_lr_transpose(rs, points[0])]
        else:
            results = lr_sweep(rs, [TorusPoint(z) for z in points], options.get('workers'))

        failures = [(z, r) for z, r in zip(points, results) if not r.holds]
        data = {
            'system': rs.label,
            'points': len(points),
            'holds': not failures,
            'failures': [
                {'point': [rational_pair(x) for x in z], 'row': r.witness[0], 'column': r.witness[1],
                 'left': rational_pair(r.witness[2]), 'right': rational_pair(r.witness[3])}
                for z, r in failures
            ],
        }
        lines = [f'{rs.label}: identity holds at {len(points) - len(failures)}/{len(points)} points']
        lines.extend(f'fails at {vector_text(z)}: entry {r.witness[:2]}' for z, r in failures)
        self.emit(options, data, '\n'.join(lines))
        if failures:
            self.fail(f'lr-transpose identity fails at {len(failures)} points')

    def handle_twist(self, options):
        rs = self.root_system(options)
        twist = weyl_group(rs).parse(options['twist'])
        tangent = twisted_action(rs, parse_vector(options['point']), twist)
        self.emit(options, _dump_tangent_map(tangent), _matrix_table(tangent))

    def handle_invert(self, options):
        rs = self.root_system(options)
        z = TorusPoint(parse_vector(options['point'])).z
        image = inversion_on_torus(rs, z)
        rank, expected = degeneration_rank(rs, z)
        data = {
            'point': [rational_pair(x) for x in z],
            'image': [rational_pair(x) for x in image.z],
            'involution': inversion_on_torus(rs, image.z).z == z,
            'rank': rank,
            'expected_rank': expected,
        }
        table = '\n'.join([
            f'ι{vector_text(z)} = {vector_text(image.z)}',
            f'rank of dL at z: {rank} (expected {expected})',
        ])
        self.emit(options, data, table)
