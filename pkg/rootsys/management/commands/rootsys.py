from core.commands import HeckeCommand
from core.output import rational_pair, rational_text, render_table, vector_text
from rootsys.serializers import CoweightSerializer, RootSystemSerializer
from rootsys.services import (
    coroot_coordinates,
    fundamental_group_class,
    identity_class,
    kernel_coweight,
    parameter_table,
)


class Command(HeckeCommand):
    help = 'Root system data: realization, parameter counts, fundamental group, kernel coweights'

    actions = {
        'show': 'Simple roots, Cartan matrix and root counts',
        'params': 'Parameter counts 2<λ_i∨, ρ> + 1 against the closed forms',
        'pi1': 'Fundamental group Λ∨/Λr∨ and the class of a coweight',
        'kernel': 'Kernel coweights ξ_i in coroot coordinates',
    }

    def add_show_arguments(self, parser):
        self.add_system_arguments(parser)

    def add_params_arguments(self, parser):
        self.add_system_arguments(parser)

    def add_pi1_arguments(self, parser):
        self.add_system_arguments(parser)
        parser.add_argument('--coweight', help='Coefficients in the fundamental coweight basis, e.g. 1,0,1')

    def add_kernel_arguments(self, parser):
        self.add_system_arguments(parser)
        parser.add_argument('--index', type=int, help='Only ξ_i for this i')
        parser.add_argument('--convention', choices=('kac', 'transposed'), default='kac',
                            help='Row (kac) or column (transposed) of the inverse Cartan matrix')

    def handle_show(self, options):
        rs = self.root_system(options)
        data = RootSystemSerializer(rs).data
        rows = [(f'α{i}', vector_text(root), ' '.join(str(a) for a in rs.cartan[i - 1]))
                for i, root in enumerate(rs.simple_roots, start=1)]
        table = '\n'.join([
            f'{rs.label}: dim g = {rs.dim_g}, |Φ+| = {len(rs.positive_roots)}',
            render_table(['root', 'vector', 'cartan row'], rows),
        ])
        self.emit(options, data, table)

    def handle_params(self, options):
        rs = self.root_system(options)
        rows = parameter_table(rs)
        table = render_table(
            ['i', 'derived', 'closed form', 'match'],
            [(r['index'], r['derived'], '-' if r['closed_form'] is None else r['closed_form'],
              'yes' if r['matches'] else 'NO') for r in rows],
        )
        self.emit(options, {'system': rs.label, 'dim_g': rs.dim_g, 'rows': rows}, table)
        if not all(r['matches'] for r in rows):
            self.fail(f'{rs.label}: closed form disagrees with the derived parameter counts')

    def handle_pi1(self, options):
        rs = self.root_system(options)
        trivial = identity_class(rs)
        data = {'system': rs.label, 'group': list(trivial.group_structure), 'order': trivial.group_order}
        lines = [f'π1({rs.label}) = {trivial.describe_group()} (order {trivial.group_order})']
        if options.get('coweight'):
            coweight = self.coweight(rs, options['coweight'])
            element = fundamental_group_class(rs, coweight)
            data['coweight'] = CoweightSerializer(coweight, context={'rs': rs}).data
            data['class'] = list(element.class_vector)
            data['class_order'] = element.order
            lines.append(f'[{coweight}] = {list(element.class_vector)}, order {element.order}')
        self.emit(options, data, '\n'.join(lines))

    def handle_kernel(self, options):
        rs = self.root_system(options)
        indices = [options['index']] if options.get('index') else range(1, rs.rank + 1)
        rows = []
        for i in indices:
            xi = kernel_coweight(rs, i, options['convention'])
            rows.append((i, coroot_coordinates(rs, xi), xi.coeffs))
        data = {
            'system': rs.label,
            'convention': options['convention'],
            'kernels': [
                {'index': i, 'coroot_coordinates': [rational_pair(c) for c in coords],
                 'coweight': [rational_pair(c) for c in coeffs]}
                for i, coords, coeffs in rows
            ],
        }
        table = render_table(
            ['i', 'coroot coordinates', 'coweight'],
            [(i, vector_text(coords), ' '.join(rational_text(c) for c in coeffs)) for i, coords, coeffs in rows],
        )
        self.emit(options, data, table)
