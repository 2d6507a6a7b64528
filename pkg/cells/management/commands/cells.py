from core.commands import HeckeCommand
from core.output import parse_int_vector, rational_pair, render_table
from cells.services import cell_dimension, decompose, deformation_dimension, deformation_sections


class Command(HeckeCommand):
    help = 'Affine Grassmannian cells Gr^λ∨ and deformation dimensions of cocharacters'

    actions = {
        'dim': 'dim Gr^λ∨ = 2<λ∨, ρ>',
        'decompose': 'Affine cells of Gr^λ∨ and its Poincaré polynomial',
        'deform': 'Deformation dimension of the cocharacter −Σ r_i λ_i∨',
    }

    def add_dim_arguments(self, parser):
        self.add_system_arguments(parser)
        parser.add_argument('--coweight', required=True, help='Dominant coweight, e.g. 2,0')

    def add_decompose_arguments(self, parser):
        self.add_dim_arguments(parser)

    def add_deform_arguments(self, parser):
        self.add_system_arguments(parser)
        parser.add_argument('--r', required=True, help='Non-negative integers r_i, e.g. 1,0')
        parser.add_argument('--sections', action='store_true', help='List the representative sections')

    def handle_dim(self, options):
        rs = self.root_system(options)
        coweight = self.coweight(rs, options['coweight'])
        dimension = cell_dimension(rs, coweight)
        data = {'system': rs.label, 'coweight': [rational_pair(c) for c in coweight.coeffs], 'dimension': dimension}
        self.emit(options, data, str(dimension))

    def handle_decompose(self, options):
        rs = self.root_system(options)
        coweight = self.coweight(rs, options['coweight'])
        result = decompose(rs, coweight)
        data = {
            'system': rs.label,
            'coweight': [rational_pair(c) for c in coweight.coeffs],
            'cells': [{'representative': c.representative.one_line(), 'word': list(c.representative.word),
                       'dimension': c.dimension} for c in result.cells],
            'top_dimension': result.top_dimension,
            'poincare': list(result.poincare),
            'in_coroot_lattice': result.in_coroot_lattice,
            'component_class': list(result.component_class.class_vector),
            'jet_bound': result.jet_bound,
        }
        table = '\n'.join([
            render_table(['representative', 'dimension'],
                         [(c.representative.one_line(), c.dimension) for c in result.cells]),
            f'P(q) = {result.poincare_polynomial().as_expr()}',
            f'top dimension {result.top_dimension}, jet bound {result.jet_bound}',
        ])
        self.emit(options, data, table)

    def handle_deform(self, options):
        rs = self.root_system(options)
        r = parse_int_vector(options['r'])
        dimension = deformation_dimension(rs, r)
        data = {'system': rs.label, 'r': list(r), 'dimension': dimension}
        lines = [str(dimension)]
        if options.get('sections'):
            sections = deformation_sections(rs, r)
            data['sections'] = sections
            lines.extend(sections)
        self.emit(options, data, '\n'.join(lines))
