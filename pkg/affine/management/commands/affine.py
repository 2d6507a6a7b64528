import json

from core.commands import HeckeCommand
from core.exceptions import ElementFormatError, HeckeError, InconsistentRoutes
from core.output import parse_int_vector, render_table
from affine.serializers import dump_affine_element, dump_affine_root, load_affine_element
from affine.services import AffineRoot, affine_weyl_group


class Command(HeckeCommand):
    help = 'Affine Weyl group elements t(λ∨)w: action on affine roots, inversion sets, length'

    actions = {
        'act': 'Image of an affine root (α, n) under t(λ∨)w',
        'inversions': 'Inversion set Φ_af^s of an element',
        'length': 'Length by inversion count and by word descent',
    }

    def _element_arguments(self, parser):
        self.add_system_arguments(parser)
        parser.add_argument('--translation', help='λ∨ in the fundamental coweight basis, e.g. 1,0')
        parser.add_argument('--finite', default='e', help="Finite part w, e.g. '[2,1,3]' or 'e'")
        parser.add_argument('--word', help='Build the element from generator labels instead, e.g. 0,1,2')
        parser.add_argument('--element', help='JSON element, e.g. {"translation": [1, 0], "finite": "e"}')

    def add_act_arguments(self, parser):
        self._element_arguments(parser)
        parser.add_argument('--root', required=True, help='Root α in ambient coordinates, e.g. 1,-1,0')
        parser.add_argument('--level', type=int, default=0)

    def add_inversions_arguments(self, parser):
        self._element_arguments(parser)

    def add_length_arguments(self, parser):
        self._element_arguments(parser)
        parser.add_argument('--budget', type=int, default=10000, help='Step budget for the word descent')

    def _element(self, options):
        rs = self.root_system(options)
        group = affine_weyl_group(rs)
        if options.get('element'):
            try:
                document = json.loads(options['element'])
            except json.JSONDecodeError as e:
                raise ElementFormatError(f'--element: invalid JSON ({e.msg})') from e
            return rs, group, load_affine_element(rs, document)
        if options.get('word'):
            return rs, group, group.from_word(parse_int_vector(options['word']))
        if not options.get('translation'):
            raise HeckeError('give --translation (with optional --finite), --word or --element')
        translation = self.coweight(rs, options['translation'])
        return rs, group, group.element(translation, group.weyl.parse(options['finite']))

    def handle_act(self, options):
        rs, group, s = self._element(options)
        beta = AffineRoot(parse_int_vector(options['root']), options['level'])
        image = group.act(s, beta)
        data = {'element': dump_affine_element(s), 'root': dump_affine_root(beta), 'image': dump_affine_root(image)}
        self.emit(options, data, f't({s.translation}){s.finite} · {beta} = {image}')

    def handle_inversions(self, options):
        rs, group, s = self._element(options)
        found = group.inversion_set(s)
        data = {'element': dump_affine_element(s), 'size': len(found),
                'inversions': [dump_affine_root(beta) for beta in found]}
        table = '\n'.join([f'{len(found)} inversions',
                           render_table(['root', 'level'], [(list(b.root), b.level) for b in found])])
        self.emit(options, data, table)

    def handle_length(self, options):
        rs, group, s = self._element(options)
        by_count = group.length(s)
        descent = group.length_via_word(s, options['budget'])
        if descent.length != by_count:
            raise InconsistentRoutes(f'inversion count {by_count} != word length {descent.length}')
        data = {
            'element': dump_affine_element(s),
            'length': by_count,
            'word': list(descent.word),
            'residual': dump_affine_element(descent.residual),
        }
        table = '\n'.join([
            f'length {by_count} (inversion count and word descent agree)',
            f"word: {' '.join(str(g) for g in descent.word) or 'empty'}",
            f'residual Ω part: {descent.residual.label}',
        ])
        self.emit(options, data, table)
