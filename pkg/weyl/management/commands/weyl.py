from core.commands import HeckeCommand
from core.output import rational_pair, render_table
from weyl.services import weyl_group


class Command(HeckeCommand):
    help = 'Weyl group elements: reduced words, coset representatives, w0 and orbits'

    actions = {
        'reduced-word': 'Reduced word and length of an element',
        'cosets': 'Minimal coset representatives of W/W_λ for dominant λ∨',
        'longest': 'Longest element w0 and the index involution ω',
        'orbit': 'Orbit of a coweight, or images of roots under listed twists',
    }

    def add_reduced_word_arguments(self, parser):
        self.add_system_arguments(parser)
        parser.add_argument('--element', required=True, help="'[2,-1,3]', '(1 3)(2 4)' or 'e'")

    def add_cosets_arguments(self, parser):
        self.add_system_arguments(parser)
        parser.add_argument('--coweight', required=True, help='Dominant coweight, e.g. 1,0')

    def add_longest_arguments(self, parser):
        self.add_system_arguments(parser)

    def add_orbit_arguments(self, parser):
        self.add_system_arguments(parser)
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument('--coweight', help='Orbit W·λ∨ of this coweight')
        target.add_argument('--roots', action='store_true', help='Images of every root under --twists')
        parser.add_argument('--twists', help="Semicolon separated twists, e.g. 'e;(1 3);[2,1,3,4]'")
        parser.add_argument('--cover', type=int, metavar='I',
                            help='With --roots: count Σ max(0, <λ_i∨, ν⁻¹α>) instead of plain images')

    def handle_reduced_word(self, options):
        rs = self.root_system(options)
        group = weyl_group(rs)
        w = group.with_reduced_word(group.parse(options['element']))
        data = {'element': w.one_line(), 'word': list(w.word), 'length': len(w.word)}
        table = f"{w.one_line()} = s_{' s_'.join(str(i) for i in w.word) if w.word else 'e'}  (length {len(w.word)})"
        self.emit(options, data, table)

    def handle_cosets(self, options):
        rs = self.root_system(options)
        group = weyl_group(rs)
        coweight = self.coweight(rs, options['coweight'])
        reps = group.minimal_coset_reps(coweight)
        rows = [(w.one_line(), list(w.word), group.act_on_coweight(w, coweight)) for w in reps]
        data = {
            'coweight': [rational_pair(c) for c in coweight.coeffs],
            'representatives': [
                {'element': e, 'word': word, 'image': [rational_pair(c) for c in image.coeffs]}
                for e, word, image in rows
            ],
        }
        table = render_table(['element', 'word', 'w·λ∨'], [(e, word, image) for e, word, image in rows])
        self.emit(options, data, table)

    def handle_longest(self, options):
        rs = self.root_system(options)
        w0, omega = weyl_group(rs).longest_element_involution()
        data = {'w0': w0.one_line(), 'word': list(w0.word), 'length': len(w0.word), 'omega': list(omega)}
        table = '\n'.join([
            f'w0 = {w0.one_line()}, length {len(w0.word)}',
            'ω = ' + ' '.join(f'{i}->{j}' for i, j in enumerate(omega, start=1)),
        ])
        self.emit(options, data, table)

    def handle_orbit(self, options):
        rs = self.root_system(options)
        group = weyl_group(rs)
        if options.get('twists'):
            twists = [group.parse(text) for text in options['twists'].split(';')]
        else:
            twists = None

        if options.get('coweight'):
            coweight = self.coweight(rs, options['coweight'])
            if twists is None:
                points = list(group.orbit_traversal(coweight))
            else:
                points = group.orbit(twists, coweight)
            data = {'size': len(points), 'orbit': [[rational_pair(c) for c in p.coeffs] for p in points]}
            table = '\n'.join([f'{len(points)} points'] + [str(p) for p in points])
            self.emit(options, data, table)
            return

        if twists is None:
            twists = group.elements()
        if options.get('cover'):
            counts = group.coverage(twists, options['cover'])
        else:
            counts = group.orbit_multiplicities(twists, rs.roots)
        rows = sorted(counts.items(), key=lambda item: rs.roots.index(item[0]))
        data = {
            'twists': [w.one_line() for w in twists],
            'multiplicities': [{'root': list(root), 'count': n} for root, n in rows],
            'uniform': len({n for _, n in rows}) == 1,
        }
        table = render_table(['root', 'count'], [(list(root), n) for root, n in rows])
        self.emit(options, data, table)


