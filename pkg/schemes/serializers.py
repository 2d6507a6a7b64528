"""Scheme file format: validation on load, plain documents on dump."""

from rest_framework import serializers

from core.exceptions import HeckeError, SchemeFormatError
from core.output import flatten_errors, rational_pair
from rootsys.services import build_root_system
from weyl.services import weyl_group

from .services import ModificationEntry, make_scheme


class SchemeEntrySerializer(serializers.Serializer):
    twist = serializers.CharField(help_text="one-line '[2,-1]', cycles '(1 3)' or 'e'")
    coweight = serializers.IntegerField(min_value=1)
    points = serializers.IntegerField(min_value=1)


class SchemeSerializer(serializers.Serializer):
    type = serializers.CharField(max_length=2)
    rank = serializers.IntegerField(min_value=1)
    genus = serializers.IntegerField(min_value=1)
    entries = SchemeEntrySerializer(many=True, allow_empty=False)
    notes = serializers.ListField(child=serializers.CharField(), required=False, default=list)

    def validate(self, attrs):
        try:
            rs = build_root_system(attrs['type'], attrs['rank'])
            group = weyl_group(rs)
            entries = [
                ModificationEntry(group.parse(e['twist']), e['coweight'], e['points'])
                for e in attrs['entries']
            ]
            attrs['scheme'] = make_scheme(rs, attrs['genus'], entries, attrs.get('notes', []))
        except HeckeError as e:
            raise serializers.ValidationError(str(e))
        return attrs


def load_scheme(document):
    """Validate a decoded scheme document and build the scheme."""
    if not isinstance(document, dict):
        raise SchemeFormatError('a scheme document is a JSON object')
    serializer = SchemeSerializer(data=document)
    if not serializer.is_valid():
        raise SchemeFormatError('; '.join(flatten_errors(serializer.errors)))
    return serializer.validated_data['scheme']


def dump_scheme(scheme):
    rs = scheme.root_system
    return {
        'type': rs.type_label,
        'rank': rs.rank,
        'genus': scheme.genus,
        'entries': [
            {'twist': entry.twist.one_line(), 'coweight': entry.coweight_index, 'points': entry.points}
            for entry in scheme.entries
        ],
        'notes': list(scheme.notes),
    }


def dump_report(scheme, report):
    return {
        'scheme': dump_scheme(scheme),
        'verdict': report.verdict,
        'failures': list(report.failures),
        'parameter_count': report.param_count,
        'parameter_target': report.param_target,
        'parameter_ok': report.param_ok,
        'degree_mode': report.degree_mode,
        'min_degree': report.min_degree,
        'degrees_ok': report.degrees_ok,
        'root_degrees': [
            {
                'root': list(d.root),
                'degree': d.degree,
                'length': d.length_class,
                'contributions': [{'entry': position, 'degree': value} for position, value in d.contributions],
            }
            for d in report.root_degrees
        ],
        'toral_lines': [
            {'direction': list(line.direction), 'count': line.count, 'entries': list(line.entries)}
            for line in report.toral_lines
        ],
        'spanning': report.spanning,
        'toral_basis': report.basis_ok,
        'top_type': {
            'class': list(report.top_type.class_vector),
            'group': list(report.top_type.group_structure),
            'trivial': report.top_type.is_identity,
        },
        'bookkeeping_ok': report.bookkeeping_ok,
        'notes': list(report.notes),
        'disclaimer': report.disclaimer,
    }


def dump_determinant(witness):
    return {
        'rank': witness.rank,
        'determinant': rational_pair(witness.determinant),
        'stated': rational_pair(witness.stated),
        'kac_determinant': rational_pair(witness.kac_determinant),
        'orientation_sign': witness.orientation_sign,
        'matches_exactly': witness.matches_exactly,
        'matches_up_to_sign': witness.matches_up_to_sign,
    }
