from rest_framework import serializers
from sympy import Rational

from core.exceptions import ElementFormatError, HeckeError
from core.output import flatten_errors, parse_rational, rational_pair

from .services import affine_weyl_group


class RationalField(serializers.Field):
    """Accepts 3, "-1/2" or the [p, q] pairs written by --json output."""

    default_error_messages = {
        'invalid': 'expected an integer, a "p/q" string or a [p, q] pair',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail('invalid')
        if isinstance(data, list):
            if len(data) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in data) or data[1] == 0:
                self.fail('invalid')
            return Rational(data[0], data[1])
        if not isinstance(data, (int, str)):
            self.fail('invalid')
        try:
            return parse_rational(data)
        except HeckeError:
            self.fail('invalid')

    def to_representation(self, value):
        return rational_pair(value)


class AffineElementSerializer(serializers.Serializer):
    """{"translation": [coeffs], "finite": "<signed permutation>"}"""

    translation = serializers.ListField(child=RationalField(), allow_empty=False)
    finite = serializers.CharField(required=False, default='e')

    def validate(self, attrs):
        rs = self.context['rs']
        group = affine_weyl_group(rs)
        try:
            attrs['element'] = group.element(rs.coweight(attrs['translation']), group.weyl.parse(attrs['finite']))
        except HeckeError as e:
            raise serializers.ValidationError(str(e))
        return attrs


def load_affine_element(rs, document):
    """Build t(λ∨)w from a decoded element document; unknown keys are ignored."""
    if not isinstance(document, dict):
        raise ElementFormatError('an affine element document is a JSON object')
    serializer = AffineElementSerializer(data=document, context={'rs': rs})
    if not serializer.is_valid():
        raise ElementFormatError('; '.join(flatten_errors(serializer.errors)))
    return serializer.validated_data['element']


def dump_affine_element(element):
    return {
        'translation': [rational_pair(c) for c in element.translation.coeffs],
        'finite': element.finite.one_line(),
        'extended': element.extended,
    }


def dump_affine_root(beta):
    return {'root': list(beta.root), 'level': beta.level}
