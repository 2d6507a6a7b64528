from rest_framework import serializers

from core.output import rational_pair

from .services import coroot_coordinates, fundamental_group_class, identity_class


def _pairs(vector):
    return [rational_pair(x) for x in vector]


class RootSystemSerializer(serializers.Serializer):
    """Canonical JSON document of a RootSystem"""

    type = serializers.CharField(source='type_label')
    rank = serializers.IntegerField()
    label = serializers.CharField()
    ambient_dim = serializers.IntegerField()
    dim_g = serializers.IntegerField()
    simple_roots = serializers.SerializerMethodField()
    cartan = serializers.SerializerMethodField()
    highest_roots = serializers.SerializerMethodField()
    positive_root_count = serializers.SerializerMethodField()
    fundamental_group = serializers.SerializerMethodField()

    def get_simple_roots(self, rs):
        return [_pairs(root) for root in rs.simple_roots]

    def get_cartan(self, rs):
        return [list(row) for row in rs.cartan]

    def get_highest_roots(self, rs):
        return [list(root) for root in rs.highest_roots]

    def get_positive_root_count(self, rs):
        return len(rs.positive_roots)

    def get_fundamental_group(self, rs):
        return list(identity_class(rs).group_structure)


class CoweightSerializer(serializers.Serializer):
    label = serializers.CharField()
    coeffs = serializers.SerializerMethodField()
    coroot_coordinates = serializers.SerializerMethodField()
    integral = serializers.SerializerMethodField()
    dominant = serializers.SerializerMethodField()
    fundamental_group_class = serializers.SerializerMethodField()

    def get_coeffs(self, coweight):
        return _pairs(coweight.coeffs)

    def get_coroot_coordinates(self, coweight):
        return _pairs(coroot_coordinates(self.context['rs'], coweight))

    def get_integral(self, coweight):
        return coweight.is_integral()

    def get_dominant(self, coweight):
        return coweight.is_dominant()

    def get_fundamental_group_class(self, coweight):
        if not coweight.is_integral():
            return None
        return list(fundamental_group_class(self.context['rs'], coweight).class_vector)
