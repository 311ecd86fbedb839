"""
Serializers for the django_transport_polytopes API.

They validate the input wire formats; output reports are built by the
service from the domain values.
"""

from rest_framework import serializers

from django_transport_polytopes.polytopes.central import CentralSpec
from django_transport_polytopes.polytopes.exceptions import InvalidMargins, InvalidShape
from django_transport_polytopes.polytopes.polytope import Margins
from django_transport_polytopes.polytopes.rational import format_rational, parse_rational
from django_transport_polytopes.services.pipeline import CentralEmit, Command, RunConfig


class RationalField(serializers.Field):
    """A rational given as "p/q", "p" or an integer; floats are rejected."""

    default_error_messages = {
        'invalid': 'Expected a rational as "p/q", "p" or an integer.',
    }

    def to_internal_value(self, data):
        try:
            return parse_rational(data)
        except InvalidMargins:
            self.fail('invalid')

    def to_representation(self, value):
        return format_rational(value)


class MarginsSerializer(serializers.Serializer):
    """Serializer for margins {"r": [...], "c": [...]}."""

    r = serializers.ListField(
        child=RationalField(),
        allow_empty=False,
        help_text="Row sums, positive rationals",
    )
    c = serializers.ListField(
        child=RationalField(),
        allow_empty=False,
        help_text="Column sums, positive rationals with the same total as r",
    )

    def validate(self, attrs):
        try:
            attrs['margins'] = Margins(tuple(attrs['r']), tuple(attrs['c']))
        except InvalidMargins as exc:
            raise serializers.ValidationError(str(exc))
        return attrs


class CentralSpecSerializer(serializers.Serializer):
    """Serializer for a central kn x n polytope."""

    k = serializers.IntegerField(min_value=1, help_text="Rows per column of a matching")
    n = serializers.IntegerField(min_value=1, help_text="Number of columns")
    a = serializers.IntegerField(min_value=1, help_text="Common row sum")

    def validate(self, attrs):
        try:
            attrs['spec'] = CentralSpec(attrs['k'], attrs['n'], attrs['a'])
        except InvalidShape as exc:
            raise serializers.ValidationError(str(exc))
        return attrs


class RunRequestSerializer(serializers.Serializer):
    """Serializer for a pipeline run request."""

    command = serializers.ChoiceField(choices=Command.choices, help_text="Pipeline to run")
    margins = MarginsSerializer(required=False, help_text="General margins")
    central = CentralSpecSerializer(required=False, help_text="Central (k, n, a) triple")
    emit = serializers.ChoiceField(
        choices=CentralEmit.choices,
        default=CentralEmit.COUNTS,
        help_text="What the central command reports",
    )
    seed = serializers.IntegerField(required=False, help_text="Seed for evaluation points")

    def validate(self, attrs):
        if ('margins' in attrs) == ('central' in attrs):
            raise serializers.ValidationError("Give exactly one of 'margins' or 'central'.")
        if attrs['command'] == Command.CENTRAL and 'central' not in attrs:
            raise serializers.ValidationError("The central command needs a 'central' triple.")
        return attrs

    def to_run_config(self) -> RunConfig:
        data = self.validated_data
        return RunConfig(
            command=data['command'],
            margins=data['margins']['margins'] if 'margins' in data else None,
            central=data['central']['spec'] if 'central' in data else None,
            emit=data['emit'],
            seed=data.get('seed'),
        )
