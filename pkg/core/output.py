"""
Output helpers shared by the management commands

Parsing of rational command-line values, canonical JSON rendering and plain
text tables. JSON output is byte-stable: keys are sorted and rationals are
written as [numerator, denominator] integer pairs.
"""

import json
from typing import Any, Iterable, List, Sequence, Tuple

from sympy import Rational, SympifyError

from .exceptions import HeckeError


def parse_rational(text: str) -> Rational:
    """Parse '3', '-1/2' or '0' into an exact rational."""
    raw = str(text).strip()
    if not raw:
        raise HeckeError('empty rational value')
    try:
        value = Rational(raw)
    except (SympifyError, TypeError, ValueError) as e:
        raise HeckeError(f"'{raw}' is not a rational number") from e
    return value


def parse_vector(text: str) -> Tuple[Rational, ...]:
    """Parse a comma separated list of rationals, e.g. '1,0,1/2'."""
    raw = str(text).strip().strip('[]()')
    if not raw:
        return tuple()
    return tuple(parse_rational(part) for part in raw.split(','))


def parse_int_vector(text: str) -> Tuple[int, ...]:
    values = parse_vector(text)
    if any(not value.is_integer for value in values):
        raise HeckeError(f"'{text}' must contain integers only")
    return tuple(int(value) for value in values)


def rational_pair(value: Any) -> List[int]:
    value = Rational(value)
    return [int(value.p), int(value.q)]


def rational_text(value: Any) -> str:
    value = Rational(value)
    if value.q == 1:
        return str(value.p)
    return f'{value.p}/{value.q}'


def vector_text(values: Iterable[Any]) -> str:
    return '(' + ', '.join(rational_text(v) for v in values) + ')'


def flatten_errors(errors, prefix=''):
    """Serializer error dicts as 'field.path: message' lines."""
    if isinstance(errors, dict):
        for key, value in errors.items():
            yield from flatten_errors(value, f'{prefix}{key}.' if key != 'non_field_errors' else prefix)
    elif isinstance(errors, list):
        for position, value in enumerate(errors):
            if isinstance(value, (dict, list)):
                yield from flatten_errors(value, f'{prefix}{position}.')
            else:
                yield f'{prefix.rstrip(".") or "document"}: {value}'
    else:
        yield f'{prefix.rstrip(".") or "document"}: {errors}'


def dump_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Render rows as a left aligned plain text table."""
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(headers))]
    lines = []
    for n, row in enumerate(cells):
        lines.append('  '.join(cell.ljust(widths[k]) for k, cell in enumerate(row)).rstrip())
        if n == 0:
            lines.append('  '.join('-' * w for w in widths))
    return '\n'.join(lines)
