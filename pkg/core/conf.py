"""Access to the HECKE_SETTINGS dict with built-in defaults."""

from typing import Any

from django.conf import settings

DEFAULTS = {
    'WORKERS': 1,
    'SEARCH_BUDGET': 1000000,
    'WEYL_ENUMERATION_CAP': 10000000,
    'DEFAULT_SEED': 0,
    'RANDOM_POINTS': 100,
}


def hecke_setting(name: str) -> Any:
    configured = getattr(settings, 'HECKE_SETTINGS', {}) or {}
    if name in configured:
        return configured[name]
    return DEFAULTS[name]
