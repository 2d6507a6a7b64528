"""
Base class for the hecke management commands

Each command is a subcommand with several actions (argparse subparsers).
Exit status follows one rule everywhere: 0 for success or PASS, 1 for a FAIL,
INFEASIBLE or UNDECIDED verdict, 2 for usage and input errors.
"""

import logging
from typing import Any, Dict

from django.core.management.base import BaseCommand, CommandError

from rootsys.services import Coweight, RootSystem, build_root_system

from .exceptions import HeckeError
from .output import dump_json, parse_vector

logger = logging.getLogger(__name__)

EXIT_VERDICT_FAILED = 1
EXIT_USAGE = 2


class HeckeCommand(BaseCommand):
    """Dispatches `manage.py <command> <action>` to handle_<action>"""

    requires_system_checks = []
    actions: Dict[str, str] = {}

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='action', required=True, metavar='action')
        for name, help_text in self.actions.items():
            sub = subparsers.add_parser(
                name,
                help=help_text,
                called_from_command_line=parser.called_from_command_line,
            )
            sub.add_argument('--json', action='store_true', dest='as_json',
                             help='Emit machine-readable JSON instead of a table')
            hook = getattr(self, f"add_{name.replace('-', '_')}_arguments", None)
            if hook is not None:
                hook(sub)

    @staticmethod
    def add_system_arguments(parser, required: bool = True):
        parser.add_argument('--type', dest='type_label', required=required,
                            help='Root system type: A, B, C, D or G2')
        parser.add_argument('--rank', type=int, required=required, help='Rank l')

    @staticmethod
    def root_system(options: Dict[str, Any]) -> RootSystem:
        return build_root_system(options['type_label'], options['rank'])

    @staticmethod
    def coweight(rs: RootSystem, text: str) -> Coweight:
        return rs.coweight(parse_vector(text))

    def handle(self, *args, **options):
        action = options['action']
        handler = getattr(self, f"handle_{action.replace('-', '_')}")
        try:
            handler(options)
        except HeckeError as e:
            logger.debug(f'{self.__class__.__module__} {action} rejected input: {e}')
            raise CommandError(str(e), returncode=EXIT_USAGE) from e
        except OSError as e:
            raise CommandError(f'{getattr(e, "filename", None) or "input"}: {e.strerror or e}',
                               returncode=EXIT_USAGE) from e

    def emit(self, options: Dict[str, Any], data: Any, table: str):
        if options.get('as_json'):
            self.stdout.write(dump_json(data))
        else:
            self.stdout.write(table)

    def fail(self, message: str):
        raise CommandError(message, returncode=EXIT_VERDICT_FAILED)
