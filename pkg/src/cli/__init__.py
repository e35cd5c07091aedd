"""
CLI modules - run configuration schema, output writers and subcommands
"""

from .run_config import RunConfig, TARGETS, parse_run_config, load_run_config
from .output import ensure_dir, write_csv, write_json
from .commands import (
    EXIT_OK, EXIT_FAIL, EXIT_IO, EXIT_VALIDATION,
    cmd_simulate, cmd_verify, cmd_sweep, build_parser, run
)

__all__ = [
    'RunConfig', 'TARGETS', 'parse_run_config', 'load_run_config',
    'ensure_dir', 'write_csv', 'write_json',
    'EXIT_OK', 'EXIT_FAIL', 'EXIT_IO', 'EXIT_VALIDATION',
    'cmd_simulate', 'cmd_verify', 'cmd_sweep', 'build_parser', 'run'
]
