import sys
from typing import Sequence

from apbez.cli.command import CLI, Command
from apbez.cli.arg import Arg, ArgumentError, CommandSignatureError, Tokens
from apbez.cli.decorators import description

__all__ = [
    "Arg",
    "ArgumentError",
    "CLI",
    "Command",
    "CommandSignatureError",
    "Tokens",
    "description",
    "main",
]


def main(argv: Sequence[str] = None) -> int:
    """
    Entry point of the ``apbez`` script.
    """
    from apbez.cli.commands import cli
    from apbez.config import configure_logging
    from apbez.errors import ConfigError

    try:
        configure_logging()
    except ConfigError as exc:
        print(f"apbez: {exc}", file=sys.stderr)
        return 2
    return cli.run(sys.argv[1:] if argv is None else argv)
