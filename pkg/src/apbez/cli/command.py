import logging
import sys
from typing import Any, Callable, Sequence, TextIO, Union

from apbez.cli import arg as cli_arg
from apbez.cli.decorators import annotated
from apbez.errors import ApbezError, InfeasibleSegmentError, NeedsRefinementError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class Command:
    """
    Represents a registered command which contains various information about the command including its base function.
    """
    def __init__(self, name: str, func: Callable,
                 /, aliases: list[str] = None, lowercase: bool = True, cli: "CLI" = None):

        self.func = func
        """
        The underlying function which serves as the target for command invocation
        """
        self.name: str = name
        """
        The name of the command
        """
        self.description: str = getattr(func, "__description__", None)
        """
        An (optional) description of the command
        """
        self.cli = cli
        """
        The :class:`CLI` the command is registered with, used for its output streams
        """

        self.aliases = list(aliases or [])
        self._aliases = [self.name] + self.aliases
        self.lowercase = lowercase

        self._arg_matcher = cli_arg.ArgMatcher(self)

    def execute(self, raw_input: Sequence[str]) -> Any:
        """
        Executes the command (and therefore the execution function) with the provided tokens
        :param raw_input: The argv tokens containing arguments for execution
        """
        args = self._arg_matcher.match_arguments(raw_input)
        return self.func(*args)

    def matches(self, cmd_name: str) -> bool:
        """
        Checks if this command matches the given name.
        :param cmd_name: The name to check for matches
        :return: `True` if this command matches the given name otherwise `False`.
        """
        for alias in self._aliases:
            if self.lowercase and cmd_name.lower() == alias.lower():
                return True
            if cmd_name == alias:
                return True
        return False

    def usage(self) -> str:
        prog = self.cli.prog if self.cli else "apbez"
        lines = [f"usage: {prog} {self.name} [flags]"]
        if self.description:
            lines.append(f"  {self.description}")
        for arg in self._arg_matcher.arguments():
            details = []
            if arg.choices is not None:
                details.append("{" + "|".join(map(str, arg.choices)) + "}")
            if arg.required:
                details.append("required")
            elif arg.default is not None:
                details.append(f"default {arg.default}")
            suffix = f" ({', '.join(details)})" if details else ""
            lines.append(f"    {arg.label}{suffix}" + (f"  {arg.help}" if arg.help else ""))
        return "\n".join(lines)

    @property
    def stdout(self) -> TextIO:
        return self.cli.stdout if self.cli else sys.stdout

    @property
    def stderr(self) -> TextIO:
        return self.cli.stderr if self.cli else sys.stderr


class CLI:
    def __init__(self, prog: str = "apbez", stdout: TextIO = None, stderr: TextIO = None):
        """
        :param prog: Program name used in usage messages.
        :param stdout: Stream for data output (defaults to ``sys.stdout`` at call time).
        :param stderr: Stream for diagnostics (defaults to ``sys.stderr`` at call time).
        """
        self.prog = prog
        self._commands: list[Command] = []
        self._stdout = stdout
        self._stderr = stderr
        self.result = None

    @property
    def stdout(self) -> TextIO:
        return self._stdout if self._stdout is not None else sys.stdout

    @property
    def stderr(self) -> TextIO:
        return self._stderr if self._stderr is not None else sys.stderr

    @annotated
    def command(self, func, aliases: list[str] = None, name: str = None, lowercase: bool = True):
        """
        A decorator that registers a function as a command, allowing it to be executed when matched by
        :func:`run`.

        If no name is specified the name of the command will match the name of the annotated function.

        Usage::

            cli = CLI()

            @cli.command
            def ping(command: Command):
                command.stdout.write("pong\\n")

            @cli.command(aliases=["hi"])
            def hello(name: str = Arg("--name", default="world")):
                print(f"Hello {name}!")

            cli.run(["ping"])                       # ping will be called
            cli.run(["hi", "--name", "Alice"])      # prints "Hello Alice!"

        Each parameter of a command either has the annotated type :class:`Command`, in which case its
        :class:`Command` instance is passed in, or constructs an :class:`Arg` as its default value. The matched
        token is converted with the `type` given to the :class:`Arg`, otherwise with the parameter's annotation.

        :param func: The function to register
        :param aliases: The aliases the command can also be invoked under
        :param name: The primary name of the command.
        :param lowercase: If the command name matches case-insensitively (defaults to True)
        :return: The function, unchanged
        """
        cmd_name: str = name if name else func.__name__
        cmd = Command(cmd_name, func, aliases=aliases, lowercase=lowercase, cli=self)
        func.__boundcommand__ = cmd
        self._commands.append(cmd)
        return func

    def find_command(self, identifier: Union[str, Callable]) -> Union[Command, None]:
        """
        Finds a command based on a given name or the function used to register the command.
        :param identifier: The name/alias of a command or a function.
        :return: The first matching command or `None` if no suitable command is found.
        """
        for command in self._commands:
            if isinstance(identifier, str) and command.matches(identifier):
                return command
            elif command.func is identifier:
                return command
        return None

    def usage(self) -> str:
        lines = [f"usage: {self.prog} <command> [flags]", "", "commands:"]
        width = max((len(command.name) for command in self._commands), default=0)
        for command in self._commands:
            lines.append(f"  {command.name.ljust(width)}  {command.description or ''}".rstrip())
        return "\n".join(lines)

    def run(self, argv: Sequence[str]) -> int:
        """
        Dispatches one invocation.

        :param argv: The command name followed by its flags.
        :return: The exit code, 0 on success, 1 when a computation failed and 2 for usage errors.
        """
        argv = list(argv)
        if not argv:
            print(self.usage(), file=self.stderr)
            return EXIT_USAGE
        if argv[0] in ("-h", "--help", "help"):
            print(self.usage(), file=self.stdout)
            return EXIT_OK

        command = self.find_command(argv[0])
        logger.debug("dispatching %s", argv)
        if command is None:
            print(f"{self.prog}: unknown command \"{argv[0]}\"\n{self.usage()}", file=self.stderr)
            return EXIT_USAGE
        if any(token in ("-h", "--help") for token in argv[1:]):
            print(command.usage(), file=self.stdout)
            return EXIT_OK

        try:
            self.result = command.execute(argv[1:])
        except cli_arg.ArgumentError as exc:
            print(f"{self.prog} {command.name}: error: {exc}\n{command.usage()}", file=self.stderr)
            return EXIT_USAGE
        except (NeedsRefinementError, InfeasibleSegmentError) as exc:
            print(f"{self.prog} {command.name}: {exc}", file=self.stderr)
            if exc.report is not None:
                print(f"feasibility: {exc.report.describe()}", file=self.stderr)
            return EXIT_FAILURE
        except ApbezError as exc:
            print(f"{self.prog} {command.name}: {exc}", file=self.stderr)
            return EXIT_FAILURE
        except OSError as exc:
            print(f"{self.prog} {command.name}: {exc}", file=self.stderr)
            return EXIT_FAILURE

        return EXIT_OK if self.result is None else int(self.result)

    def __iter__(self):
        return self._commands.__iter__()
