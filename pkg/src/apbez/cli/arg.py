import inspect
from typing import Any, Callable, Sequence, Union

from apbez.cli import command as cmd


class ArgumentError(Exception):
    """
    Exception raised when an argument is not properly provided.
    """

    def __init__(self, message=None):
        """
        Initialize the ArgumentError.

        :param message: A message describing the error (optional).
        """
        super().__init__(message)


class CommandSignatureError(Exception):
    """
    Exception raised when a command has an invalid or incompatible signature.
    """

    def __init__(self, message=None):
        """
        Initialize the CommandSignatureError.

        :param message: A message describing the error (optional).
        """
        super().__init__(message)


class Tokens:
    """
    The argv tokens of one command invocation. Keeps track of which tokens arguments have consumed.
    """

    def __init__(self, argv: Sequence[str]):
        self.segments = [str(token) for token in argv]
        self.matched: set[int] = set()

    def match(self, arg: "Arg") -> Union[int, None]:
        names = [arg.name] + list(arg.aliases or [])
        for index, segment in enumerate(self.segments):
            if index not in self.matched and segment in names:
                self.matched.add(index)
                return index
        return None

    def take(self, index: int) -> str:
        self.matched.add(index)
        return self.segments[index]

    def unmatched(self) -> list[str]:
        return [segment for index, segment in enumerate(self.segments) if index not in self.matched]

    def __len__(self):
        return len(self.segments)

    def __getitem__(self, item):
        return self.segments[item]


def int_list(raw: str) -> tuple[int, ...]:
    """
    Converter for comma separated integers, e.g. ``4,8,16``.
    """
    try:
        return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ValueError(f"expected comma separated integers, got \"{raw}\"") from None


class Arg:
    """
    Represents a named option in a command function signature, e.g. ``--target circle``.
    """

    def __init__(self, name: str = None, /, aliases: list[str] = None, required: bool = False, default: Any = None,
                 type: "type" = None, choices: Sequence[Any] = None, help: str = None):
        """
        Represents a named option in a command function signature.

        :param name: The option name, e.g. ``--target`` (optional, derived from the parameter name when omitted).
        :param aliases: Additional aliases for the argument (optional).
        :param required: Whether the argument is required (default is False).
        :param default: Default value for the argument (default is None).
        :param type: The expected type of the argument (if None uses the parameter's annotated type, or str if not
            present).
        :param choices: The values the converted argument may take (optional).
        :param help: A one line description shown in the command usage (optional).
        """
        if name is not None and not isinstance(name, str):
            raise ValueError(f"name argument must be a str, instead got {_type_name(name)}")
        self.name = name
        self.aliases = aliases
        self.required = required
        self.default = default
        self.expected_type = type
        self.choices = tuple(choices) if choices is not None else None
        self.help = help

    @property
    def label(self) -> str:
        return self.name

    def parse(self, tokens: Tokens, expected_type: Union[type, Callable[[str], Any]]) -> Any:
        """
        Extracts and converts the value of `this` argument from the tokens.

        :param tokens: The :class:`Tokens` to parse.
        :param expected_type: The expected type of the return value, which **must contain a `from-string
            constructor`** **OR** a function that takes the extracted string value as an input and returns a value.
        :return: The parsed value of this argument.
        """
        index = tokens.match(self)
        if index is not None:
            if expected_type is bool:  # the presence of a flag alone means true
                return True
            if index + 1 < len(tokens) and index + 1 not in tokens.matched:
                return self._convert(tokens.take(index + 1), expected_type)
            raise ArgumentError(f"no value provided for argument \"{self.name}\"")
        if self.required:
            raise ArgumentError(f"expected named argument \"{self.name}\"")
        return self.default

    def _convert(self, raw: str, expected_type: Union[type, Callable[[str], Any]]) -> Any:
        try:
            value = expected_type(raw)
        except (TypeError, ValueError) as exc:
            raise ArgumentError(f"invalid value \"{raw}\" for argument \"{self.label}\": {exc}") from None
        if self.choices is not None and value not in self.choices:
            raise ArgumentError(f"invalid value \"{raw}\" for argument \"{self.label}\" "
                                f"(choose from {', '.join(map(str, self.choices))})")
        return value

    def __fill_info__(self, parameter_name: str):
        if self.name is None:
            self.name = "--" + parameter_name.replace("_", "-")


def _type_name(value) -> str:
    return type(value).__name__


class ArgMatcher:
    _empty_type_ = inspect.Parameter.empty

    def __init__(self, command: "cmd.Command"):
        self.func: Callable = command.func
        self.parameters = list(inspect.signature(self.func).parameters.values())
        self.command = command
        self.__validate_arguments__()

        self._bindings: list[tuple[inspect.Parameter, Union[Arg, None], Callable[[str], Any]]] = []
        for parameter in self.parameters:
            default = parameter.default
            expected_type = parameter.annotation
            if expected_type is ArgMatcher._empty_type_:
                expected_type = str

            # handle case where `Arg` class is used instead of `Arg` instance
            if default is Arg:
                default = Arg("--" + parameter.name.replace("_", "-"))
            if isinstance(default, Arg):
                default.__fill_info__(parameter.name)
                self._bindings.append((parameter, default, default.expected_type or expected_type))
            else:
                self._bindings.append((parameter, None, expected_type))

    def arguments(self) -> list[Arg]:
        """
        The declared arguments in signature order.
        """
        return [arg for _, arg, _ in self._bindings if arg is not None]

    def match_arguments(self, raw_input: Union[Sequence[str], Tokens]) -> list[Any]:
        """
        Parses the tokens of an invocation into a list of values by matching them to respective arguments.

        :param raw_input: The argv tokens to parse.
        :return: A list of parsed values, one per parameter.
        :raises ArgumentError: When an argument is missing or malformed, or a token is not recognized.
        """
        tokens = raw_input if isinstance(raw_input, Tokens) else Tokens(raw_input)

        arguments = []
        for parameter, arg, expected_type in self._bindings:
            if parameter.annotation is cmd.Command:
                arguments.append(self.command)
            elif arg is not None:
                arguments.append(arg.parse(tokens, expected_type))
            else:
                arguments.append(parameter.default)

        leftover = tokens.unmatched()
        if leftover:
            raise ArgumentError(f"unrecognized arguments: {' '.join(leftover)}")
        return arguments

    def __validate_arguments__(self):
        for parameter in self.parameters:
            if parameter.name == "self":
                raise CommandSignatureError(
                    f"command function cannot contain argument named \"self\" (function={self.command.name})")
            if parameter.kind is inspect.Parameter.VAR_KEYWORD:
                raise CommandSignatureError("kwargs not supported in command function signature")
            if parameter.kind is inspect.Parameter.VAR_POSITIONAL:
                raise CommandSignatureError("vargs not supported in command function signature")
            if parameter.default is ArgMatcher._empty_type_ and parameter.annotation is not cmd.Command:
                raise CommandSignatureError(
                    f"parameter \"{parameter.name}\" of {self.command.name} needs an Arg default or a Command "
                    f"annotation")
