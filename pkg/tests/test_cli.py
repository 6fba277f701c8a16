import io
import unittest

from apbez.area import Classification, FeasibilityReport
from apbez.cli import CLI, Arg, Command, CommandSignatureError
from apbez.errors import DomainError, InfeasibleSegmentError


class CLITestCase(unittest.TestCase):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.cli = None

    def setUp(self):
        self.out = io.StringIO()
        self.err = io.StringIO()
        self.cli = CLI(prog="test", stdout=self.out, stderr=self.err)

    def test_command_creation(self):
        @self.cli.command
        def ping(command: Command):
            command.stdout.write("pong\n")

        self.assertEqual(0, self.cli.run(["ping"]))
        self.assertEqual("pong\n", self.out.getvalue())

    def test_aliases_and_case(self):
        @self.cli.command(aliases=["hi"], name="hello")
        def greet(command: Command, name: str = Arg("--name", default="world")):
            command.stdout.write(f"Hello {name}!\n")

        self.assertEqual(0, self.cli.run(["hi", "--name", "Alice"]))
        self.assertEqual(0, self.cli.run(["HELLO"]))
        self.assertEqual("Hello Alice!\nHello world!\n", self.out.getvalue())
        self.assertIs(self.cli.find_command("hello"), self.cli.find_command(greet))

    def test_case_sensitive(self):
        @self.cli.command(lowercase=False)
        def exact():
            return 0

        self.assertIsNotNone(self.cli.find_command("exact"))
        self.assertIsNone(self.cli.find_command("EXACT"))

    def test_typed_arguments(self):
        @self.cli.command
        def add(a: float = Arg("--a", required=True), b: int = Arg("--b", default=1)):
            self.cli.stdout.write(f"{a + b}\n")

        self.assertEqual(0, self.cli.run(["add", "--a", "0.5", "--b", "2"]))
        self.assertEqual("2.5\n", self.out.getvalue())

    def test_exit_codes(self):
        @self.cli.command
        def fail():
            raise DomainError("bad interval")

        @self.cli.command
        def code():
            return 3

        self.assertEqual(2, self.cli.run([]))
        self.assertEqual(2, self.cli.run(["missing"]))
        self.assertIn("unknown command", self.err.getvalue())
        self.assertEqual(1, self.cli.run(["fail"]))
        self.assertIn("bad interval", self.err.getvalue())
        self.assertEqual(3, self.cli.run(["code"]))
        self.assertEqual(0, self.cli.run(["--help"]))
        self.assertIn("fail", self.out.getvalue())

    def test_feasibility_report_is_printed(self):
        report = FeasibilityReport(0.0, 1.0, 1.0, Classification.ALL_NON_NEGATIVE, False, -0.5)

        @self.cli.command
        def refine():
            raise InfeasibleSegmentError("no segment", 0.0, 0.5, report)

        self.assertEqual(1, self.cli.run(["refine"]))
        self.assertIn("feasibility: ", self.err.getvalue())
        self.assertIn("AllNonNegative", self.err.getvalue())

    def test_argument_errors(self):
        @self.cli.command
        def needs(value: int = Arg("--value", required=True)):
            return 0

        self.assertEqual(2, self.cli.run(["needs"]))
        self.assertEqual(2, self.cli.run(["needs", "--value", "x"]))
        self.assertEqual(2, self.cli.run(["needs", "--value", "1", "--other"]))
        self.assertIn("unrecognized arguments: --other", self.err.getvalue())
        self.assertIn("usage: test needs", self.err.getvalue())

    def test_command_help(self):
        @self.cli.command
        def show(target: str = Arg("--target", choices=("a", "b"), help="what to show")):
            return 0

        self.assertEqual(0, self.cli.run(["show", "--help"]))
        self.assertIn("--target ({a|b})  what to show", self.out.getvalue())

    def test_invalid_signatures(self):
        def with_self(self):
            return 0

        def with_kwargs(**kwargs):
            return 0

        def with_varargs(*args):
            return 0

        def bare(value):
            return value

        for func in (with_self, with_kwargs, with_varargs, bare):
            self.assertRaises(CommandSignatureError, self.cli.command, func)

    def test_iteration(self):
        @self.cli.command
        def one():
            return 0

        @self.cli.command
        def two():
            return 0

        self.assertEqual(["one", "two"], [command.name for command in self.cli])


if __name__ == '__main__':
    unittest.main()
