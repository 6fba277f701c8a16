import unittest

from apbez.config import LOG_LEVEL_VARIABLE, THREADS_VARIABLE, Settings
from apbez.errors import ConfigError


class SettingsTests(unittest.TestCase):
    def test_defaults(self):
        settings = Settings.from_env({})

        self.assertEqual(0, settings.threads)
        self.assertEqual("WARNING", settings.log_level)
        self.assertIsNone(settings.max_workers)
        self.assertEqual(10_000, settings.linf_samples)
        self.assertEqual(8, settings.max_refinement_depth)

    def test_parsing(self):
        settings = Settings.from_env({THREADS_VARIABLE: " 4 ", LOG_LEVEL_VARIABLE: "debug"})

        self.assertEqual(4, settings.threads)
        self.assertEqual(4, settings.max_workers)
        self.assertEqual("DEBUG", settings.log_level)

    def test_blank_values(self):
        settings = Settings.from_env({THREADS_VARIABLE: "", LOG_LEVEL_VARIABLE: "  "})
        self.assertEqual(Settings(), settings)

    def test_errors(self):
        self.assertRaises(ConfigError, Settings.from_env, {THREADS_VARIABLE: "four"})
        self.assertRaises(ConfigError, Settings.from_env, {THREADS_VARIABLE: "-1"})
        self.assertRaises(ValueError, Settings.from_env, {LOG_LEVEL_VARIABLE: "loud"})


if __name__ == '__main__':
    unittest.main()
