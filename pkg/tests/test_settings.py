import os
import tempfile
import unittest

from PySide6.QtCore import QSettings

from src.core.errors import DomainError
from src.core.settings import (
    DEFAULT_SWEEP_MAX,
    DEFAULT_WORKERS,
    KEY_CACHE_DIR,
    KEY_SWEEP_MAX,
    KEY_WORKERS,
    AppSettings,
    default_cache_dir,
)


class TestAppSettings(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.qsettings = QSettings(
            os.path.join(self.tmp.name, "kosweep.ini"), QSettings.IniFormat
        )

    def tearDown(self):
        self.tmp.cleanup()

    def settings(self, **environ):
        return AppSettings(self.qsettings, environ)

    def test_cache_dir_layers(self):
        self.assertEqual(self.settings().cache_dir(), default_cache_dir())
        self.qsettings.setValue(KEY_CACHE_DIR, "/stored")
        self.assertEqual(self.settings().cache_dir(), "/stored")
        env = self.settings(KOSWEEP_CACHE_DIR="/env")
        self.assertEqual(env.cache_dir(), "/env")
        self.assertEqual(env.cache_dir("/flag"), "/flag")

    def test_default_cache_dir(self):
        path = default_cache_dir()
        self.assertTrue(path.endswith("kosweep") or path.endswith(os.path.join(".kosweep", "cache")))

    def test_worker_layers(self):
        self.assertEqual(self.settings().workers(), DEFAULT_WORKERS)
        self.qsettings.setValue(KEY_WORKERS, 5)
        self.assertEqual(self.settings().workers(), 5)
        self.assertEqual(self.settings(KOSWEEP_WORKERS="4").workers(), 4)
        self.assertEqual(self.settings(KOSWEEP_WORKERS="4").workers(3), 3)

    def test_bad_worker_counts(self):
        with self.assertRaises(DomainError):
            self.settings(KOSWEEP_WORKERS="many").workers()
        with self.assertRaises(DomainError):
            self.settings().workers(0)

    def test_sweep_max(self):
        self.assertEqual(self.settings().sweep_max(), DEFAULT_SWEEP_MAX)
        self.qsettings.setValue(KEY_SWEEP_MAX, 40)
        self.assertEqual(self.settings().sweep_max(), 40)


if __name__ == "__main__":
    unittest.main()
