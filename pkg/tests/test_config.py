import os
import sys
import unittest
from unittest import mock

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.config_service import EngineConfig


class ConfigTests(unittest.TestCase):
    def test_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            config = EngineConfig.load()
        self.assertEqual(config.tol_geom, 1e-9)
        self.assertEqual(config.cusp_offset, 1e-3)
        self.assertEqual(config.bitangent_samples, 256)
        self.assertEqual(config.workers, 1)

    def test_environment_overrides(self):
        env = {'GRAPHIC_TOL_SIDE': '1e-5', 'GRAPHIC_WORKERS': '4', 'GRAPHIC_ANGLE_DIGITS': '8'}
        with mock.patch.dict(os.environ, env, clear=True):
            config = EngineConfig.load()
        self.assertEqual(config.tol_side, 1e-5)
        self.assertEqual(config.workers, 4)
        self.assertEqual(config.angle_digits, 8)


if __name__ == '__main__':
    unittest.main()
