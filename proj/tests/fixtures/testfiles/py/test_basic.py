import unittest

from calculator import add


class TestAdd(unittest.TestCase):
    def test_add_small(self):
        self.assertEqual(add(1, 2), 3)

    def test_add_negative(self):
        self.assertEqual(add(-1, -2), -3)

    def test_add_zero(self):
        self.assertEqual(add(0, 0), 0)
