import unittest

from ledger import Ledger


class LedgerTest(unittest.TestCase):
    def setUp(self):
        self.book = Ledger()

    def test_credit(self):
        self.book.credit("a", 5)
        self.assertEqual(self.book.balance("a"), 5)

    def test_debit(self):
        self.book.credit("a", 5)
        self.book.debit("a", 2)
        self.assertEqual(self.book.balance("a"), 3)


if __name__ == "__main__":
    unittest.main()
