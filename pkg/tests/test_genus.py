import json
import os
import random
import tempfile
import unittest
from fractions import Fraction

from src.core.errors import DomainError
from src.core.genus import (
    BUNDLE_CERTIFICATES,
    CERTIFICATES,
    PontNumbers,
    ahat_number,
    builtin,
    intersection_form,
    k3_bundle_certificate,
    ko_ahat,
    load_manifold,
    plumbing_bundle_certificate,
    rational_surjectivity_coefficient,
    signature_number,
)
from src.core.ko import KOElement
from src.core.lattice import evaluate, signature
from src.core.series import elementary


def random_numbers(rng, dimension):
    if dimension == 4:
        return PontNumbers(4, {(1,): rng.randint(-500, 500)})
    return PontNumbers(
        8, {(1, 1): rng.randint(-5000, 5000), (2,): rng.randint(-5000, 5000)}
    )


class TestCertificates(unittest.TestCase):
    def test_k3(self):
        k3 = builtin("k3")
        self.assertEqual(ahat_number(k3), 2)
        self.assertEqual(signature_number(k3), -16)
        self.assertEqual(ko_ahat(k3), KOElement(4, 1))
        self.assertEqual(ko_ahat(k3).to_text(), "κ")

    def test_plumbing(self):
        m = builtin("plumbing8")
        self.assertEqual(m.value((2,)), -1440)
        self.assertEqual(m.value((1, 1)), 0)
        self.assertEqual(ahat_number(m), 1)
        self.assertEqual(signature_number(m), -224)
        self.assertEqual(ko_ahat(m).to_text(), "β")

    def test_signatures_match_intersection_forms(self):
        for name in CERTIFICATES:
            self.assertEqual(
                signature(intersection_form(name)), signature_number(builtin(name)), name
            )
        self.assertEqual(intersection_form("plumbing8").rank, 224)

    def test_zero_numbers(self):
        zero = PontNumbers(4)
        self.assertEqual(ahat_number(zero), 0)
        self.assertEqual(signature_number(zero), 0)
        self.assertTrue(ko_ahat(zero).is_zero())

    def test_unknown_builtin(self):
        with self.assertRaises(DomainError):
            builtin("cp2")


class TestEvaluation(unittest.TestCase):
    def test_matches_low_degree_formulas(self):
        rng = random.Random(20240101)
        for _ in range(100):
            x4 = random_numbers(rng, 4)
            p1 = x4.value((1,))
            self.assertEqual(ahat_number(x4), Fraction(-p1, 24))
            self.assertEqual(signature_number(x4), Fraction(p1, 3))

            x8 = random_numbers(rng, 8)
            p1sq, p2 = x8.value((1, 1)), x8.value((2,))
            self.assertEqual(ahat_number(x8), Fraction(-4 * p2 + 7 * p1sq, 5760))
            self.assertEqual(signature_number(x8), Fraction(7 * p2 - p1sq, 45))

    def test_linearity(self):
        rng = random.Random(7)
        for _ in range(20):
            a, b = random_numbers(rng, 8), random_numbers(rng, 8)
            c = rng.randint(-9, 9)
            combined = a + b.scale(c)
            self.assertEqual(
                signature_number(combined), signature_number(a) + c * signature_number(b)
            )
            self.assertEqual(ahat_number(combined), ahat_number(a) + c * ahat_number(b))

    def test_not_spin(self):
        odd_p1 = PontNumbers(4, {(1,): 3})
        with self.assertRaisesRegex(DomainError, "not a spin certificate"):
            ko_ahat(odd_p1)
        with self.assertRaisesRegex(DomainError, "not a spin certificate"):
            ko_ahat(PontNumbers(4, {(1,): -24}))

    def test_dimension_checks(self):
        with self.assertRaises(DomainError):
            PontNumbers(6)
        with self.assertRaises(DomainError):
            PontNumbers(8, {(1,): 1})

    def test_twelve_dimensional(self):
        x = PontNumbers(12, {(3,): 945})
        self.assertEqual(signature_number(x), 62)


class TestManifoldFiles(unittest.TestCase):
    def test_load_manifold(self):
        description = {
            "name": "plumbing",
            "dimension": 8,
            "pontrjagin": {"p1^2": 0, "p2": -1440},
        }
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "m.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump(description, f)
            x = load_manifold(path)
        self.assertEqual(x, PontNumbers(8, {(2,): -1440}, "plumbing"))
        self.assertEqual(x.to_dict()["pontrjagin"], {"p2": "-1440"})

    def test_bad_descriptions(self):
        with self.assertRaises(DomainError):
            PontNumbers.from_dict({"pontrjagin": {"p1": 1}})
        with self.assertRaises(DomainError):
            PontNumbers.from_dict({"dimension": 4, "pontrjagin": {"x1": 1}})
        with self.assertRaises(DomainError):
            load_manifold("/nonexistent/manifold.json")

    def test_values_must_be_integers(self):
        for bad in (-47.9, "1/2", "p1", True, None, float("inf")):
            with self.assertRaisesRegex(DomainError, "must be an integer", msg=repr(bad)):
                PontNumbers.from_dict({"dimension": 4, "pontrjagin": {"p1": bad}})
        with self.assertRaisesRegex(DomainError, "must be an integer"):
            PontNumbers.from_dict({"dimension": 4.5, "pontrjagin": {}})

    def test_integral_numbers_and_strings_accepted(self):
        x = PontNumbers.from_dict({"dimension": 4.0, "pontrjagin": {"p1": "-48"}})
        self.assertEqual(x, PontNumbers(4, {(1,): -48}))
        y = PontNumbers.from_dict({"dimension": 4, "pontrjagin": {"p1": -48.0}})
        self.assertEqual(y, x)


class TestBundleCertificates(unittest.TestCase):
    def test_k3(self):
        cert = k3_bundle_certificate()
        self.assertTrue(cert.holds)
        self.assertEqual(cert.form_value, -12)
        self.assertEqual(cert.bundle_value, -48)
        self.assertEqual(evaluate(intersection_form("k3"), cert.vector), -12)

    def test_plumbing(self):
        cert = plumbing_bundle_certificate()
        self.assertTrue(cert.holds)
        self.assertEqual(cert.vector, (2, -30))
        self.assertEqual(cert.form_value, -120)
        self.assertEqual(cert.to_dict()["bundle_value"], "-1440")

    def test_registry(self):
        self.assertEqual(sorted(BUNDLE_CERTIFICATES), sorted(CERTIFICATES))


class TestRationalSurjectivity(unittest.TestCase):
    def test_coefficient_is_sinh_coefficient(self):
        s = elementary("x_over_sinh", 40)
        for m in range(1, 21):
            c = rational_surjectivity_coefficient(m)
            self.assertNotEqual(c, 0)
            self.assertEqual(c, -s[2 * m])

    def test_first_values(self):
        self.assertEqual(rational_surjectivity_coefficient(1), Fraction(1, 6))
        self.assertEqual(rational_surjectivity_coefficient(2), Fraction(-7, 360))
        with self.assertRaises(DomainError):
            rational_surjectivity_coefficient(0)


if __name__ == "__main__":
    unittest.main()
