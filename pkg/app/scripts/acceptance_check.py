#!/usr/bin/env python3
"""
Acceptance run over the numerical identities
- Gaussian sum against its contour integral
- Kashaev invariant against the two-direction limit and its contour integral
- Large-k expansion, residue terms, volume growth and series coefficients
"""

import cmath
import math
import os
import sys
import time
from datetime import datetime
from fractions import Fraction

import numpy as np
from dotenv import load_dotenv, find_dotenv
load_dotenv(find_dotenv())

# Add the parent directory to the path
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from app.models import ContourSpec, TorusKnot
from app.utils.logger import get_logger

logger = get_logger("acceptance")
TREFOIL = TorusKnot(m=2, p=3)


def check_configuration():
    print("\n🔧 Configuration Check")
    print("-" * 40)
    try:
        from app.utils.config import validate_all_config, print_config_summary
        print_config_summary(validate_all_config())
        return True
    except Exception as e:
        print(f"❌ Configuration check failed: {e}")
        return False


def check_lemma1():
    print("\n🔍 Gaussian Sum Integral Check")
    print("-" * 40)
    try:
        from app.quadrature import verify_lemma1
        worst = 0.0
        for m, p in [(2, 3), (3, 5), (2, 7)]:
            knot = TorusKnot(m=m, p=p)
            for k in (3, 4, 7, 10):
                for h in (0.1, 0.05 + 0.2j):
                    worst = max(worst, verify_lemma1(knot, k, h).rel_diff)
        ok = worst <= 1e-8
        print(f"{'✅' if ok else '❌'} worst relative difference {worst:.2e}")
        return ok
    except Exception as e:
        print(f"❌ Gaussian sum integral check failed: {e}")
        return False


def check_kashaev_oracle():
    print("\n🔍 Kashaev Limit Check")
    print("-" * 40)
    try:
        from app.exact_sum import kashaev_exact, kashaev_limit_oracle
        worst = 0.0
        for knot in (TREFOIL, TorusKnot(m=3, p=4)):
            for k in range(1, 51):
                exact = kashaev_exact(knot, k)
                oracle = kashaev_limit_oracle(knot, k).value.to_complex()
                worst = max(worst, abs(exact - oracle) / max(abs(exact), 1.0))
        ok = worst <= 1e-6
        print(f"{'✅' if ok else '❌'} worst disagreement {worst:.2e}")
        return ok
    except Exception as e:
        print(f"❌ Kashaev limit check failed: {e}")
        return False


def check_lemma2():
    print("\n🔍 Kashaev Integral Check")
    print("-" * 40)
    try:
        from app.quadrature import verify_lemma2
        worst = 0.0
        for knot in (TREFOIL, TorusKnot(m=3, p=4)):
            for k in (5, 21, 51):
                for phi in (math.pi / 6, math.pi / 4, math.pi / 3):
                    check = verify_lemma2(knot, k, ContourSpec(phi=phi))
                    worst = max(worst, check.rel_diff)
        ok = worst <= 1e-7
        print(f"{'✅' if ok else '❌'} worst relative difference {worst:.2e}")
        return ok
    except Exception as e:
        print(f"❌ Kashaev integral check failed: {e}")
        return False


def check_expansion():
    print("\n🔍 Large-k Expansion Check")
    print("-" * 40)
    try:
        from app.asymptotics import expansion
        ks = [101, 201, 401, 801]
        reports = [expansion(TREFOIL, k, n_max=2) for k in ks]
        slope, _ = np.polyfit(np.log(ks), np.log([r.abs_error for r in reports]), 1)
        slope_ok = abs(slope + 2) <= 0.4
        final_ok = reports[-1].rel_error <= 1e-4
        print(f"{'✅' if slope_ok else '❌'} error slope {slope:.3f} (expected -2)")
        print(f"{'✅' if final_ok else '❌'} relative error at k=801: {reports[-1].rel_error:.2e}")
        return slope_ok and final_ok
    except Exception as e:
        print(f"❌ Expansion check failed: {e}")
        return False


def check_residue_terms():
    print("\n🔍 Residue Term Check")
    print("-" * 40)
    try:
        from app.asymptotics import prefactor, residue_term
        from app.quadrature import lemma2_integrand, lemma2_scale, residue_circle
        k = 100
        integrand = lemma2_integrand(TREFOIL, k)
        scale = 0.5 * lemma2_scale(TREFOIL, k) * prefactor(TREFOIL, k)
        ok = True
        for j in (1, 5):
            center = 1j * j / TREFOIL.mp
            radius = min(1 / (4 * TREFOIL.mp), 1 / (math.pi * TREFOIL.mp * k))
            contour = 2j * math.pi * residue_circle(integrand, center, radius)
            expected = residue_term(TREFOIL, k, j)
            rel = abs(scale * contour - expected) / abs(expected)
            print(f"{'✅' if rel <= 1e-8 else '❌'} j={j}: relative difference {rel:.2e}")
            ok = ok and rel <= 1e-8
        return ok
    except Exception as e:
        print(f"❌ Residue term check failed: {e}")
        return False


def check_volume_growth():
    print("\n🔍 Volume Growth Check")
    print("-" * 40)
    try:
        from app.asymptotics import volume_scan
        scan = volume_scan(TREFOIL, range(500, 2001, 50))
        early = volume_scan(TREFOIL, range(101, 500))
        limits = [row.log_abs_over_k for row in early.rows + scan.rows]
        monotone = all(b < a for a, b in zip(limits, limits[1:]))
        exponent_ok = abs(scan.fitted_exponent - 1.5) <= 0.05
        limit_ok = scan.fitted_limit <= 0.02
        print(f"{'✅' if limit_ok else '❌'} log|<L>|/k at k=2000: {scan.fitted_limit:.5f}")
        print(f"{'✅' if monotone else '❌'} decreasing beyond k=100")
        print(f"{'✅' if exponent_ok else '❌'} fitted exponent {scan.fitted_exponent:.4f}")
        return limit_ok and monotone and exponent_ok
    except Exception as e:
        print(f"❌ Volume growth check failed: {e}")
        return False


def check_series():
    print("\n🔍 Series Coefficient Check")
    print("-" * 40)
    try:
        from app.series import even_derivative, x_tau_series
        series = x_tau_series(TREFOIL, 8)
        ok = (
            [series[2], series[4], series[6]] == [Fraction(2), Fraction(-23, 3), Fraction(1681, 60)]
            and even_derivative(series, 1) == 4
            and even_derivative(series, 2) == -184
        )
        print(f"{'✅' if ok else '❌'} trefoil coefficients {series.fraction_strings()}")
        return ok
    except Exception as e:
        print(f"❌ Series check failed: {e}")
        return False


def check_property_suites():
    print("\n🔍 Property Suites")
    print("-" * 40)
    try:
        from app.exact_sum import gauss_sum
        from app.knot import alexander, torsion
        from app.quadrature import GaussianIntegrand, integrate_gaussian
        rng = np.random.default_rng(8)
        knots = [TREFOIL, TorusKnot(m=3, p=4), TorusKnot(m=2, p=7), TorusKnot(m=3, p=5)]

        swap = max(
            abs(gauss_sum(knot.swapped(), 6, h) - gauss_sum(knot, 6, h)) / abs(gauss_sum(knot, 6, h))
            for knot in knots for h in (0.1, 0.02 + 0.7j)
        )
        alexander_gap = 0.0
        for _ in range(20):
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            expected = 2 * cmath.sinh(z) / alexander(TREFOIL, cmath.exp(2 * z))
            alexander_gap = max(alexander_gap, abs(torsion(TREFOIL, z) - expected) / abs(expected))
        gaussian_gap = 0.0
        for _ in range(20):
            h = rng.uniform(0.2, 2.0) * cmath.exp(1j * rng.uniform(-2.5, 2.5))
            w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            integrand = GaussianIntegrand(
                c1=2 * w, c2=-1 / h,
                smooth=lambda z: np.ones_like(z), smooth_mp=lambda z: 1,
            )
            result, _ = integrate_gaussian(integrand, ContourSpec(phi=cmath.phase(h) / 2))
            expected = cmath.sqrt(math.pi * h) * cmath.exp(h * w * w)
            gaussian_gap = max(gaussian_gap, abs(result.value.to_complex() - expected) / abs(expected))
        vanishing = max(
            abs(gauss_sum(knot, k, 2j * math.pi / k)) / (2 * k * k * knot.mp)
            for knot in knots for k in range(2, 501)
        )

        results = [
            ("swap symmetry", swap, 1e-12),
            ("torsion-Alexander", alexander_gap, 1e-12),
            ("Gaussian identity", gaussian_gap, 1e-10),
            ("vanishing at 2 pi i/k", vanishing, 1e-12),
        ]
        for label, value, limit in results:
            print(f"{'✅' if value <= limit else '❌'} {label}: {value:.2e}")
        return all(value <= limit for _, value, limit in results)
    except Exception as e:
        print(f"❌ Property suites failed: {e}")
        return False


def main():
    print("Torus Knot Invariants - Acceptance Check")
    print("=" * 60)
    print(f"Timestamp: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
    # (name, check, time budget in seconds or None)
    checks = [
        ("Configuration", check_configuration, None),
        ("Gaussian Sum Integral", check_lemma1, 10),
        ("Kashaev Limit", check_kashaev_oracle, 30),
        ("Kashaev Integral", check_lemma2, 60),
        ("Large-k Expansion", check_expansion, 30),
        ("Residue Terms", check_residue_terms, None),
        ("Volume Growth", check_volume_growth, 120),
        ("Series Coefficients", check_series, None),
        ("Property Suites", check_property_suites, None),
    ]
    results = {}
    for name, fn, budget in checks:
        print(f"\nChecking {name}...")
        start = time.perf_counter()
        ok = fn()
        elapsed = time.perf_counter() - start
        in_time = budget is None or elapsed <= budget
        limit = f" (budget {budget} s)" if budget is not None else ""
        print(f"{'⏱️' if in_time else '❌'} {elapsed:.1f} s{limit}")
        logger.info(f"{name}: {'pass' if ok else 'fail'} in {elapsed:.1f} s")
        results[name] = ok and in_time
    print("\nAcceptance Summary")
    print("=" * 60)
    passed = sum(1 for r in results.values() if r)
    for name, result in results.items():
        status = "PASS" if result else "FAIL"
        symbol = "[+]" if result else "[X]"
        print(f"{symbol} {status}: {name}")
    print(f"\nOverall: {passed}/{len(results)} checks passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
