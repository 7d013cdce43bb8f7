"""
Validation script to check the installation is working
Run this after initial setup to ensure everything is configured properly
"""
import sys
import tempfile
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))


def test_imports():
    """Verify all critical imports work"""
    print("1️⃣  Testing imports...")

    try:
        import click
        import numpy as np
        import pandas as pd
        import pydantic
        import sympy
        import sqlalchemy
        import tqdm
        from sigcy.config import get_config
        from sigcy.db import CountCache
        from sigcy.report import RunReport
        from sigcy.runner import GROUPS
        from sigcy.utils.parallel import process_concurrently

        print(f"   numpy {np.__version__}, pandas {pd.__version__}, sympy {sympy.__version__}")
        print("   ✅ All imports successful")
        return True
    except ImportError as e:
        print(f"   ❌ Import failed: {e}")
        return False


def test_cache():
    """Verify the count cache stores and returns a row"""
    print("\n2️⃣  Testing count cache...")

    try:
        from sigcy.db import CountCache

        with tempfile.TemporaryDirectory() as tmp:
            cache = CountCache.from_url(f"sqlite:///{tmp}/counts.db")
            cache.put("Y_CY", 3, 1, affine=89, projective=44, elapsed_ms=1)
            record = cache.get("Y_CY", 3, 1)
            cache.db.dispose()

        if record is not None and record.projective_count == 44:
            print("   ✅ Write and read operations working")
            return True
        print("   ❌ Cached count not returned")
        return False

    except Exception as e:
        print(f"   ❌ Cache test failed: {e}")
        return False


def test_configuration():
    """Verify configuration is loaded"""
    print("\n3️⃣  Testing configuration...")

    try:
        from sigcy.config import get_config

        config = get_config()

        print(f"   Database URL: {config.db_url}")
        print(f"   Log level: {config.log_level}")
        print(f"   Modularity sweep: p <= {config.counting.pmax}, {config.counting.jobs} jobs")
        print(f"   Node primes: {config.nodes.primes}")
        print(f"   Deform primes: {config.deform.primes} (exact: {config.deform.exact})")

        print("   ✅ Configuration loaded successfully")
        return True

    except Exception as e:
        print(f"   ❌ Configuration test failed: {e}")
        return False


def test_exact_arithmetic():
    """Small counts and a cusp form coefficient"""
    print("\n4️⃣  Testing exact arithmetic...")

    try:
        from sigcy.arith.counting import count_weighted, modularity_formula
        from sigcy.arith.thetamod import ap_table

        a_3 = ap_table(3)[3]
        count = count_weighted("Y_CY", 3).projective
        if a_3 == -4 and count == modularity_formula(3, a_3) == 44:
            print(f"   ✅ #Y_CY(F_3) = {count}, a_3 = {a_3}")
            return True
        print(f"   ❌ Unexpected values: #Y_CY(F_3) = {count}, a_3 = {a_3}")
        return False

    except Exception as e:
        print(f"   ❌ Arithmetic test failed: {e}")
        return False


def main():
    """Run all validation tests"""
    print("🔍 sigcy - System Validation")
    print("=" * 60)

    tests = [
        test_imports,
        test_cache,
        test_configuration,
        test_exact_arithmetic,
    ]

    results = []
    for test in tests:
        results.append(test())

    print("\n" + "=" * 60)
    print("📊 Validation Summary")
    print("=" * 60)

    passed = sum(results)
    total = len(results)

    print(f"Tests passed: {passed}/{total}")

    if all(results):
        print("\n🎉 All tests passed! System is ready.")
        print("\nNext steps:")
        print("  1. Run: python scripts/quick_test.py")
        print("  2. Run: sigcy run-all --json reports/run.json")
        return 0
    else:
        print("\n⚠️  Some tests failed. Please fix the issues above.")
        return 1


if __name__ == "__main__":
    sys.exit(main())
