"""
Quick test script - run the fast checks on small primes
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from sigcy.arith.counting import count_weighted, count_X, verify_model_agreement
from sigcy.arith.thetamod import ap_table, verify_theta
from sigcy.geometry.arrangement import verify_arrangement
from sigcy.geometry.varieties import catalog, verify_quotient_map
from sigcy.logging_conf import setup_logging

logger = setup_logging()


def main():
    # Small primes only; the full sweep is `sigcy run-all`
    test_primes = [3, 5, 7]
    rows = []

    logger.info("Checking catalog equations...")
    rows += [v.check_homogeneity() for v in catalog().values()]
    rows += verify_quotient_map()

    logger.info(f"Counting points over {test_primes}")
    a = ap_table(max(test_primes))
    for p in test_primes:
        x = count_X(p)
        y = count_weighted("Y_CY", p)
        logger.info(f"p={p}: #X={x.projective}  #Y_CY={y.projective}  a_p={a[p]}")
    rows += verify_model_agreement(test_primes)

    logger.info("Theta identities at three random points...")
    rows += verify_theta(samples=3, gamma_samples=3)

    logger.info("Arrangement without the order sweep...")
    arrangement_rows, _, _ = verify_arrangement(sweep=False)
    rows += arrangement_rows

    failed = [row.check for row in rows if row.failed]
    if failed:
        logger.error(f"\n❌ {len(failed)} failed: {', '.join(failed)}")
        return 1
    logger.info(f"\n✅ Test complete! {len(rows)} checks, none failed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
