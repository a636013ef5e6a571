import json

from src.core.config import get_settings
from src.kdv.errors import PropertyViolation
from src.kdv.properties import run_property_suites


def cmd_check(args) -> int:
    settings = get_settings()
    seed = settings.KDV_DEFAULT_SEED if args.seed is None else args.seed
    results = run_property_suites(seed)
    if not args.quiet:
        print(f"\nProperty suites (seed {seed})")
        for result in results:
            status = "pass" if result.passed else "FAIL"
            print(f"{result.name:>10}: {status} after {result.samples} samples, worst {result.worst:.3e} {result.detail}")

    failed = [r for r in results if not r.passed]
    if failed:
        first = failed[0]
        print(f"Reproducer ({first.name}, seed {seed}): {json.dumps(first.reproducer)}")
        raise PropertyViolation(f"Property suite '{first.name}' failed: {first.detail}",
                                seed=seed, reproducer=first.reproducer)
    return 0
