from pathlib import Path

from src.core.config import get_settings
from src.kdv.errors import PropertyViolation
from src.kdv.scenario import load_scenario
from src.kdv.studies import convergence_study
from src.kdv.utils.io import write_frame


def cmd_convergence(args) -> int:
    settings = get_settings()
    out_dir = Path(args.out or settings.KDV_OUTPUT_DIR)
    path = Path(args.scenario[0])
    scenario = load_scenario(path)
    table = convergence_study(scenario, args.levels, jobs=args.jobs, base_dir=path.parent)
    frame = table.frame.copy()
    if table.exact:
        frame["order"] = "exact"
    target = write_frame(frame, out_dir / f"{scenario.name}-convergence.csv")

    if not args.quiet:
        print(f"\nConvergence study for {scenario.name} ({args.levels} levels)")
        print(frame.to_string(index=False))
        print(f"  wrote {target}")
    if not table.monotone:
        raise PropertyViolation(f"Refinement differences are not monotone for {scenario.name}")
    return 0
