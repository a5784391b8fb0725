import sys
from pathlib import Path

# Ensure src is on sys.path
repo_root = Path(__file__).resolve().parents[1]
src_dir = repo_root / "src"
sys.path.insert(0, str(src_dir))

ok = True
errors = []

# Try importing the library and the CLI
try:
    from gerbe_holonomy.scenario import load_scenario
    from gerbe_holonomy.suites import run_all
except Exception as e:
    ok = False
    errors.append(f"Import gerbe_holonomy failed: {e}")

try:
    from gerbe_holonomy.cli.main import main  # noqa: F401
except Exception as e:
    ok = False
    errors.append(f"Import CLI failed: {e}")

# Load every bundled scenario
summary = {}
if ok:
    for path in sorted((repo_root / "scenarios").glob("*.json")):
        try:
            scenario = load_scenario(path)
            summary[path.stem] = len(scenario.cochains)
        except Exception as e:
            ok = False
            errors.append(f"Scenario {path.name} failed to load: {e}")

# Run the acceptance suites with small sample counts
if ok:
    try:
        report = run_all(seed=0, quick=True)
        summary["checks"] = len(report.checks)
        for check in report.failures:
            ok = False
            errors.append(f"{check.name}: residual {check.residual:g} > {check.tolerance:g} ({check.witness})")
    except Exception as e:
        ok = False
        errors.append(f"Selftest exception: {e}")

if ok:
    print("SMOKE_CHECK_OK")
    print(summary)
    sys.exit(0)
else:
    print("SMOKE_CHECK_FAIL")
    for err in errors:
        print("- ", err)
    sys.exit(1)
