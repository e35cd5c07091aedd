"""
Command Dispatch
simulate / verify / sweep subcommands, tolerance overrides and exit-code mapping
"""

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from ..algebra.liealg import BlockPartition, partitions_of
from ..completeness import (
    CompletenessVerdict, Verdict, verify_cross_commutation, verify_det_identity,
    verify_involution, verify_lax, verify_lemma1, verify_reduction, verify_restriction,
    verify_theorem1, verify_theorem2, verify_theorem3, verify_theorem4
)
from ..completeness.report import effective_tolerances
from ..core.config import config
from ..core.errors import ConfigValidationError, LabError
from ..core.logger import logger, set_level
from ..dynamics.flows import (
    Trajectory, integrate, noether_drift, operator_field, relative_drift, spectrum_drift
)
from ..dynamics.sectional import SectionalOperator, noether_applicable
from ..invariants.families import casimir_family, manakov_family
from .output import ensure_dir, write_csv, write_json
from .run_config import RunConfig, load_run_config

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IO = 2
EXIT_VALIDATION = 3

Runner = Callable[[RunConfig, Optional[List[int]], int], CompletenessVerdict]

RUNNERS: Dict[str, Runner] = {
    'involution': lambda run, seeds, jobs: verify_involution(
        run.n, run.block_partition(), seeds, run.spectral_params(), jobs),
    'theorem1': lambda run, seeds, jobs: verify_theorem1(
        run.n, run.block_partition(), seeds, run.spectral_params(), jobs),
    'theorem2': lambda run, seeds, jobs: verify_theorem2(
        run.n, run.block_partition(), seeds, run.spectral_params(), jobs),
    'theorem3': lambda run, seeds, jobs: verify_theorem3(
        run.n, run.block_partition(), seeds, run.spectral_params(), jobs),
    'theorem4': lambda run, seeds, jobs: verify_theorem4(
        run.n, run.block_partition(), min(run.l_split or 1, run.block_partition().r),
        seeds, run.spectral_params(), jobs),
    'lemma1': lambda run, seeds, jobs: verify_lemma1(run.n, seeds, run.spectral_params(), jobs),
    'reduction': lambda run, seeds, jobs: verify_reduction(run.n, run.block_partition(), seeds, jobs),
    'det-identity': lambda run, seeds, jobs: verify_det_identity(run.n, seeds, jobs),
    'cross-commute': lambda run, seeds, jobs: verify_cross_commutation(
        run.n, run.block_partition(), seeds, run.spectral_params(), jobs),
    'lax': lambda run, seeds, jobs: verify_lax(
        run.n, run.block_partition(), seeds, run.spectral_params(), jobs),
    'restriction': lambda run, seeds, jobs: verify_restriction(
        run.n, run.block_partition(), seeds, run.spectral_params(), jobs),
}


def conservation_report(traj: Trajectory, op: SectionalOperator) -> Dict:
    """Relative drifts of every conserved quantity along a trajectory"""
    params = op.params
    tols = config.tolerances
    lambdas = config.sampling.lax_lambdas
    states = traj.states

    integrals = {m.tag: relative_drift([m.evaluate(M) for M in states])
                 for m in manakov_family(params)}
    casimirs = {m.tag: relative_drift([m.evaluate(M) for M in states])
                for m in casimir_family(traj.n)}
    energy = relative_drift([op.hamiltonian(M) for M in states])
    spectrum = spectrum_drift(traj, params, lambdas)
    noether = noether_drift(traj, params.partition) if noether_applicable(op) else None

    worst = max([energy, spectrum] + list(integrals.values()) + list(casimirs.values()))
    passed = worst <= tols.conservation and (noether is None or noether <= tols.noether)
    return {
        'integrals': integrals,
        'casimirs': casimirs,
        'energy': energy,
        'lax_spectrum': spectrum,
        'lax_lambdas': list(lambdas),
        'noether': noether,
        'max_drift': worst,
        'passed': passed,
    }


def cmd_simulate(run: RunConfig, out: Path, seeds: Optional[List[int]] = None,
                 jobs: int = 1) -> int:
    """Integrate the configured flow, write the trajectory CSV and the conservation report

    Returns:
        EXIT_OK when every drift is within tolerance, EXIT_FAIL otherwise
    """
    op = run.driving_operator()
    M0 = run.initial_state()
    cfg = run.integrator_config()
    logger.info(f"Simulating {op.kind.value} flow on so({run.n}), partition {op.partition}, "
                f"{cfg.method.value} h={cfg.step} T={cfg.horizon}")

    traj = integrate(operator_field(op), M0, cfg,
                     meta={'operator': op.kind.value, 'partition': str(op.partition)})
    write_csv(out / run.output.trajectory, traj.csv_header(), traj.csv_rows())

    report = conservation_report(traj, op)
    payload = {
        'command': 'simulate',
        'n': run.n,
        'partition': list(op.partition.parts),
        'operator': op.kind.value,
        'metric': None if run.metric is None else run.metric.kind,
        'integrator': dict(traj.meta),
        'samples': len(traj),
        'drifts': report,
        'passed': report['passed'],
        'tolerances': effective_tolerances(),
    }
    write_json(out / run.output.conservation, payload)
    logger.info(f"max drift {report['max_drift']:.3e}, noether {report['noether']}: "
                f"{'PASS' if report['passed'] else 'FAIL'}")
    return EXIT_OK if report['passed'] else EXIT_FAIL


def cmd_verify(run: RunConfig, out: Path, seeds: Optional[List[int]] = None,
               jobs: int = 1) -> int:
    """Run every configured target and write the verdict JSON

    Returns:
        EXIT_OK unless some verdict is FAIL
    """
    if not run.targets:
        raise ConfigValidationError("targets: verify needs at least one target")
    seeds = seeds if seeds is not None else run.seeds

    verdicts = [RUNNERS[target](run, seeds, jobs) for target in run.targets]
    passed = all(v.verdict != Verdict.FAIL for v in verdicts)
    write_json(out / run.output.verdicts, {
        'command': 'verify',
        'n': run.n,
        'partition': list(run.block_partition().parts),
        'verdicts': [v.to_record() for v in verdicts],
        'passed': passed,
        'tolerances': effective_tolerances(),
        'sampling': config.as_dict()['sampling'],
    })
    return EXIT_OK if passed else EXIT_FAIL


SWEEP_HEADER = ["partition", "target", "verdict", "points", "passed_points", "non_generic",
                "ddim", "dind", "lhs", "rhs"]


def sweep_partitions(run: RunConfig) -> List[BlockPartition]:
    """Partitions to sweep: the listed subset or every partition of n"""
    cap = config.sampling.sweep_cap
    if run.sweep is not None and run.sweep.cap is not None:
        cap = run.sweep.cap
    if run.n > cap:
        raise ConfigValidationError(f"n: sweep over n={run.n} exceeds the cap {cap}")

    if run.sweep is None or run.sweep.partitions is None:
        return partitions_of(run.n)
    if not run.sweep.partitions:
        raise ConfigValidationError("sweep.partitions: empty partition list")
    result = []
    for idx, parts in enumerate(run.sweep.partitions):
        if not parts or any(k < 1 for k in parts) or sum(parts) != run.n:
            raise ConfigValidationError(f"sweep.partitions.{idx}: {parts} is not a partition of {run.n}")
        result.append(BlockPartition(tuple(parts)))
    return result


def _sweep_row(partition: BlockPartition, verdict: CompletenessVerdict) -> List:
    generic = [p for p in verdict.per_point if p.generic]
    first = generic[0] if generic else None
    ranks = first.ranks if first else {}
    return [
        str(partition), verdict.theorem, verdict.verdict.value, len(verdict.per_point),
        verdict.passed_points, verdict.non_generic_points,
        ranks.get('ddim', ''), ranks.get('dind', ''),
        '' if first is None or first.lhs is None else first.lhs,
        '' if first is None or first.rhs is None else first.rhs,
    ]


def cmd_sweep(run: RunConfig, out: Path, seeds: Optional[List[int]] = None,
              jobs: int = 1) -> int:
    """Run the targets over partitions of n and write one CSV row per (partition, target)"""
    if not run.targets:
        raise ConfigValidationError("targets: sweep needs at least one target")
    partitions = sweep_partitions(run)
    seeds = seeds if seeds is not None else run.seeds

    rows = []
    failed = 0
    for partition in partitions:
        local = run.model_copy(update={'partition': list(partition.parts),
                                       'alphas': None, 'betas': None})
        for target in run.targets:
            verdict = RUNNERS[target](local, seeds, jobs)
            failed += verdict.verdict == Verdict.FAIL
            rows.append(_sweep_row(partition, verdict))

    write_csv(out / run.output.sweep, SWEEP_HEADER, rows)
    logger.info(f"Sweep over {len(partitions)} partitions of {run.n}: {failed} failing rows")
    return EXIT_OK if failed == 0 else EXIT_FAIL


COMMANDS = {
    'simulate': cmd_simulate,
    'verify': cmd_verify,
    'sweep': cmd_sweep,
}


class LabArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors map to the validation exit code"""

    def error(self, message):
        raise ConfigValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = LabArgumentParser(prog="manakov-lab",
                               description="Numerical lab for Manakov-type flows on so(n)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        p.add_argument("--config", required=True, help="Run configuration (JSON or YAML)")
        p.add_argument("--out", default=None, help="Output directory")
        p.add_argument("--seeds", default=None, help="Comma-separated point seeds")
        p.add_argument("--tol-override", action="append", default=[], metavar="KEY=VALUE",
                       help="Replace one tolerance (repeatable)")
        p.add_argument("--jobs", type=int, default=1, help="Worker threads for sampled points")
        p.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    return parser


def parse_seeds(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ConfigValidationError(f"--seeds: expected comma-separated integers, got '{text}'")
    if not seeds:
        raise ConfigValidationError("--seeds: no seeds given")
    return seeds


def apply_tolerances(from_config: Dict[str, float], overrides: Sequence[str]):
    """Replace config.tolerances with the run's and the command line's overrides"""
    tolerances = config.tolerances
    pairs = list(from_config.items())
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigValidationError(f"--tol-override: expected key=value, got '{item}'")
        pairs.append((key.strip(), value.strip()))
    for key, value in pairs:
        try:
            tolerances = tolerances.override(key, value)
        except KeyError:
            raise ConfigValidationError(f"--tol-override: unknown tolerance '{key}'")
        except ValueError:
            raise ConfigValidationError(f"--tol-override: bad value '{value}' for '{key}'")
    config.tolerances = tolerances


def _fail(code: int, message: str) -> int:
    logger.error(message)
    print(f"error: {message}", file=sys.stderr)
    return code


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, execute a command and map the outcome to an exit code"""
    saved = config.tolerances
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            set_level(args.log_level)
        if args.jobs < 1:
            raise ConfigValidationError(f"--jobs: must be at least 1, got {args.jobs}")
        run_cfg = load_run_config(args.config)
        apply_tolerances(run_cfg.tolerances, args.tol_override)
        seeds = parse_seeds(args.seeds)
        out = ensure_dir(args.out or run_cfg.output.dir or config.paths.runs_dir)
        return COMMANDS[args.command](run_cfg, out, seeds=seeds, jobs=args.jobs)
    except ConfigValidationError as e:
        return _fail(EXIT_VALIDATION, f"invalid configuration: {e}")
    except OSError as e:
        return _fail(EXIT_IO, f"I/O failure: {e}")
    except LabError as e:
        return _fail(EXIT_FAIL, f"{type(e).__name__}: {e}")
    finally:
        config.tolerances = saved
