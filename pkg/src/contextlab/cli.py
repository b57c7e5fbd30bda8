"""
Command-line surface of contextlab.

    contextlab [--output json|text] [--verbose] <group> <command> ...

Exit codes: 0 when the analysis completed and every asserted property
holds, 2 when it completed with a finding (imperfect graph, infeasible
decomposition, violated inequality), 1 for usage and parse errors.
Reports go to stdout, diagnostics to stderr.
"""

import argparse
import logging
import os
import sys
from typing import Callable, Dict, Tuple

from dotenv import load_dotenv

from contextlab import __version__
from contextlab.distributions import (
    clique_marginal_residual, construct_joint_distribution, decompose_into_stable_sets,
    fvp_membership, subset_joint_from_marginals, verify_prop2_conditions
)
from contextlab.exceptions import (
    GraphValidationError, InfeasibleMarginalsError, InvalidArgumentError,
    NumericalDegeneracyError, ParseError, ResourceLimitError
)
from contextlab.formats import (
    check_payload, decomposition_payload, dump_report, entropic_payload, graph_payload,
    harness_payload, joint_payload, kcbs_payload, labels, marginals_payload,
    model_payload, monogamy_payload, parse_graph_file, parse_joint_file,
    parse_marginals_file, parse_model_file, render_text
)
from contextlab.graph_core import (
    alpha_closed_form, build_cycle, build_glued_cycles, contextuality_witness,
    decompose_glued_into_even_cycles, enumerate_maximal_cliques, independence_number,
    is_perfect, theta_closed_form
)
from contextlab.inequalities import (
    DEFAULT_STREAMS, antihole_kcbs_value, entropic_chain_value, glued_witness, kcbs_value,
    monogamy_random_harness, verify_monogamy
)
from contextlab.models import (
    FEASIBILITY_TOL, ORTHOGONALITY_TOL, Command, GluedCycleSpec, Report, WitnessKind
)
from contextlab.quantum import (
    COUNTEREXAMPLE_SPEC, PENTAGON_ALPHA, build_counterexample,
    counterexample_glued_marginals, model_marginals, umbrella_model, validate_model
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FINDING = 2

CLI_ERRORS = (
    InvalidArgumentError, GraphValidationError, ResourceLimitError,
    InfeasibleMarginalsError, NumericalDegeneracyError, ParseError
)

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message):
        raise InvalidArgumentError(message)


def _vertex_list(text):
    """Comma-separated 1-based labels to a tuple (still 1-based)."""
    try:
        values = tuple(int(token) for token in text.split(','))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid vertex list {text!r}") from e
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"vertex labels start at 1: {text!r}")
    return values


def _vertices(flag):
    return None if flag is None else tuple(v - 1 for v in flag)


def _add_graph_commands(groups):
    graph = groups.add_parser('graph', help='commutation-graph combinatorics')
    commands = graph.add_subparsers(dest='command', required=True)

    perfect = commands.add_parser('perfect', help='perfectness with hole/antihole witness')
    perfect.add_argument('graph', help='graph file (JSON or edge list)')

    alpha = commands.add_parser('alpha', help='independence number')
    alpha.add_argument('graph', help='graph file (JSON or edge list)')

    cliques = commands.add_parser('cliques', help='maximal cliques')
    cliques.add_argument('graph', help='graph file (JSON or edge list)')

    theta = commands.add_parser('theta', help='Lovasz number of an odd hole or antihole')
    kind = theta.add_mutually_exclusive_group(required=True)
    kind.add_argument('--hole', type=int, metavar='M')
    kind.add_argument('--antihole', type=int, metavar='M')

    glued = commands.add_parser('glued', help='two odd cycles glued along two vertices')
    glued.add_argument('--n', type=int, required=True)
    glued.add_argument('--m', type=int, required=True)


def _add_dist_commands(groups):
    dist = groups.add_parser('dist', help='joint distributions from marginals')
    commands = dist.add_subparsers(dest='command', required=True)

    joint = commands.add_parser('joint', help='joint distribution of the graph or a clique')
    joint.add_argument('graph')
    joint.add_argument('marginals', help='{"p": [...]} file')
    joint.add_argument('--subset', type=_vertex_list, help='clique, e.g. 1,2')

    decompose = commands.add_parser('decompose', help='stable-set decomposition of p')
    decompose.add_argument('graph')
    decompose.add_argument('marginals')

    verify = commands.add_parser('verify', help='check a joint distribution against p')
    verify.add_argument('graph')
    verify.add_argument('joint', help='list of {"outcome", "prob"} entries')
    verify.add_argument('marginals')
    verify.add_argument('--tol', type=float, default=FEASIBILITY_TOL,
                        help='residual tolerance (files carry 9 significant digits)')


def _add_quantum_commands(groups):
    quantum = groups.add_parser('quantum', help='projective quantum models')
    commands = quantum.add_subparsers(dest='command', required=True)

    umbrella = commands.add_parser('umbrella', help='Lovasz umbrella on C_N')
    umbrella.add_argument('n', type=int, metavar='N')

    counterexample = commands.add_parser('counterexample',
                                         help='two pentagons violating KCBS together')
    counterexample.add_argument('--kappa', type=float, required=True)

    check = commands.add_parser('check', help='validate a model against a graph')
    check.add_argument('model', help='{"dim", "vectors", "state"} file')
    check.add_argument('graph')
    check.add_argument('--tol', type=float, default=ORTHOGONALITY_TOL)


def _add_ineq_commands(groups):
    ineq = groups.add_parser('ineq', help='contextuality inequalities')
    commands = ineq.add_subparsers(dest='command', required=True)

    kcbs = commands.add_parser('kcbs', help='KCBS-type sum over a hole or antihole')
    kcbs.add_argument('graph')
    kcbs.add_argument('marginals')
    kcbs.add_argument('--order', type=_vertex_list,
                      help='cycle order; defaults to the imperfection witness')
    kcbs.add_argument('--antihole', action='store_true', help='treat --order as an antihole')

    entropic = commands.add_parser('entropic', help='entropic chain value along a cycle')
    entropic.add_argument('graph')
    entropic.add_argument('marginals')
    entropic.add_argument('--order', type=_vertex_list, required=True)


def _add_monogamy_commands(groups):
    monogamy = groups.add_parser('monogamy', help='entropic monogamy on glued cycles')
    commands = monogamy.add_subparsers(dest='command', required=True)

    verify = commands.add_parser('verify', help='E1 + E2 with even-cycle certificates')
    verify.add_argument('--n', type=int, required=True)
    verify.add_argument('--m', type=int, required=True)
    verify.add_argument('--p', dest='marginals', help='marginals on the glued graph')

    sweep = commands.add_parser('sweep', help='seeded random sweep of E1 + E2')
    sweep.add_argument('--samples', type=int, required=True)
    sweep.add_argument('--seed', type=int, help='defaults to $CONTEXTLAB_SEED, then 0')
    sweep.add_argument('--n', type=int, default=5)
    sweep.add_argument('--m', type=int, default=3)
    sweep.add_argument('--streams', type=int, default=DEFAULT_STREAMS)
    sweep.add_argument('--workers', type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with every command group."""
    parser = _ArgumentParser(prog='contextlab', description=__doc__.split('\n\n')[0])
    parser.add_argument('--output', choices=('json', 'text'), default='json')
    parser.add_argument('--verbose', action='store_true', help='debug logging on stderr')
    parser.add_argument('--version', action='version', version=f'contextlab {__version__}')
    groups = parser.add_subparsers(dest='group', required=True)
    _add_graph_commands(groups)
    _add_dist_commands(groups)
    _add_quantum_commands(groups)
    _add_ineq_commands(groups)
    _add_monogamy_commands(groups)
    return parser


_PATH_ARGUMENTS = ('graph', 'marginals', 'joint', 'model')


def _resolve_seed(seed):
    if seed is not None:
        return seed
    value = os.getenv('CONTEXTLAB_SEED')
    if value is None or not value.strip():
        return 0
    try:
        return int(value)
    except ValueError as e:
        raise InvalidArgumentError(f"CONTEXTLAB_SEED must be an integer, got {value!r}") from e


def parse_command(argv) -> Command:
    """
    Parse argv into a Command.

    Raises:
        InvalidArgumentError: For unknown commands, missing or malformed flags
    """
    args = vars(build_parser().parse_args(argv))
    name = f"{args.pop('group')} {args.pop('command')}"
    output = args.pop('output')
    args.pop('verbose')
    if name == 'monogamy sweep':
        args['seed'] = _resolve_seed(args['seed'])
    paths = {key: args.pop(key) for key in _PATH_ARGUMENTS if args.get(key) is not None}
    for key in _PATH_ARGUMENTS:
        args.pop(key, None)
    return Command(name=name, paths=paths, flags=args, output=output)


# Each handler returns (finding, result payload).

def _graph_perfect(command):
    witness = contextuality_witness(parse_graph_file(command.paths['graph']))
    perfectness = witness.perfectness
    return not perfectness.perfect, {
        "perfect": perfectness.perfect,
        "kind": perfectness.kind,
        "witness": labels(perfectness.witness),
        "alpha": witness.alpha,
        "theta": witness.theta,
        "gap": witness.gap,
    }


def _graph_alpha(command):
    g = parse_graph_file(command.paths['graph'])
    return False, {"n": g.n, "alpha": independence_number(g)}


def _graph_cliques(command):
    cliques = enumerate_maximal_cliques(parse_graph_file(command.paths['graph']))
    return False, {"count": len(cliques), "cliques": [labels(c) for c in cliques]}


def _graph_theta(command):
    if command.flags['hole'] is not None:
        kind, m = WitnessKind.HOLE, command.flags['hole']
    else:
        kind, m = WitnessKind.ANTIHOLE, command.flags['antihole']
    return False, {
        "kind": kind,
        "m": m,
        "theta": theta_closed_form(kind, m),
        "alpha": alpha_closed_form(kind, m),
    }


def _graph_glued(command):
    spec = GluedCycleSpec(n=command.flags['n'], m=command.flags['m'])
    glued = build_glued_cycles(spec)
    return False, {
        "names": list(glued.names),
        "graph": graph_payload(glued.graph),
        "unprimed": labels(glued.unprimed),
        "primed": labels(glued.primed),
        "even_cycles": [labels(cycle) for cycle in decompose_glued_into_even_cycles(spec)],
    }


def _dist_joint(command):
    g = parse_graph_file(command.paths['graph'])
    p = parse_marginals_file(command.paths['marginals'])
    subset = _vertices(command.flags['subset'])
    if subset is not None:
        table = subset_joint_from_marginals(g, p, subset)
        return False, {
            "subset": labels(table.subset),
            "table": [{"outcome": list(outcome), "prob": mass}
                      for outcome, mass in table.table.items()],
        }
    decomp = decompose_into_stable_sets(g, p)
    if decomp is None:
        return True, {"feasible": False, "fvp": check_payload(fvp_membership(g, p))}
    return False, {"feasible": True, "joint": joint_payload(construct_joint_distribution(decomp))}


def _dist_decompose(command):
    g = parse_graph_file(command.paths['graph'])
    p = parse_marginals_file(command.paths['marginals'])
    fvp = check_payload(fvp_membership(g, p))
    decomp = decompose_into_stable_sets(g, p)
    if decomp is None:
        return True, {"feasible": False, "fvp": fvp}
    return False, {"feasible": True, "fvp": fvp, "decomposition": decomposition_payload(decomp)}


def _dist_verify(command):
    g = parse_graph_file(command.paths['graph'])
    joint = parse_joint_file(command.paths['joint'])
    p = parse_marginals_file(command.paths['marginals'])
    report = verify_prop2_conditions(g, joint, p, tol=command.flags['tol'])
    result = {
        "nonnegative": report.nonnegative,
        "normalized": report.normalized,
        "exclusive": report.exclusive,
        "marginals_match": report.marginals_match,
        "residuals": report.residuals,
        "verdict": report.verdict,
    }
    if report.verdict:
        result["clique_residual"] = clique_marginal_residual(g, joint, p)
    return not report.verdict, result


def _quantum_umbrella(command):
    n = command.flags['n']
    model, state = umbrella_model(n)
    p = model_marginals(model, state)
    cycle = build_cycle(n)
    report = kcbs_value(cycle, tuple(range(n)), p)
    return report.violation > FEASIBILITY_TOL, {
        "model": model_payload(model, state),
        "orthogonality": check_payload(validate_model(model, cycle)),
        "marginals": marginals_payload(p),
        "kcbs": kcbs_payload(report),
        "theta": theta_closed_form(WitnessKind.HOLE, n),
    }


def _quantum_counterexample(command):
    pair = build_counterexample(command.flags['kappa'])
    pentagon = build_cycle(5)
    sums = []
    result = {"kappa": pair.kappa, "alpha": PENTAGON_ALPHA}
    for key, model in (("base", pair.base), ("primed", pair.primed)):
        report = kcbs_value(pentagon, tuple(range(5)), model_marginals(model, pair.state))
        sums.append(report.sum)
        result[key] = {
            "orthogonality": check_payload(validate_model(model, pentagon)),
            "kcbs": kcbs_payload(report),
        }
    glued = build_glued_cycles(COUNTEREXAMPLE_SPEC)
    glued_p = counterexample_glued_marginals(pair)
    result["glued"] = {
        "orthogonality": check_payload(validate_model(pair.glued_model(), glued.graph)),
        "marginals": marginals_payload(glued_p),
        "entropic": monogamy_payload(verify_monogamy(COUNTEREXAMPLE_SPEC, glued_p)),
    }
    return all(value > PENTAGON_ALPHA for value in sums), result


def _quantum_check(command):
    model, state = parse_model_file(command.paths['model'])
    g = parse_graph_file(command.paths['graph'])
    check = validate_model(model, g, tol=command.flags['tol'])
    p = model_marginals(model, state)
    return not check.ok, {
        "orthogonality": check_payload(check),
        "marginals": marginals_payload(p),
        "fvp": check_payload(fvp_membership(g, p)),
    }


def _ineq_kcbs(command):
    g = parse_graph_file(command.paths['graph'])
    p = parse_marginals_file(command.paths['marginals'])
    order, antihole = _vertices(command.flags['order']), command.flags['antihole']
    if order is None:
        witness = is_perfect(g)
        if witness.perfect:
            raise InvalidArgumentError("graph is perfect: no odd hole or antihole to sum over")
        order, antihole = witness.witness, witness.kind is WitnessKind.ANTIHOLE
    report = antihole_kcbs_value(g, order, p) if antihole else kcbs_value(g, order, p)
    return report.violation > FEASIBILITY_TOL, kcbs_payload(report)


def _ineq_entropic(command):
    g = parse_graph_file(command.paths['graph'])
    p = parse_marginals_file(command.paths['marginals'])
    report = entropic_chain_value(g, _vertices(command.flags['order']), p)
    return report.value > FEASIBILITY_TOL, entropic_payload(report)


def _monogamy_verify(command):
    spec = GluedCycleSpec(n=command.flags['n'], m=command.flags['m'])
    if 'marginals' in command.paths:
        p = parse_marginals_file(command.paths['marginals'])
    else:
        p = glued_witness(spec)
    report = verify_monogamy(spec, p)
    result = monogamy_payload(report)
    result["marginals"] = marginals_payload(p)
    return not report.verdict, result


def _monogamy_sweep(command):
    flags = command.flags
    summary = monogamy_random_harness(
        GluedCycleSpec(n=flags['n'], m=flags['m']),
        samples=flags['samples'],
        seed=flags['seed'],
        streams=flags['streams'],
        workers=flags['workers'],
    )
    return not summary.verdict, harness_payload(summary)


HANDLERS: Dict[str, Callable[[Command], Tuple[bool, dict]]] = {
    'graph perfect': _graph_perfect,
    'graph alpha': _graph_alpha,
    'graph cliques': _graph_cliques,
    'graph theta': _graph_theta,
    'graph glued': _graph_glued,
    'dist joint': _dist_joint,
    'dist decompose': _dist_decompose,
    'dist verify': _dist_verify,
    'quantum umbrella': _quantum_umbrella,
    'quantum counterexample': _quantum_counterexample,
    'quantum check': _quantum_check,
    'ineq kcbs': _ineq_kcbs,
    'ineq entropic': _ineq_entropic,
    'monogamy verify': _monogamy_verify,
    'monogamy sweep': _monogamy_sweep,
}


def run(command: Command) -> Tuple[int, Report]:
    """
    Dispatch a parsed command.

    Returns:
        (exit code, Report): EXIT_FINDING when the analysis found a
        violation or infeasibility, EXIT_OK otherwise

    Raises:
        InvalidArgumentError: If the command name is unknown
        Every exception of the computational modules propagates unchanged
    """
    handler = HANDLERS.get(command.name)
    if handler is None:
        raise InvalidArgumentError(f"unknown command {command.name!r}")
    finding, result = handler(command)
    logger.info("%s finished%s", command.name, " with a finding" if finding else "")
    report = Report(
        subcommand=command.name,
        inputs={**command.paths, **command.flags},
        result=result,
        version=__version__,
    )
    return (EXIT_FINDING if finding else EXIT_OK), report


def _configure_logging(verbose):
    level_name = os.getenv('CONTEXTLAB_LOG_LEVEL', 'WARNING').upper()
    level = logging.DEBUG if verbose else getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format='%(levelname)s %(name)s: %(message)s')


def main(argv=None) -> int:
    """
    Console entry point.

    Returns:
        Process exit code (0 ok, 1 usage or parse error, 2 finding)
    """
    load_dotenv()
    argv = sys.argv[1:] if argv is None else list(argv)
    _configure_logging('--verbose' in argv)
    try:
        command = parse_command(argv)
        code, report = run(command)
    except CLI_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR

    text = dump_report(report) if command.output == 'json' else render_text(report)
    sys.stdout.write(text)
    return code


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
