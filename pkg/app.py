"""Command-line interface for lcert.

Every subcommand prints one canonical JSON document (or a CSV table with
``--csv``) to stdout or to ``--out``. Log lines go to stderr only.

Exit codes: 0 success, 1 failed certificate or verdict, 2 invalid
parameters, 3 numeric failure.
"""
import logging
import sys
from dataclasses import dataclass
from functools import wraps
from typing import Annotated, Callable, List, Optional

import typer

from business_logic.calderon import OPERATORS, char_closed_form, evaluate
from business_logic.certify import (
    ExtremalSequence,
    ball_corpus,
    certify_lower_bound,
    fundamental_hypothesis,
    membership_divergence,
    nonimprove_experiment,
    shrinking_ball_corpus,
    step_family,
    truncation_family,
    two_step_corpus,
    weak_fatou_probe,
    weak_type_sweep,
)
from business_logic.core_measure import layer_cake, rearrange
from business_logic.norms import lambda_phi_norm, lorentz_norm_dist, lorentz_norm_rearr
from business_logic.operators_rn import OPERATOR_KINDS, RadialOperator, hilbert_char, hl_maximal_1d, maximal_1d
from config import config
from errors import ConfigurationError, ParameterError, exit_code_for
from models import IntervalUnion, LorentzIndex, PhiFunction, RadialFunction, SigmaTriple, StepFunction
from report_handler import ReportHandler
from utils.number_utils import format_number, parse_number, parse_number_list, parse_pair, parse_triple

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="lcert",
    help="Rearrangements, Lorentz norms, Calderón operators and endpoint certificates",
    add_completion=False,
    no_args_is_help=True,
)
certify_app = typer.Typer(help="Lower-bound certificates", no_args_is_help=True)
sweep_app = typer.Typer(help="Ratio sweeps over seeded corpora", no_args_is_help=True)
experiment_app = typer.Typer(help="Nonimprovability experiments", no_args_is_help=True)
probe_app = typer.Typer(help="Membership, Fatou and fundamental-function probes", no_args_is_help=True)
app.add_typer(certify_app, name="certify")
app.add_typer(sweep_app, name="sweep")
app.add_typer(experiment_app, name="experiment")
app.add_typer(probe_app, name="probe")

FAMILIES = ("shrinking", "growing", "single")
CORPORA = ("balls", "shrinking", "two-step")

OutOption = Annotated[Optional[str], typer.Option("--out", help="Write to this path instead of stdout")]
CsvOption = Annotated[bool, typer.Option("--csv", help="Emit the table as CSV")]
OpOption = Annotated[str, typer.Option("--op", help="riesz | maximal | hl | hilbert")]
OrderOption = Annotated[str, typer.Option("--order", help="γ for riesz, α for maximal")]
DimOption = Annotated[int, typer.Option("--n", help="Dimension (1, 2 or 3)")]
NormalizedOption = Annotated[bool, typer.Option("--normalized", help="Multiply the Riesz kernel by c_γ")]


@dataclass
class ExperimentConfig:
    """Validated options shared by certify, sweep and experiment commands.

    Attributes:
        op: Operator id
        n: Dimension
        order: γ (riesz) or α (maximal)
        normalized: Riesz normalization flag
        seed: Corpus seed
        out: Output path or None for stdout
        csv: Emit CSV instead of JSON
    """
    op: str
    n: int = 1
    order: float = 0.5
    normalized: bool = False
    seed: Optional[int] = None
    out: Optional[str] = None
    csv: bool = False

    def __post_init__(self):
        if self.op not in OPERATOR_KINDS:
            raise ParameterError(f"unknown operator {self.op!r}; use one of {', '.join(OPERATOR_KINDS)}")
        if self.seed is None:
            self.seed = config.seed
        # builds and validates the operator eagerly
        self.operator()

    def operator(self) -> RadialOperator:
        return RadialOperator(self.op, self.n, self.order, self.normalized)


class _ValueReport:
    """Single-number result in the same shape as the certify reports."""
    header = ("quantity", "value")

    def __init__(self, kind: str, value: float, **details):
        self.kind = kind
        self.value = value
        self.details = details

    failed = False

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": format_number(self.value), **self.details}

    def rows(self) -> List[tuple]:
        return [(self.kind, self.value)]


class _StepReport:
    """A step function (or layer decomposition) as a report."""

    def __init__(self, data: dict, rows: List[tuple], header: tuple):
        self.data = data
        self._rows = rows
        self.header = header

    failed = False

    def to_dict(self) -> dict:
        return self.data

    def rows(self) -> List[tuple]:
        return self._rows


def _emit(report, out: Optional[str], as_csv: bool):
    ReportHandler().write_report(report, out, as_csv, sys.stdout)
    if report.failed:
        raise typer.Exit(1)


def guarded(func: Callable) -> Callable:
    """Run a command, turning lcert errors into messages and exit codes."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except typer.Exit:
            raise
        except Exception as e:  # noqa: BLE001
            code = exit_code_for(e)
            logger.debug("command failed", exc_info=True)
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(code) from e
    return wrapper


def _parse_phi(phi: Optional[str], phi_table: Optional[str]) -> Optional[PhiFunction]:
    if phi and phi_table:
        raise ConfigurationError("use either --phi or --phi-table, not both")
    if phi:
        kind, _, value = phi.partition(":")
        if kind != "power" or not value:
            raise ParameterError(f"--phi expects power:E, got {phi!r}")
        return PhiFunction.power(parse_number(value))
    if phi_table:
        points = []
        for item in phi_table.split(","):
            t, sep, v = item.partition(":")
            if not sep:
                raise ParameterError(f"--phi-table expects t:v pairs, got {item!r}")
            points.append((parse_number(t), parse_number(v)))
        ts, vs = zip(*points)
        return PhiFunction.tabulated(ts, vs)
    return None


def _load_radial_or_intervals(source: str, n: int):
    data = ReportHandler().load_source(source)
    if "intervals" in data:
        return IntervalUnion.from_dict(data)
    if "profile" in data:
        return RadialFunction.from_dict(data)
    if "pieces" in data:
        return RadialFunction(n, StepFunction.from_dict(data))
    raise ParameterError("expected a RadialFunction, IntervalUnion or StepFunction JSON object")


@app.callback()
def main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log progress to stderr")] = False,
):
    """Exact Lorentz-space computations and numerical endpoint certificates."""
    if verbose or config.log_level != "WARNING":
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if verbose else config.log_level,
            format="%(levelname)s %(name)s: %(message)s",
        )


@app.command("rearrange")
@guarded
def rearrange_cmd(
    source: Annotated[str, typer.Argument(help="StepFunction JSON or @path")],
    layers: Annotated[bool, typer.Option("--layers", help="Emit the layer decomposition instead")] = False,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """Nonincreasing rearrangement f* of a step function."""
    f = StepFunction.from_dict(ReportHandler().load_source(source))
    if layers:
        lc = layer_cake(f)
        report = _StepReport(lc.to_dict(), list(zip(lc.alphas, lc.cum_measures)), ("alpha", "cum"))
    else:
        r = rearrange(f)
        report = _StepReport(r.to_dict(), list(zip(r.lengths, r.values)), ("len", "value"))
    _emit(report, out, csv)


@app.command("norm")
@guarded
def norm_cmd(
    source: Annotated[str, typer.Argument(help="StepFunction JSON or @path")],
    p: Annotated[str, typer.Option("--p", help="Lorentz p (inf allowed)")] = "1",
    q: Annotated[str, typer.Option("--q", help="Lorentz q (inf allowed)")] = "1",
    form: Annotated[str, typer.Option("--form", help="rearr | dist")] = "rearr",
    phi: Annotated[Optional[str], typer.Option("--phi", help="Λ_φ norm with φ = t^E, given as power:E")] = None,
    phi_table: Annotated[Optional[str], typer.Option("--phi-table", help="Λ_φ norm with tabulated φ, t:v,...")] = None,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """Lorentz quasi-norm ‖f‖_{p,q}, or the Λ_φ norm with --phi/--phi-table."""
    f = StepFunction.from_dict(ReportHandler().load_source(source))
    phi_fn = _parse_phi(phi, phi_table)
    if phi_fn is not None:
        report = _ValueReport("lambda_phi_norm", lambda_phi_norm(f, phi_fn), phi=phi_fn.to_dict())
    else:
        if form not in ("rearr", "dist"):
            raise ParameterError(f"--form must be rearr or dist, got {form!r}")
        idx = LorentzIndex(parse_number(p), parse_number(q))
        value = lorentz_norm_rearr(f, idx) if form == "rearr" else lorentz_norm_dist(f, idx)
        report = _ValueReport("lorentz_norm", value, index=idx.to_dict(), form=form)
    _emit(report, out, csv)


@app.command("calderon")
@guarded
def calderon_cmd(
    op: Annotated[str, typer.Option("--op", help="R | S0 | H | Sinf")],
    sigma: Annotated[str, typer.Option("--sigma", help="p,q,m")],
    a: Annotated[str, typer.Option("--a", help="Measure of the set")],
    t: Annotated[str, typer.Option("--t", help="Evaluation point")],
    generic: Annotated[bool, typer.Option("--generic", help="Use the generic evaluator")] = False,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """T_σ(χ_(0,a))(t) for a Calderón-type operator."""
    if op not in OPERATORS:
        raise ParameterError(f"unknown Calderón operator {op!r}; use one of {', '.join(OPERATORS)}")
    s = SigmaTriple(*parse_triple(sigma))
    measure, point = parse_number(a), parse_number(t)
    if generic:
        value = evaluate(op, s, StepFunction.indicator(measure), point)
    else:
        value = char_closed_form(op, s, measure, point)
    _emit(_ValueReport("calderon", value, op=op, sigma=s.to_dict(), a=format_number(measure),
                       t=format_number(point), generic=generic), out, csv)


@app.command("apply")
@guarded
def apply_cmd(
    source: Annotated[str, typer.Argument(help="RadialFunction, IntervalUnion or StepFunction JSON, or @path")],
    x: Annotated[str, typer.Option("--x", help="Evaluation point (radius for radial inputs)")],
    op: OpOption = "riesz",
    order: OrderOption = "0.5",
    n: DimOption = 1,
    normalized: NormalizedOption = False,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """Evaluate a concrete operator at one point."""
    if op not in OPERATOR_KINDS:
        raise ParameterError(f"unknown operator {op!r}; use one of {', '.join(OPERATOR_KINDS)}")
    f = _load_radial_or_intervals(source, n)
    point, alpha = parse_number(x), parse_number(order)
    if isinstance(f, IntervalUnion):
        if op == "riesz":
            raise ConfigurationError("the Riesz potential takes radial inputs")
        if op == "hilbert":
            value = hilbert_char(f, point)
        elif op == "hl":
            value = hl_maximal_1d(f, point)
        else:
            value = maximal_1d(alpha, f, point)
    else:
        value = RadialOperator(op, f.n, alpha, normalized).apply(f, point)
    _emit(_ValueReport("apply", value, op=op, order=format_number(alpha), x=format_number(point)), out, csv)


@certify_app.command("lower-bound")
@guarded
def lower_bound_cmd(
    tsigma: Annotated[str, typer.Option("--tsigma", help="R | S0 | H | Sinf")],
    sigma: Annotated[str, typer.Option("--sigma", help="p,q,m")],
    op: OpOption = "riesz",
    order: OrderOption = "0.5",
    n: DimOption = 1,
    normalized: NormalizedOption = False,
    family: Annotated[str, typer.Option("--family", help="shrinking | growing | single")] = "shrinking",
    jmax: Annotated[int, typer.Option("--jmax", help="Number of family members")] = 10,
    radius: Annotated[str, typer.Option("--radius", help="Ball radius for --family single")] = "1",
    t0: Annotated[Optional[str], typer.Option("--t0", help="Cut point for --family single")] = None,
    t_min: Annotated[str, typer.Option("--t-min")] = "1e-3",
    t_max: Annotated[str, typer.Option("--t-max")] = "1e3",
    density: Annotated[Optional[int], typer.Option("--density", help="Grid points per decade")] = None,
    big_c: Annotated[Optional[str], typer.Option("--C", help="Fix the constant C")] = None,
    small_c: Annotated[Optional[str], typer.Option("--c", help="Fix the dilation c")] = None,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """Certify (Tχ_E)*(t) ≥ C·T_σ(χ_(0,a))(ct) over an extremal family."""
    cfg = ExperimentConfig(op, n, parse_number(order), normalized, out=out, csv=csv)
    s = SigmaTriple(*parse_triple(sigma))
    if family not in FAMILIES:
        raise ConfigurationError(f"unknown family {family!r}; use one of {', '.join(FAMILIES)}")
    if family == "shrinking":
        fam = ExtremalSequence.shrinking(n, jmax, s.p)
    elif family == "growing":
        fam = ExtremalSequence.growing(n, jmax, s.p)
    else:
        if t0 is None:
            raise ConfigurationError("--family single needs --t0")
        fam = ExtremalSequence.single(n, parse_number(radius), parse_number(t0), s.p)
    cert = certify_lower_bound(
        cfg.operator(), tsigma, s, fam,
        t_range=(parse_number(t_min), parse_number(t_max)), density=density,
        C=None if big_c is None else parse_number(big_c),
        c=None if small_c is None else parse_number(small_c),
    )
    _emit(cert, cfg.out, cfg.csv)


@sweep_app.command("weak-type")
@guarded
def weak_type_cmd(
    domain: Annotated[str, typer.Option("--domain", help="Domain Lorentz index p,q")],
    target: Annotated[str, typer.Option("--target", help="Target Lorentz index p,q")],
    op: OpOption = "riesz",
    order: OrderOption = "0.5",
    n: DimOption = 1,
    normalized: NormalizedOption = False,
    corpus: Annotated[str, typer.Option("--corpus", help="balls | shrinking | two-step")] = "balls",
    count: Annotated[int, typer.Option("--count", help="Corpus size")] = 50,
    seed: Annotated[Optional[int], typer.Option("--seed", help="Corpus seed")] = None,
    window: Annotated[Optional[str], typer.Option("--window", help="Restrict target norms to (0, window)")] = None,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """‖Tf‖_target / ‖f‖_domain over a seeded corpus."""
    cfg = ExperimentConfig(op, n, parse_number(order), normalized, seed, out, csv)
    if corpus == "balls":
        functions = ball_corpus(n, count, cfg.seed)
    elif corpus == "shrinking":
        functions = shrinking_ball_corpus(n, count)
    elif corpus == "two-step":
        functions = two_step_corpus(n, count, cfg.seed)
    else:
        raise ConfigurationError(f"unknown corpus {corpus!r}; use one of {', '.join(CORPORA)}")
    report = weak_type_sweep(
        cfg.operator(), LorentzIndex(*parse_pair(domain)), LorentzIndex(*parse_pair(target)), functions,
        window=None if window is None else parse_number(window),
    )
    _emit(report, cfg.out, cfg.csv)


@experiment_app.command("nonimprove")
@guarded
def nonimprove_cmd(
    gamma: Annotated[str, typer.Option("--gamma", help="Riesz order γ")] = "0.5",
    q: Annotated[str, typer.Option("--q", help="Domain secondary index in (0, 1]")] = "1",
    r: Annotated[str, typer.Option("--r", help="Target secondary index (finite)")] = "1",
    jmax: Annotated[int, typer.Option("--jmax", help="Number of balls B(0, 1/j)")] = 64,
    n: DimOption = 1,
    window_radius: Annotated[Optional[str], typer.Option("--window-radius", help="Outer radius of the target window")] = None,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """Extremal-sequence experiment for the Riesz potential."""
    cfg = ExperimentConfig("riesz", n, parse_number(gamma), out=out, csv=csv)
    report = nonimprove_experiment(
        cfg.order, parse_number(q), parse_number(r), jmax, n=cfg.n,
        window_radius=None if window_radius is None else parse_number(window_radius),
    )
    _emit(report, cfg.out, cfg.csv)


@probe_app.command("fatou")
@guarded
def fatou_cmd(
    p: Annotated[str, typer.Option("--p", help="Lorentz p")] = "1",
    q: Annotated[str, typer.Option("--q", help="Lorentz q")] = "1",
    kind: Annotated[str, typer.Option("--kind", help="steps | truncations")] = "steps",
    count: Annotated[int, typer.Option("--count", help="Family size")] = 10,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """Weak Fatou check along a monotone family."""
    idx = LorentzIndex(parse_number(p), parse_number(q))
    if kind == "steps":
        family, limit = step_family(count)
        report = weak_fatou_probe(idx, family, limit=limit)
    elif kind == "truncations":
        # the weak norm of t^{-1/p} is 1; for q < ∞ the limit is not in the space
        limit_norm = 1.0 if idx.weak else None
        report = weak_fatou_probe(idx, truncation_family(idx.p, count), limit_norm=limit_norm)
    else:
        raise ConfigurationError(f"--kind must be steps or truncations, got {kind!r}")
    _emit(report, out, csv)


@probe_app.command("membership")
@guarded
def membership_cmd(
    q: Annotated[str, typer.Option("--q", help="Exponent of t^{-1/q}")] = "2",
    r: Annotated[str, typer.Option("--r", help="Lorentz secondary index")] = "1",
    eps: Annotated[str, typer.Option("--eps", help="Lower cuts ε, comma separated")] = "1",
    t_cut: Annotated[str, typer.Option("--T", help="Upper cuts T, comma separated")] = "10,100,1000",
    out: OutOption = None,
    csv: CsvOption = False,
):
    """Lorentz norms of truncations of t^{-1/q}."""
    report = membership_divergence(parse_number(q), parse_number(r), parse_number_list(eps), parse_number_list(t_cut))
    _emit(report, out, csv)


@probe_app.command("fundamental")
@guarded
def fundamental_cmd(
    p: Annotated[str, typer.Option("--p", help="Space index p")],
    q: Annotated[str, typer.Option("--q", help="Space index q")],
    exponent: Annotated[str, typer.Option("--exponent", help="Compare φ_X with t^{1/exponent}")],
    side: Annotated[str, typer.Option("--side", help="zero | infinity")] = "zero",
    decades: Annotated[int, typer.Option("--decades")] = 8,
    out: OutOption = None,
    csv: CsvOption = False,
):
    """Boundedness of t^{-1/p} φ_X(t) near 0 or ∞."""
    idx = LorentzIndex(parse_number(p), parse_number(q))
    report = fundamental_hypothesis(idx, parse_number(exponent), side, decades)
    _emit(report, out, csv)


if __name__ == "__main__":
    app()
