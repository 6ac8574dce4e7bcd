"""End-to-end construction: scaling sequence, stages, commutator pairs, sums.

The chain: the target growth q_m = sqrt(log(m + e)) and the scaling p_m
(chosen by the max recipe below) define schedule nodes s_m = m - log p_m
whose envelope h satisfies h(s_m) = q_m. The damped absolute value f built
from h then admits, at every stage m, a diagonal W_m of small norm together
with a witness whose multiplier ratio exceeds an explicit increasing
unbounded bound. Each stage converts into a commutator pair (W'_r, X_r)
with first commutator norm exactly 1/r^2 and second commutator norm equal
to ratio/r^2, and the pairs assemble into block-diagonal truncations whose
first-commutator norms stay summable while the per-block second-commutator
norms grow.

All stage and pair functions are pure; stages for distinct m are
independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import get_option
from .construct import build_model_matrices, commutator_ba, make_tensor_lift
from .errors import DegenerateWitnessError, InvalidInputError, SizeLimitError
from .funcs import (
    GrowthSchedule,
    ScalarC1Function,
    build_damped_abs,
    build_schedule,
    build_slow_growth,
)
from .schur import (
    BlowupWitness,
    DiagonalOperator,
    DividedDifferenceSymbol,
    commutator,
    dual_witness_transfer,
    group_spectrum,
    schur_apply,
)
from .symnorm import (
    SingularValueSequence,
    SymmetricNormSpec,
    decreasing_rearrangement,
    schatten,
    singular_values,
    spec_to_json,
    symmetric_norm,
    verify_block_family,
)

__all__ = [
    "LOWER_BOUND_CONST",
    "TRANSFER_CONST",
    "PipelineConfig",
    "CheckResult",
    "BoundsReport",
    "CounterexampleStage",
    "CommutatorPair",
    "DirectSumReport",
    "ConstructionReport",
    "sqrt_log_growth",
    "scaling_sequence",
    "lifted_diag_norm",
    "construction_schedule",
    "check_commutator_bounds",
    "build_stage",
    "build_commutator_pair",
    "assemble_direct_sum",
    "run_construction",
]

# sup-norm commutator lower bound constant (1 - 1/e)/4 and its transfer into
# a general symmetric ideal through the eps = 1/2 lift chain, 2/(3 pi) of it
LOWER_BOUND_CONST = (1.0 - math.exp(-1.0)) / 4.0
TRANSFER_CONST = 2.0 * LOWER_BOUND_CONST / (3.0 * math.pi)


def _opnorm(x) -> float:
    return float(singular_values(x).values[0])


def default_tolerances() -> dict:
    return {
        "identity_rel": 1e-12,
        "ratio_rel": 1e-9,
        "norm_rel": 1e-9,
        # exact-equality spectrum grouping: lifted spectra repeat input floats
        # bitwise, and any positive slack would chain distinct graded
        # eigenvalues e^-j together once their gaps fall below it
        "spectrum_tol": 0.0,
    }


@dataclass(frozen=True)
class PipelineConfig:
    spec: SymmetricNormSpec
    mode: str = "sup"
    x0: SingularValueSequence = None
    m_max: int = 64
    eps: float = 0.5
    tolerances: dict = field(default_factory=default_tolerances)

    def __post_init__(self):
        if self.mode not in ("sup", "sum"):
            raise InvalidInputError(f"mode must be 'sup' or 'sum', got {self.mode!r}")
        if self.x0 is None:
            object.__setattr__(self, "x0", SingularValueSequence(np.array([1.0])))
        elif not isinstance(self.x0, SingularValueSequence):
            object.__setattr__(self, "x0", decreasing_rearrangement(self.x0))
        if self.m_max < 3:
            raise InvalidInputError("m_max must be at least 3")
        if not (self.eps > 0.0):
            raise InvalidInputError("eps must be positive")
        tols = default_tolerances()
        tols.update(self.tolerances or {})
        object.__setattr__(self, "tolerances", tols)


@dataclass
class CheckResult:
    """One certified inequality: kind 'le' means value <= bound, 'ge' the
    reverse, 'abs' means |value| <= bound. margin >= -tol iff passed."""

    name: str
    kind: str
    value: float
    bound: float
    tol: float

    @property
    def margin(self) -> float:
        if self.kind == "le":
            return self.bound - self.value
        if self.kind == "ge":
            return self.value - self.bound
        return self.bound - abs(self.value)

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tol

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "kind": self.kind,
            "value": self.value,
            "bound": self.bound,
            "margin": self.margin,
            "tol": self.tol,
        }


def _all_pass(checks: dict) -> bool:
    return all(c.passed for c in checks.values())


# ---------------------------------------------------------------------------
# sequences and schedule
# ---------------------------------------------------------------------------

def sqrt_log_growth(m: int) -> float:
    """The target growth value sqrt(log(m + e)); equals 1 at m = 0."""
    if m < 0:
        raise InvalidInputError("index must be nonnegative")
    return math.sqrt(math.log(m + math.e))


def lifted_diag_norm(spec: SymmetricNormSpec, m: int, x0: SingularValueSequence) -> float:
    """Norm of the lifted signed diagonal at stage m without materializing it.

    Its singular values are e^-1 .. e^-m, each repeated 2*len(x0) times
    (two signs times the identity tensor factor), rearranged.
    """
    mags = np.repeat(np.exp(-np.arange(1, m + 1, dtype=float)), 2 * len(x0))
    return symmetric_norm(spec, SingularValueSequence(mags))


def scaling_sequence(cfg: PipelineConfig, m_max: int) -> np.ndarray:
    """The scalars p_0 .. p_m_max, taken with equality at the max recipe:

    1/p_m = max(1, 1/p_{m-1}, m^2 ||phi(b_m)||, (q_m^2 / (e q_{m-1}^2)) / p_{m-1})

    This is the minimal-decay admissible choice; it keeps p nonincreasing in
    (0, 1], the stage norms below 1/m^2, and the schedule rate at most 1/2.
    """
    if m_max < 1:
        raise InvalidInputError("m_max must be >= 1")
    inv = np.empty(m_max + 1)
    inv[0] = 1.0
    q_prev = sqrt_log_growth(0)
    for m in range(1, m_max + 1):
        q_m = sqrt_log_growth(m)
        lifted = lifted_diag_norm(cfg.spec, m, cfg.x0)
        inv[m] = max(
            1.0,
            inv[m - 1],
            m * m * lifted,
            (q_m * q_m) / (math.e * q_prev * q_prev) * inv[m - 1],
        )
        q_prev = q_m
    return 1.0 / inv


def construction_schedule(cfg: PipelineConfig, m_max: int) -> tuple[np.ndarray, GrowthSchedule]:
    """Scaling sequence plus the growth schedule s_m = m - log p_m, q_m."""
    p = scaling_sequence(cfg, m_max)
    s = np.arange(m_max + 1, dtype=float) - np.log(p)
    q = np.array([sqrt_log_growth(m) for m in range(m_max + 1)])
    return p, build_schedule(s, q)


# ---------------------------------------------------------------------------
# sup-norm bounds at one (m, p)
# ---------------------------------------------------------------------------

@dataclass
class BoundsReport:
    m: int
    p: float
    hilbert_norm: float
    commutator_norm: float
    lower_bound: float
    reduction_residual: float
    checks: dict

    @property
    def passed(self) -> bool:
        return _all_pass(self.checks)


def check_commutator_bounds(
    m: int,
    p: float,
    contrast: ScalarC1Function,
    growth: ScalarC1Function,
) -> BoundsReport:
    """Certify the two operator-norm estimates at one stage.

    (i)  ||[b, a]||_inf <= pi,
    (ii) ||[f(p b), a]||_inf >= p K0 log(m/2) / growth(m - log p),

    where f is the damped absolute value built from `growth`. Also checks
    that the 2m-sized commutator norm equals the reduced m-sized one
    ||[f(p d), v]||_inf, which the block structure forces.
    """
    if not (0.0 < p <= 1.0):
        raise InvalidInputError(f"p must lie in (0, 1], got {p}")
    mm = build_model_matrices(m)
    hilbert_norm = _opnorm(commutator_ba(mm))

    fpb = DiagonalOperator(p * mm.b.eigenvalues).mapped(contrast)
    comm_norm = _opnorm(commutator(fpb.matrix(), mm.a))

    fpd = np.asarray(contrast.value(p * mm.d.eigenvalues))
    reduced = fpd[:, None] * mm.v - mm.v * fpd[None, :]
    reduction_residual = abs(comm_norm - _opnorm(reduced))

    bound = p * LOWER_BOUND_CONST * math.log(m / 2.0) / float(growth.value(m - math.log(p)))
    scale = max(1.0, comm_norm)
    checks = {
        "hilbert_bound": CheckResult("hilbert_bound", "le", hilbert_norm, math.pi, 1e-12 * math.pi),
        "lower_bound": CheckResult("lower_bound", "ge", comm_norm, bound, 1e-9 * max(1.0, bound)),
        "block_reduction": CheckResult(
            "block_reduction", "abs", reduction_residual, 0.0, 1e-12 * scale
        ),
    }
    return BoundsReport(
        m=m,
        p=p,
        hilbert_norm=hilbert_norm,
        commutator_norm=comm_norm,
        lower_bound=bound,
        reduction_residual=reduction_residual,
        checks=checks,
    )


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

@dataclass
class CounterexampleStage:
    m: int
    p: float
    s: float
    q: float
    size: int
    w: DiagonalOperator
    w_norm: float
    lower_bound: float
    sup_ratio: float
    trace_ratio: Optional[float]
    witness: BlowupWitness
    checks: dict

    @property
    def passed(self) -> bool:
        return _all_pass(self.checks)


def _stage_size_guard(m: int, x0: SingularValueSequence):
    k = 4 * m * len(x0)
    cap = get_option("size_cap")
    if k > cap:
        raise SizeLimitError(f"stage m={m} needs dense size {k} > cap {cap}")


def build_stage(
    cfg: PipelineConfig,
    m: int,
    p: Sequence[float],
    contrast: ScalarC1Function,
    growth: ScalarC1Function,
) -> CounterexampleStage:
    """Stage m: the lifted small-norm diagonal plus its blow-up witness.

    Certifies (a) the lifted diagonal norm is at most 1/m^2, (b) the witness
    ratio dominates the lift chain floor (two thirds of the sup-norm ratio
    in sup mode; (1 - eps) times the transferred trace ratio in sum mode),
    and (c) the ratio dominates the closed-form increasing bound
    TRANSFER_CONST * log(m/2) / growth(s_m).

    The stored witness is self-adjoint: commutators of the model pair are
    skew-adjoint, and multiplying by i changes no norm.
    """
    if m < 3:
        raise InvalidInputError("stages start at m = 3")
    _stage_size_guard(m, cfg.x0)
    p_m = float(p[m])
    mm = build_model_matrices(m)
    lift = make_tensor_lift(2 * m, cfg.x0)
    rtol = cfg.tolerances["ratio_rel"]

    scaled = DiagonalOperator(p_m * mm.b.eigenvalues)
    w = lift.phi_diag(scaled)
    w_norm = symmetric_norm(cfg.spec, np.abs(w.eigenvalues))

    x_inf = commutator_ba(mm)
    sup_ratio = _opnorm(schur_apply(contrast, scaled, x_inf)) / _opnorm(x_inf)

    trace_ratio = None
    if cfg.mode == "sup":
        wit = 1j * lift.psi(x_inf)
        chain_floor = (2.0 / 3.0) * sup_ratio
    else:
        x1 = dual_witness_transfer(contrast, scaled, x_inf)
        s1 = schatten(1)
        trace_ratio = symmetric_norm(s1, schur_apply(contrast, scaled, x1)) / symmetric_norm(s1, x1)
        wit = lift.psi(x1)
        chain_floor = (1.0 - cfg.eps) * trace_ratio

    wit_norm = symmetric_norm(cfg.spec, wit)
    ratio = symmetric_norm(cfg.spec, schur_apply(contrast, w, wit)) / wit_norm

    s_m = m - math.log(p_m)
    bound = TRANSFER_CONST * math.log(m / 2.0) / float(growth.value(s_m))

    checks = {
        "w_norm_small": CheckResult(
            "w_norm_small", "le", w_norm, 1.0 / (m * m), rtol / (m * m)
        ),
        "ratio_chain": CheckResult(
            "ratio_chain", "ge", ratio, chain_floor, rtol * max(1.0, chain_floor)
        ),
        "ratio_formula": CheckResult("ratio_formula", "ge", ratio, bound, 1e-9),
    }
    if trace_ratio is not None:
        checks["dual_transfer"] = CheckResult(
            "dual_transfer", "ge", trace_ratio, sup_ratio, 1e-9
        )
    return CounterexampleStage(
        m=m,
        p=p_m,
        s=s_m,
        q=sqrt_log_growth(m),
        size=lift.k,
        w=w,
        w_norm=w_norm,
        lower_bound=bound,
        sup_ratio=sup_ratio,
        trace_ratio=trace_ratio,
        witness=BlowupWitness(diag=w, test_matrix=wit, spec=cfg.spec, ratio=float(ratio)),
        checks=checks,
    )


# ---------------------------------------------------------------------------
# commutator pairs
# ---------------------------------------------------------------------------

@dataclass
class CommutatorPair:
    r: int
    spec: SymmetricNormSpec
    w: DiagonalOperator
    x_r: np.ndarray
    first_comm_norm: float
    second_comm_norm: float
    ratio: float
    blowup_rank: int
    checks: dict

    @property
    def passed(self) -> bool:
        return _all_pass(self.checks)


def build_commutator_pair(
    spec: SymmetricNormSpec,
    f,
    w: DiagonalOperator,
    x1,
    r: int,
    tol: float = 0.0,
) -> CommutatorPair:
    """Convert a blow-up witness into a normalized commutator pair.

    From the self-adjoint witness x1: strip its block-diagonal part with
    respect to the spectrum of w (a pinching, hence norm nonincreasing),
    divide the rest entrywise by -i(lam_j - lam_l) to get a self-adjoint x3
    with x2 = i[w, x3] exactly, and normalize x_r = x3 / (r^2 ||x2||). Then

        ||[w, x_r]||      = 1 / r^2          exactly,
        ||[f(w), x_r]||   = ratio / r^2      with ratio = ||M(x2)|| / ||x2||,

    and M(x2) = M(x1) because the divided-difference table vanishes on
    coincident eigenvalue pairs. All four identities are certified
    numerically. `blowup_rank` reports the largest index r' whose
    2 r'^3 <= ratio target the achieved ratio would meet.
    """
    if r < 1:
        raise InvalidInputError("pair index r must be >= 1")
    x1 = np.asarray(x1)
    if x1.ndim != 2 or x1.shape != (w.n, w.n):
        raise InvalidInputError(f"witness shape {x1.shape} does not match spectrum size {w.n}")
    scale = float(np.abs(x1).max())
    if scale == 0.0:
        raise DegenerateWitnessError("witness is zero")
    if np.abs(x1 - x1.conj().T).max() > 1e-12 * scale:
        raise InvalidInputError("witness must be self-adjoint")

    groups = group_spectrum(w, tol)
    labels = np.empty(w.n, dtype=int)
    for g, (_, idx) in enumerate(groups):
        labels[idx] = g
    same = labels[:, None] == labels[None, :]

    xhat = np.where(same, x1, 0.0)
    x2 = np.where(same, 0.0, x1)
    if not np.any(x2):
        raise DegenerateWitnessError(
            "witness is block diagonal with respect to the spectrum; nothing to commute"
        )

    lam = w.eigenvalues
    diff = lam[:, None] - lam[None, :]
    lam_jl = np.where(same, 0.0, -1j / np.where(same, 1.0, diff))
    x3 = lam_jl * x2

    wmat = w.matrix()
    symbol = DividedDifferenceSymbol.build(f, w)
    id_tol = 1e-12
    make_residual = float(np.linalg.norm(x2 - 1j * commutator(wmat, x3)))
    equal_residual = float(np.linalg.norm(symbol.apply(x2) - symbol.apply(x1)))
    sa_residual = float(np.abs(x3 - x3.conj().T).max())

    x1_norm = symmetric_norm(spec, x1)
    xhat_norm = symmetric_norm(spec, xhat)
    x2_norm = symmetric_norm(spec, x2)

    x_r = x3 / (r * r * x2_norm)
    first = symmetric_norm(spec, commutator(wmat, x_r))
    ratio = symmetric_norm(spec, symbol.apply(x2)) / x2_norm
    second = symmetric_norm(spec, commutator(w.mapped(f).matrix(), x_r))

    frob_scale = float(np.linalg.norm(x2))
    checks = {
        "first_norm_exact": CheckResult(
            "first_norm_exact", "abs", first * r * r - 1.0, 0.0, 1e-9
        ),
        "second_equals_ratio": CheckResult(
            "second_equals_ratio",
            "abs",
            second - ratio * first,
            0.0,
            1e-9 * max(1.0, second),
        ),
        "commutator_form": CheckResult(
            "commutator_form", "abs", make_residual, 0.0, id_tol * max(1.0, frob_scale)
        ),
        "multiplier_unchanged": CheckResult(
            "multiplier_unchanged", "abs", equal_residual, 0.0, id_tol * max(1.0, frob_scale)
        ),
        "pinching_contraction": CheckResult(
            "pinching_contraction", "le", xhat_norm, x1_norm, 1e-9 * max(1.0, x1_norm)
        ),
        "x3_self_adjoint": CheckResult(
            "x3_self_adjoint", "abs", sa_residual, 0.0, id_tol * max(1.0, scale)
        ),
    }
    return CommutatorPair(
        r=r,
        spec=spec,
        w=w,
        x_r=x_r,
        first_comm_norm=first,
        second_comm_norm=second,
        ratio=float(ratio),
        blowup_rank=int((ratio / 2.0) ** (1.0 / 3.0)),
        checks=checks,
    )


# ---------------------------------------------------------------------------
# direct-sum truncations
# ---------------------------------------------------------------------------

@dataclass
class DirectSumReport:
    R: int
    first_norms: np.ndarray
    second_norms: np.ndarray
    sum_first: float
    prefix_max_second: np.ndarray
    sum_w_norms: float
    sup_first_opnorm: float
    merged_first_norm: float
    checks: dict

    @property
    def passed(self) -> bool:
        return _all_pass(self.checks)


def assemble_direct_sum(pairs: Sequence[CommutatorPair], R: int) -> DirectSumReport:
    """Block-diagonal truncation over the first R pairs.

    Reports the partial sum of first-commutator norms (bounded by pi^2/6
    since each equals 1/r^2), the running maximum of the second-commutator
    norms (the divergence proxy), the summed diagonal norms, the sup of the
    first-commutator operator norms (the domain-invariance bound), and the
    norm of the merged first commutator computed from the rearranged
    concatenation of per-block singular values.
    """
    if not (1 <= R <= len(pairs)):
        raise InvalidInputError(f"R must lie in [1, {len(pairs)}], got {R}")
    taken = list(pairs[:R])
    spec = taken[0].spec
    if any(p.spec.label != spec.label for p in taken):
        raise InvalidInputError("pairs were built against different norms")
    firsts = np.array([p.first_comm_norm for p in taken])
    seconds = np.array([p.second_comm_norm for p in taken])
    sum_first = float(firsts.sum())
    prefix_max = np.maximum.accumulate(seconds)
    sum_w = float(sum(symmetric_norm(spec, np.abs(p.w.eigenvalues)) for p in taken))
    block_svals = []
    sup_inf = 0.0
    for p in taken:
        s = singular_values(commutator(p.w.matrix(), p.x_r)).values
        block_svals.append(s)
        sup_inf = max(sup_inf, float(s[0]))
    merged = decreasing_rearrangement(np.concatenate(block_svals))
    merged_norm = symmetric_norm(spec, merged)
    basel = math.pi * math.pi / 6.0
    checks = {
        "first_sum_summable": CheckResult(
            "first_sum_summable", "le", sum_first, basel, 1e-9
        ),
        "prefix_max_monotone": CheckResult(
            "prefix_max_monotone",
            "le",
            float(np.max(np.diff(prefix_max, prepend=prefix_max[0]) * -1.0)) if R > 1 else 0.0,
            0.0,
            0.0,
        ),
    }
    return DirectSumReport(
        R=R,
        first_norms=firsts,
        second_norms=seconds,
        sum_first=sum_first,
        prefix_max_second=prefix_max,
        sum_w_norms=sum_w,
        sup_first_opnorm=sup_inf,
        merged_first_norm=merged_norm,
        checks=checks,
    )


# ---------------------------------------------------------------------------
# the full run
# ---------------------------------------------------------------------------

@dataclass
class ConstructionReport:
    config: PipelineConfig
    p: np.ndarray
    schedule: GrowthSchedule
    stages: list
    pairs: list
    direct_sum: DirectSumReport
    envelope_node_error: float

    @property
    def passed(self) -> bool:
        return (
            all(s.passed for s in self.stages)
            and all(p.passed for p in self.pairs)
            and self.direct_sum.passed
        )

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "config": {
                "space": __import__("json").loads(spec_to_json(cfg.spec)),
                "mode": cfg.mode,
                "x0": cfg.x0.values.tolist(),
                "m_max": cfg.m_max,
                "eps": cfg.eps,
                "tolerances": cfg.tolerances,
            },
            "schedule": {"s": self.schedule.s.tolist(), "q": self.schedule.q.tolist()},
            "p": self.p.tolist(),
            "envelope_node_error": self.envelope_node_error,
            "stages": [
                {
                    "m": st.m,
                    "p": st.p,
                    "s": st.s,
                    "q": st.q,
                    "size": st.size,
                    "w_norm": st.w_norm,
                    "bound": st.lower_bound,
                    "achieved": st.witness.ratio,
                    "sup_ratio": st.sup_ratio,
                    "trace_ratio": st.trace_ratio,
                    "checks": {k: c.to_dict() for k, c in st.checks.items()},
                }
                for st in self.stages
            ],
            "pairs": [
                {
                    "r": pr.r,
                    "first_comm_norm": pr.first_comm_norm,
                    "second_comm_norm": pr.second_comm_norm,
                    "ratio": pr.ratio,
                    "blowup_rank": pr.blowup_rank,
                    "checks": {k: c.to_dict() for k, c in pr.checks.items()},
                }
                for pr in self.pairs
            ],
            "direct_sum": {
                "R": self.direct_sum.R,
                "sum_first": self.direct_sum.sum_first,
                "prefix_max_second": self.direct_sum.prefix_max_second.tolist(),
                "sum_w_norms": self.direct_sum.sum_w_norms,
                "sup_first_opnorm": self.direct_sum.sup_first_opnorm,
                "merged_first_norm": self.direct_sum.merged_first_norm,
                "checks": {k: c.to_dict() for k, c in self.direct_sum.checks.items()},
            },
            "passed": self.passed,
        }


def run_construction(cfg: PipelineConfig) -> ConstructionReport:
    """Run every stage from m = 3 to cfg.m_max and assemble the truncations.

    Validates the block family for every stage size first (an unsuitable
    norm, for example schatten(2), fails here by design: the lift estimates
    have no backing in such a space). Any stage failure aborts with the
    stage index and cause.
    """
    for m in range(3, cfg.m_max + 1):
        ok, fam = verify_block_family(cfg.spec, cfg.x0, 2 * m, cfg.eps, cfg.mode)
        if not ok:
            raise InvalidInputError(
                f"block family fails for {cfg.spec.label} at n={2 * m}: "
                f"joint norm {fam.joint_norm!r} outside "
                f"[{fam.lower_required!r}, {fam.upper_required!r}]"
            )
    _stage_size_guard(cfg.m_max, cfg.x0)

    p, schedule = construction_schedule(cfg, cfg.m_max)
    growth = build_slow_growth(schedule)
    contrast = build_damped_abs(growth)

    node_vals = np.asarray(growth.value(schedule.s))
    node_err = float(np.max(np.abs(node_vals - schedule.q) / schedule.q))

    stages = []
    pairs = []
    for m in range(3, cfg.m_max + 1):
        try:
            st = build_stage(cfg, m, p, contrast, growth)
            pr = build_commutator_pair(
                cfg.spec,
                contrast,
                st.w,
                st.witness.test_matrix,
                r=m - 2,
                tol=cfg.tolerances["spectrum_tol"],
            )
        except Exception as exc:
            raise type(exc)(f"stage m={m}: {exc}") from exc
        stages.append(st)
        pairs.append(pr)

    direct = assemble_direct_sum(pairs, len(pairs))
    return ConstructionReport(
        config=cfg,
        p=p,
        schedule=schedule,
        stages=stages,
        pairs=pairs,
        direct_sum=direct,
        envelope_node_error=node_err,
    )
